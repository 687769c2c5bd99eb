"""Command-line front end: ``maxmult <subcommand> ...``.

Exit codes: 0 success, 1 a scenario expectation failed, 2 bad input,
3 a negative mathematical verdict (refuted, violated, not permissible),
4 a budget ran out or the answer is inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from maxmult.blowup import blowup_charts
from maxmult.errors import MaxMultError, ParseError
from maxmult.groebner import gb_budget
from maxmult.rees import ReesAlgebra
from maxmult.ring import Ideal, RingSpec
from maxmult.scenario import (
    OPS,
    Defaults,
    bundled_scenarios,
    parse_prime,
    render,
    run_scenario,
    to_jsonable,
)
from maxmult.session import run_session
from maxmult.tower import Tower


def _csv(text: str) -> list:
    return [s.strip() for s in text.split(",") if s.strip()]


def _assign(text: str) -> tuple:
    var, sep, poly = text.partition("=")
    if not sep or not var.strip():
        raise ParseError(f"expected VAR=POLY, got {text!r}")
    return var.strip(), poly.strip()


def _weighted(text: str) -> tuple:
    poly, sep, w = text.rpartition(":")
    if not sep:
        return text, 1
    try:
        return poly, int(w)
    except ValueError:
        raise ParseError(f"bad weight in {text!r}") from None


def _ring(args) -> RingSpec:
    if not args.vars:
        raise ParseError("--vars is required")
    return RingSpec(args.char, tuple(_csv(args.vars)))


def _tower(args, with_ext: bool = False) -> Tower:
    if not args.base_vars:
        raise ParseError("--base-vars is required")
    steps = [_assign(s) for s in args.step]
    if with_ext:
        steps += [_assign(s) for s in args.ext_step]
    return Tower.build(args.char, _csv(args.base_vars), steps, args.base_relation)


def _algebra(args) -> ReesAlgebra:
    if args.gen:
        return ReesAlgebra.parse(_ring(args), [_weighted(g) for g in args.gen], args.modulo or None)
    if args.base_vars:
        return OPS["presentation"]({"tower": _tower(args, with_ext=True)}, None)
    raise ParseError("give generators with --vars/--gen or a tower with --base-vars/--step")


# -- subcommand handlers: each returns the result object -------------------------------

def _cmd_sing(args, d):
    return OPS["sing_locus"]({"algebra": _algebra(args)}, d)


def _cmd_diff_sat(args, d):
    return OPS["diff_saturate"]({"algebra": _algebra(args)}, d)


def _cmd_eliminate(args, d):
    if not args.zvars:
        raise ParseError("--zvars is required")
    G = OPS["diff_saturate"]({"algebra": _algebra(args)}, d)
    return OPS["eliminate_algebra"]({"algebra": G, "zvars": _csv(args.zvars)}, d)


def _cmd_blowup(args, d):
    if not args.center:
        raise ParseError("--center is required")
    center = parse_prime(args.center)
    if args.base_vars and not args.gen:
        obj, op, key = _tower(args, with_ext=True), "tower_transform", "tower"
    elif args.ideal:
        obj, op, key = Ideal.parse(_ring(args), args.ideal), "strict_transform", "ideal"
    else:
        obj, op, key = _algebra(args), "weak_transform", "algebra"
    charts = [args.chart] if args.chart else [c.chart_var for c in blowup_charts(obj.ring, center)]
    if key == "tower" and not args.chart:
        charts = [c for c in charts if c in obj.base_vars]
    results = {c: OPS[op]({key: obj, "center": center, "chart": c}, d) for c in charts}
    return results[args.chart] if args.chart else results


def _cmd_stratum(args, d):
    tower = _tower(args, with_ext=True)
    if args.at:
        return OPS["stratum_contains"]({"tower": tower, "prime": args.at}, d)
    return OPS["max_mult_stratum"]({"tower": tower}, d)


def _cmd_mult_oracle(args, d):
    if args.ideal:
        a = {"ideal": Ideal.parse(_ring(args), args.ideal)}
    else:
        a = {"tower": _tower(args, with_ext=True)}
    ring = a["ideal"].ring if "ideal" in a else a["tower"].ring
    a["q"] = args.q or ",".join(ring.variables)
    if args.at:
        a["at"] = args.at
    return OPS["hilbert_samuel"](a, d)


def _cmd_zariski(args, d):
    if not args.at:
        raise ParseError("--at is required")
    return OPS["zariski"]({"ext": _tower(args, with_ext=True), "point": args.at}, d)


def _cmd_integrality(args, d):
    if not args.h:
        raise ParseError("--h is required")
    ring = _ring(args)
    H = ReesAlgebra.parse(ring, [_weighted(g) for g in args.h], args.modulo or None)
    Hp = H.with_gens(list(H.gens) + [(ring.parse(p), w) for p, w in map(_weighted, args.hp)])
    a = {"H": H, "Hp": Hp}
    base_vars = _csv(args.base_vars) if args.base_vars else None
    return OPS["integrality"]({**a, "base_vars": base_vars}, d)


def _cmd_probe(args, d):
    steps = []
    for b in args.blowup:
        center, sep, chart = b.rpartition(":")
        if not sep:
            raise ParseError(f"expected CENTER:CHART, got {b!r}")
        steps.append({"center": center, "chart": chart})
    return OPS["probe"]({"base": _tower(args), "ext": _tower(args, with_ext=True),
                         "steps": steps, "probes": args.probe}, d)


def _cmd_construct(args, d):
    if not args.new:
        raise ParseError("--new is required")
    rels = [{"var": v, "relation": p} for v, p in map(_assign, args.new)]
    return OPS["construct"]({"base": _tower(args), "relations": rels}, d)


HANDLERS = {
    "sing": _cmd_sing,
    "diff-sat": _cmd_diff_sat,
    "eliminate": _cmd_eliminate,
    "blowup": _cmd_blowup,
    "stratum": _cmd_stratum,
    "mult-oracle": _cmd_mult_oracle,
    "zariski": _cmd_zariski,
    "integrality": _cmd_integrality,
    "probe": _cmd_probe,
    "construct": _cmd_construct,
}


def _add_object_flags(p):
    g = p.add_argument_group("objects")
    g.add_argument("--vars", help="ring variables, e.g. x,y,z")
    g.add_argument("--gen", action="append", default=[], metavar="POLY:W",
                   help="Rees generator with its weight (repeatable)")
    g.add_argument("--modulo", action="append", default=[], metavar="POLY",
                   help="relation of the ambient quotient (repeatable)")
    g.add_argument("--ideal", action="append", default=[], metavar="POLY",
                   help="ideal generator (repeatable)")
    g.add_argument("--base-vars", help="base variables of a tower, e.g. t,x")
    g.add_argument("--step", action="append", default=[], metavar="Z=POLY",
                   help="monic relation adjoining Z (repeatable, in order)")
    g.add_argument("--ext-step", action="append", default=[], metavar="Z=POLY",
                   help="further relation belonging to the extension only")
    g.add_argument("--base-relation", action="append", default=[], metavar="POLY",
                   help="relation among the base variables")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", type=int, default=0, help="characteristic (0 or a prime)")
    common.add_argument("--budget-gb", type=int, default=None,
                        help="reduction-step budget for each Gröbner computation")
    common.add_argument("--degree-bound", type=int, default=None, help="degree bound D")
    common.add_argument("--nmax", type=int, default=None, help="largest power tried by searches")
    common.add_argument("--format", choices=["text", "jsonlines"], default="text")

    parser = argparse.ArgumentParser(prog="maxmult", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        "sing": "singular locus of a Rees algebra",
        "diff-sat": "differential saturation",
        "eliminate": "elimination algebra of the saturation, down to the remaining variables",
        "blowup": "transform along a coordinate center (one chart or all)",
        "stratum": "maximum-multiplicity stratum of a tower",
        "mult-oracle": "Hilbert-Samuel multiplicity from standard-monomial counts",
        "zariski": "check the Zariski multiplicity formula at a point",
        "integrality": "is H' integral over H",
        "probe": "follow blow-ups of a pair and compare their strata",
        "construct": "adjoin relations and certify strong transversality",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, parents=[common], help=text, description=text)
        _add_object_flags(p)
        if name == "eliminate":
            p.add_argument("--zvars", help="variables to eliminate")
        if name == "blowup":
            p.add_argument("--center", help="coordinate center, e.g. t,x,y")
            p.add_argument("--chart", help="chart variable (all charts when omitted)")
        if name in ("stratum", "mult-oracle", "zariski"):
            p.add_argument("--at", help="coordinate prime or point, e.g. t,y or x-1,y")
        if name == "mult-oracle":
            p.add_argument("--q", help="ideal of definition (default: all variables)")
            p.add_argument("--n-range", type=int, default=None)
        if name == "zariski":
            p.add_argument("--n-range", type=int, default=None)
        if name == "integrality":
            p.add_argument("--h", action="append", default=[], metavar="POLY:W")
            p.add_argument("--hp", action="append", default=[], metavar="POLY:W",
                           help="generators added to H to form H'")
        if name == "probe":
            p.add_argument("--blowup", action="append", default=[], metavar="CENTER:CHART")
            p.add_argument("--probe", action="append", default=[], metavar="PRIME")
        if name == "construct":
            p.add_argument("--new", action="append", default=[], metavar="Z=POLY")

    p = sub.add_parser("run", parents=[common], help="run a JSON scenario")
    p.add_argument("scenario", nargs="?", help="path or bundled scenario name")
    p.add_argument("--list", action="store_true", help="list bundled scenarios")

    p = sub.add_parser("session", parents=[common], help="interactive blow-up walk on a scenario pair")
    p.add_argument("scenario", help="path or bundled scenario name with a session pair")
    p.add_argument("--commands", help="read commands from this file instead of stdin")
    p.add_argument("--echo", action="store_true", help="echo each command before its output")
    return parser


def _emit(result, args, out) -> None:
    if args.format == "jsonlines":
        print(json.dumps({"command": args.command, "result": to_jsonable(result)},
                         ensure_ascii=False, sort_keys=True), file=out)
    elif isinstance(result, dict):
        for key, val in result.items():
            print(f"chart {key}: {render(val)}", file=out)
    else:
        print(render(result), file=out)


def _exit_code(result) -> int:
    if isinstance(result, dict):
        return max((_exit_code(v) for v in result.values()), default=0)
    return int(getattr(result, "exit_code", 0))


def _run(args, out) -> int:
    if args.command == "run":
        if args.list or not args.scenario:
            for name in bundled_scenarios():
                print(name, file=out)
            return 0
        res = run_scenario(args.scenario, args.format,
                           Defaults(args.nmax, args.degree_bound, args.budget_gb))
        for line in res.lines:
            print(line, file=out)
        return res.exit_code
    if args.command == "session":
        if args.commands:
            with open(args.commands, encoding="utf-8") as fh:
                lines = fh.readlines()
        else:
            lines = sys.stdin
        with gb_budget(args.budget_gb):
            code, lines_out = run_session(args.scenario, lines, echo=args.echo)
        for line in lines_out:
            print(line, file=out)
        return code
    d = Defaults(args.nmax, args.degree_bound, args.budget_gb,
                 getattr(args, "n_range", None)).merged({})
    with gb_budget(args.budget_gb):
        result = HANDLERS[args.command](args, d)
    _emit(result, args, out)
    return _exit_code(result)


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return _run(args, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MaxMultError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
