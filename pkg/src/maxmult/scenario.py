"""JSON scenario files: objects, a script of operations, and expectations.

A scenario looks like::

    {"schema": 1, "name": "cusp", "char": 0,
     "objects": {"C": {"type": "tower", "base_vars": ["x"],
                       "steps": [{"var": "y", "relation": "y^2 - x^3"}]}},
     "script": [{"op": "max_mult_stratum", "args": {"tower": "$C"}, "bind": "S"}],
     "expect": [{"path": "S.expected_mult", "equals": 2}],
     "headline": "S"}

Arguments starting with ``$`` refer to objects or earlier bindings
(``$S.stratum_ideal`` follows attributes and keys).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from maxmult.blowup import BlowupChart, strict_transform, tower_transform, weak_transform
from maxmult.errors import MaxMultError, ParseError
from maxmult.groebner import gb_budget, ideal_equal, is_unit_ideal
from maxmult.multiplicity import (
    StratumReport,
    ZariskiReport,
    hilbert_samuel_multiplicity,
    max_mult_stratum,
    presentation_algebra,
    stratum_contains,
    zariski_check,
)
from maxmult.points import CoordinatePrime
from maxmult.rees import (
    ReesAlgebra,
    algebra_equal_up_to,
    diff_saturate,
    eliminate_algebra,
    in_sing,
    restrict_to_subscheme,
    sing_is_empty,
    sing_locus,
    tau_at_point,
)
from maxmult.ring import Ideal, Polynomial, RingSpec
from maxmult.tower import Tower
from maxmult.transversality import (
    ConditionStarReport,
    ConstructionReport,
    IntegralityVerdict,
    SequenceProbe,
    TransversalityReport,
    condition_star,
    construct_extension,
    is_transversal,
    monomial_closure_membership,
    reduction_test,
    rees_integrality_test,
    strong_transversality_probe,
)

SCHEMA_VERSION = 1
_PRIME_ITEM = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:([+-])\s*(\d+(?:/\d+)?))?\s*$")


# -- parsing helpers -----------------------------------------------------------------

def parse_prime(spec) -> CoordinatePrime:
    """``"t,y"``, ``"x-1,y"`` or ``{"vars": [...], "translate": {...}}``."""
    if isinstance(spec, CoordinatePrime):
        return spec
    if isinstance(spec, dict):
        shift = {v: Fraction(a) if isinstance(a, str) else a
                 for v, a in spec.get("translate", {}).items()}
        return CoordinatePrime(spec["vars"], shift)
    if isinstance(spec, str):
        text = spec.strip().strip("⟨⟩<>")
        names, shift = [], {}
        for item in text.split(","):
            m = _PRIME_ITEM.match(item)
            if not m:
                raise ParseError(f"bad coordinate prime {spec!r}")
            name, sign, num = m.groups()
            names.append(name)
            if num:
                a = Fraction(num)
                shift[name] = a if sign == "-" else -a
        return CoordinatePrime(names, shift)
    raise ParseError(f"cannot read a coordinate prime from {spec!r}")


def _ring(spec: dict, char: int) -> RingSpec:
    return RingSpec(int(spec.get("char", char)), tuple(spec["vars"]))


def build_object(spec, char: int, env: dict):
    if not isinstance(spec, dict) or "type" not in spec:
        raise ParseError(f"object needs a type: {spec!r}")
    kind = spec["type"]
    ring = None
    if "ring_of" in spec:
        ring = _lookup(env, spec["ring_of"]).ring
    if kind == "tower":
        d = dict(spec)
        d.setdefault("char", char)
        return Tower.from_dict(d)
    if kind == "algebra":
        ring = ring or _ring(spec, char)
        return ReesAlgebra.parse(ring, [(g["poly"], g["weight"]) for g in spec.get("gens", [])],
                                 spec.get("modulo"))
    if kind == "ideal":
        ring = ring or _ring(spec, char)
        return Ideal.parse(ring, spec.get("gens", []))
    if kind == "poly":
        ring = ring or _ring(spec, char)
        return ring.parse(spec["text"])
    if kind == "prime":
        return parse_prime(spec)
    raise ParseError(f"unknown object type {kind!r}")


def _lookup(env: dict, ref: str):
    ref = ref[1:] if ref.startswith("$") else ref
    head, *rest = ref.split(".")
    if head not in env:
        raise ParseError(f"undefined binding {head!r}")
    val = env[head]
    for part in rest:
        if isinstance(val, dict):
            val = val[part]
        elif isinstance(val, (list, tuple)) and part.isdigit():
            val = val[int(part)]
        else:
            val = getattr(val, part)
    return val


def _resolve(value, env: dict):
    if isinstance(value, str) and value.startswith("$"):
        return _lookup(env, value)
    if isinstance(value, list):
        return [_resolve(v, env) for v in value]
    if isinstance(value, dict):
        return {k: _resolve(v, env) for k, v in value.items()}
    return value


# -- rendering -------------------------------------------------------------------------

def render(obj) -> str:
    """One-line canonical text for any result."""
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, ReesAlgebra):
        text = f"{obj.ring} {obj.to_text()}"
        if obj.modulo is not None:
            text += f" mod {obj.modulo.to_text()}"
        return text
    if isinstance(obj, (Ideal, Polynomial, Tower, CoordinatePrime)):
        return obj.to_text()
    if isinstance(obj, StratumReport):
        return f"{obj.summary()}; saturated {obj.saturated.to_text()}"
    if isinstance(obj, ZariskiReport):
        rel = "=" if obj.equal else "≠"
        return (f"LHS {obj.base_mult}·{obj.rank} = {obj.lhs} {rel} RHS {obj.rhs}; "
                f"chain {'holds' if obj.chain_holds else 'fails'}")
    if isinstance(obj, IntegralityVerdict):
        return _render_verdict(obj)
    if isinstance(obj, (SequenceProbe, TransversalityReport)):
        return obj.summary()
    if isinstance(obj, ConditionStarReport):
        flags = ", ".join(f"({k}) {v}" for k, v in obj.flags.items())
        return f"condition (*) at {obj.candidate.to_text()}: {obj.status} [{flags}]"
    if isinstance(obj, ConstructionReport):
        return f"{obj.status}; H = {obj.H.to_text()}; {_render_verdict(obj.verdict)}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(render(x) for x in obj) + "]"
    return str(obj)


def _render_verdict(v: IntegralityVerdict) -> str:
    if v.status == "integral":
        eqs = v.witness.get("equations")
        if eqs is not None:
            parts = [f"{e['generator']} (N = {e['N']})" for e in eqs]
            return "integral: " + ", ".join(parts)
        return f"integral (n = {v.witness.get('n')})"
    if v.status == "refuted":
        refs = v.witness.get("refutations")
        if refs:
            return "refuted: " + ", ".join(
                f"{r['generator']} by valuation {_fmt_val(r['valuation'])}" for r in refs)
        return f"refuted by valuation {_fmt_val(v.witness.get('valuation'))}"
    return "inconclusive: " + "; ".join(v.diagnostics)


def _fmt_val(val) -> str:
    if isinstance(val, dict):
        return "{" + ", ".join(f"{k}: {x}" for k, x in val.items()) + "}"
    return "(" + ", ".join(str(x) for x in val) + ")"


def to_jsonable(obj):
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, Polynomial):
        return obj.to_text()
    if isinstance(obj, Ideal):
        return obj.texts()
    if hasattr(obj, "as_dict"):
        from maxmult.transversality import _plain
        return _plain(obj.as_dict())
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return str(obj)


# -- operations ------------------------------------------------------------------------

@dataclass
class Defaults:
    """Budget defaults; ``None`` falls back to the scenario, then the library."""

    n_max: int | None = None
    D: int | None = None
    budget_gb: int | None = None
    n_range: int | None = None

    def merged(self, budgets: dict) -> "Defaults":
        pick = lambda mine, key, fallback: mine if mine is not None else budgets.get(key, fallback)
        return Defaults(pick(self.n_max, "n_max", 6), pick(self.D, "D", None),
                        pick(self.budget_gb, "gb", None), pick(self.n_range, "n_range", 8))


def _as_ideal(x) -> Ideal:
    if isinstance(x, Tower):
        return x.ideal()
    if isinstance(x, Ideal):
        return x
    raise ParseError(f"expected an ideal or tower, got {type(x).__name__}")


def _poly_in(ring: RingSpec, x) -> Polynomial:
    return ring.parse(x) if isinstance(x, str) else x


def _op_restrict(a, d):
    G = a["algebra"]
    I = _as_ideal(a["ideal"])
    if I.ring != G.ring:
        I = Ideal(G.ring, [g.change_ring(G.ring) for g in I.generators])
    return restrict_to_subscheme(G, I)


def _op_contains(a, d):
    p = parse_prime(a["prime"])
    if "tower" in a:
        return stratum_contains(a["tower"], p)
    return in_sing(diff_saturate(a["algebra"]), p)


def _op_hs(a, d):
    if "tower" in a:
        ring, I = a["tower"].ring, a["tower"].ideal()
    else:
        I = a["ideal"]
        ring = I.ring
    q = parse_prime(a["q"])
    at = parse_prime(a["at"]) if "at" in a else None
    return hilbert_samuel_multiplicity((ring, I), q, a.get("n_range", d.n_range), at=at)


def _op_zariski(a, d):
    ext = a["ext"]
    bring = ext.base_ring()
    bideal = Ideal(bring, [g.change_ring(bring) for g in ext.base_relations])
    fiber = None
    if "fiber" in a:
        fiber = [(parse_prime(f["prime"]), int(f.get("residue_degree", 1))) for f in a["fiber"]]
    return zariski_check((bring, bideal), ext, parse_prime(a["point"]), fiber,
                         a.get("n_range", d.n_range))


def _op_reduction(a, d):
    J = a["ideal"]
    mod = a.get("modulo")
    if mod is not None and not isinstance(mod, Ideal):
        mod = Ideal.parse(J.ring, mod)
    return reduction_test(J, _poly_in(J.ring, a["theta"]), a.get("n_max", d.n_max), mod)


def _steps(raw) -> list:
    return [(parse_prime(s["center"]), s["chart"]) for s in raw]


def _op_lift(a, d):
    G = a["algebra"]
    ring = a["ring_of"].ring
    mod = None
    if G.modulo is not None:
        mod = Ideal(ring, [g.change_ring(ring) for g in G.modulo.generators])
    return ReesAlgebra(ring, [(f.change_ring(ring), w) for f, w in G.gens], mod)


def _op_construct(a, d):
    rels = [(r["var"], r["relation"]) for r in a["relations"]]
    ext, report = construct_extension(a["base"], rels, a.get("D", d.D), a.get("n_max", d.n_max))
    return report


OPS = {
    "presentation": lambda a, d: presentation_algebra(a["tower"])[1],
    "sing_locus": lambda a, d: sing_locus(a["algebra"]),
    "sing_is_empty": lambda a, d: sing_is_empty(a["algebra"]),
    "diff_saturate": lambda a, d: diff_saturate(a["algebra"]),
    "eliminate_algebra": lambda a, d: eliminate_algebra(a["algebra"], a["zvars"], a.get("D", d.D)),
    "restrict": _op_restrict,
    "lift": _op_lift,
    "tau": lambda a, d: tau_at_point(a["algebra"], parse_prime(a["point"])),
    "algebra_equal": lambda a, d: algebra_equal_up_to(a["a"], a["b"], a.get("D", d.D)),
    "max_mult_stratum": lambda a, d: max_mult_stratum(a["tower"]),
    "stratum_contains": _op_contains,
    "tower_transform": lambda a, d: tower_transform(a["tower"], parse_prime(a["center"]), a["chart"]),
    "strict_transform": lambda a, d: strict_transform(
        _as_ideal(a["ideal"]), BlowupChart(_as_ideal(a["ideal"]).ring, parse_prime(a["center"]), a["chart"])),
    "weak_transform": lambda a, d: weak_transform(
        a["algebra"], BlowupChart(a["algebra"].ring, parse_prime(a["center"]), a["chart"])),
    "hilbert_samuel": _op_hs,
    "zariski": _op_zariski,
    "reduction_test": _op_reduction,
    "monomial_closure": lambda a, d: monomial_closure_membership(
        _poly_in(a["ideal"].ring, a["theta"]), a["ideal"]),
    "integrality": lambda a, d: rees_integrality_test(
        a["H"], a["Hp"], a.get("D", d.D), a.get("n_max", d.n_max), a.get("base_vars")),
    "is_transversal": lambda a, d: is_transversal(a["base"], a["ext"]),
    "condition_star": lambda a, d: condition_star(a["base"], a["ext"], parse_prime(a["prime"]),
                                                  a.get("n_max", d.n_max)),
    "probe": lambda a, d: strong_transversality_probe(
        a["base"], a["ext"], _steps(a.get("steps", [])),
        [parse_prime(p) for p in a.get("probes", [])]),
    "construct": _op_construct,
    "is_unit": lambda a, d: is_unit_ideal(_as_ideal(a["ideal"])),
}


# -- expectations ----------------------------------------------------------------------

def _check(exp: dict, env: dict, defaults: Defaults):
    path = exp["path"]
    val = _lookup(env, path)
    if "equals" in exp:
        want = exp["equals"]
        if isinstance(want, str) and not isinstance(val, str):
            got = render(val)
        else:
            got = val
        return got == want, f"{path} = {render(val)}; expected {want}"
    if "graded_equal" in exp:
        spec = dict(exp["graded_equal"])
        spec.setdefault("type", "algebra")
        other = build_object({**spec, "ring_of": f"${path}"}, val.ring.characteristic, env)
        if val.modulo is not None and other.modulo is None:
            other = ReesAlgebra(other.ring, other.gens, val.modulo)
        ok = algebra_equal_up_to(val, other, exp.get("D", defaults.D))
        return ok, f"{path} gradedwise {'=' if ok else '≠'} {other.to_text()}"
    if "ideal_equal" in exp:
        ring = val.ring
        other = Ideal.parse(ring, exp["ideal_equal"])
        ok = ideal_equal(_as_ideal(val), other)
        return ok, f"{path} {'=' if ok else '≠'} {other.to_text()}"
    if "relations" in exp:
        T = val
        want = [T.ring.parse(t) for t in exp["relations"]]
        ok = list(T.relations) == want
        return ok, f"{path} relations {[f.to_text() for f in T.relations]}"
    raise ParseError(f"unknown expectation {exp!r}")


# -- runner ------------------------------------------------------------------------------

@dataclass
class RunResult:
    exit_code: int
    lines: list = field(default_factory=list)
    env: dict = field(default_factory=dict)


def load_scenario(source) -> dict:
    """A path, a bundled scenario name, or an already parsed dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = None
        path = Path(source)
        if path.exists():
            text = path.read_text(encoding="utf-8")
        else:
            name = str(source)
            res = resources.files("maxmult") / "scenarios" / f"{name}.json"
            if not res.is_file():
                raise ParseError(f"no scenario file or bundled scenario named {name!r}")
            text = res.read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if data.get("schema") != SCHEMA_VERSION:
        raise ParseError(f"unsupported scenario schema {data.get('schema')!r}")
    return data


def bundled_scenarios() -> list:
    root = resources.files("maxmult") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def build_env(data: dict) -> dict:
    char = int(data.get("char", 0))
    env = {}
    for name, spec in data.get("objects", {}).items():
        env[name] = build_object(spec, char, env)
    return env


def run_scenario(source, fmt: str = "text", defaults: Defaults | None = None) -> RunResult:
    defaults = defaults or Defaults()
    out = []

    def emit(record: dict, text: str):
        out.append(json.dumps(record, ensure_ascii=False, sort_keys=True) if fmt == "jsonlines" else text)

    try:
        data = load_scenario(source)
        defaults = defaults.merged(data.get("budgets", {}))
        env = build_env(data)
    except (ParseError, KeyError, ValueError) as exc:
        emit({"error": str(exc), "kind": "parse"}, f"error: {exc}")
        return RunResult(2, out)
    script = data.get("script", [])
    for k, step in enumerate(script, start=1):
        op = step.get("op")
        if op not in OPS:
            emit({"error": f"unknown operation {op!r}", "kind": "parse"}, f"error: unknown operation {op!r}")
            return RunResult(2, out, env)
        bind = step.get("bind", f"_{k}")
        try:
            args = _resolve(step.get("args", {}), env)
            with gb_budget(step.get("budget_gb", defaults.budget_gb)):
                result = OPS[op](args, defaults)
        except ParseError as exc:
            emit({"step": k, "op": op, "error": str(exc)}, f"error in step {k} ({op}): {exc}")
            return RunResult(2, out, env)
        except MaxMultError as exc:
            emit({"step": k, "op": op, "error": str(exc)}, f"error in step {k} ({op}): {exc}")
            return RunResult(exc.exit_code, out, env)
        except (KeyError, ValueError) as exc:
            emit({"step": k, "op": op, "error": str(exc)}, f"error in step {k} ({op}): {exc}")
            return RunResult(3, out, env)
        env[bind] = result
        emit({"step": k, "op": op, "bind": bind, "result": to_jsonable(result)},
             f"[{k}] {bind} = {op}: {render(result)}")
    passed = failed = 0
    failures = []
    for exp in data.get("expect", []):
        try:
            ok, msg = _check(exp, env, defaults)
        except (ParseError, KeyError, AttributeError) as exc:
            emit({"error": str(exc), "kind": "parse"}, f"error in expectation: {exc}")
            return RunResult(2, out, env)
        if ok:
            passed += 1
        else:
            failed += 1
            failures.append(msg)
            emit({"expectation": exp.get("path"), "ok": False, "detail": msg}, f"FAILED {msg}")
    if not script and not data.get("expect"):
        return RunResult(0, out, env)
    summary = {"scenario": data.get("name", ""), "steps": len(script),
               "expectations": {"passed": passed, "failed": failed},
               "status": "ok" if failed == 0 else "failed"}
    headline = data.get("headline")
    if headline and headline in env:
        summary["headline"] = render(env[headline])
    if fmt == "jsonlines":
        out.append(json.dumps({"summary": summary}, ensure_ascii=False, sort_keys=True))
    else:
        out.append("--- summary ---")
        out.append(json.dumps(summary, ensure_ascii=False, sort_keys=True))
        if "headline" in summary:
            out.append(summary["headline"])
    return RunResult(0 if failed == 0 else 1, out, env)
