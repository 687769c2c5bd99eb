"""Chart-by-chart blow-up walks on a (base, extension) pair.

State is a stack of snapshots, so ``undo`` restores the previous pair
exactly and replaying the same command log reproduces the same output.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from typing import Iterable

from maxmult.errors import MaxMultError, NotPermissibleError, ParseError
from maxmult.groebner import is_unit_ideal
from maxmult.scenario import build_env, load_scenario, parse_prime, render
from maxmult.transversality import _Side, generation_labels, strong_transversality_probe

HELP = """commands:
  blowup <center> <chart>   blow up both objects (center given for the extension)
  stratum                   show both top strata at the current stage
  probe <prime>             test a base prime at the current stage
  show <name>               base, ext, steps, log, or a scenario binding
  undo                      drop the last blow-up
  quit                      leave the session"""


class SessionExit(Exception):
    pass


@dataclass
class Snapshot:
    base: _Side
    ext: _Side
    steps: tuple = ()


@dataclass
class Session:
    base: object
    ext: object
    env: dict = field(default_factory=dict)
    stack: list = field(default_factory=list)
    log: list = field(default_factory=list)

    def __post_init__(self):
        self.stack = [Snapshot(_Side(self.base), _Side(self.ext))]

    @property
    def current(self) -> Snapshot:
        return self.stack[-1]

    @property
    def labels(self) -> dict:
        return generation_labels(self.current.ext.ring, len(self.current.steps))

    def _names(self, ring):
        L = self.labels
        return [L.get(v, v) for v in ring.variables]

    def execute(self, line: str) -> list:
        words = shlex.split(line)
        if not words or words[0].startswith("#"):
            return []
        cmd, args = words[0], words[1:]
        handler = getattr(self, f"cmd_{cmd}", None)
        if handler is None:
            raise ParseError(f"unknown command {cmd!r}")
        out = handler(*args)
        if cmd not in ("show", "quit"):
            self.log.append(line.strip())
        return out

    def cmd_blowup(self, center=None, chart=None):
        if center is None or chart is None:
            raise ParseError("usage: blowup <center> <chart>")
        snap = self.current
        c = parse_prime(center)
        c.check(snap.ext.ring)
        bc = c.restrict(snap.base.ring)
        if bc is None or chart not in snap.base.ring.variables:
            raise NotPermissibleError("the center must meet the base variables and the chart must be a base variable")
        if not snap.ext.contains(c):
            raise NotPermissibleError(f"center {c.to_text()} is not in the extension's stratum")
        ext = snap.ext.transform(c, chart)
        base = snap.base.transform(bc, chart)
        self.stack.append(Snapshot(base, ext, snap.steps + ((c, chart),)))
        k = len(self.stack) - 1
        return [f"stage {k}: base {render(base.obj)}", f"stage {k}: ext {render(ext.obj)}"]

    def cmd_stratum(self):
        snap = self.current
        out = []
        for name, side in (("base", snap.base), ("ext", snap.ext)):
            ideal = side.stratum()
            if is_unit_ideal(ideal):
                out.append(f"{name} stratum: empty")
            else:
                out.append(f"{name} stratum: V{ideal.to_text(self._names(ideal.ring))}")
        return out

    def cmd_probe(self, prime=None):
        if prime is None:
            raise ParseError("usage: probe <prime>")
        q = parse_prime(prime)
        q.check(self.current.base.ring)
        result = strong_transversality_probe(self.base, self.ext, list(self.current.steps), [q])
        stage = result.stages[-1]
        rec = stage.probes[0]
        L = stage.labels
        if rec.status == "outside both":
            line = f"{rec.prime.to_text(L)} lies outside both strata"
        else:
            line = (f"{rec.prime.to_text(L)}: base {'in' if rec.base_in else 'not in'} stratum, "
                    f"lift {rec.lift.to_text(L)} {'in' if rec.ext_in else 'not in'} stratum ({rec.status})")
        return [line, result.summary()]

    def cmd_show(self, name=None):
        snap = self.current
        if name in (None, "base"):
            return [render(snap.base.obj)]
        if name == "ext":
            return [render(snap.ext.obj)]
        if name == "steps":
            return [f"{c.to_text()} chart {ch}" for c, ch in snap.steps] or ["(no blow-ups)"]
        if name == "log":
            return list(self.log)
        if name in self.env:
            return [render(self.env[name])]
        raise ParseError(f"nothing to show under {name!r}")

    def cmd_undo(self):
        if len(self.stack) == 1:
            raise ParseError("nothing to undo")
        self.stack.pop()
        return [f"back at stage {len(self.stack) - 1}"]

    def cmd_help(self):
        return HELP.splitlines()

    def cmd_quit(self):
        raise SessionExit


def open_session(source) -> Session:
    data = load_scenario(source)
    env = build_env(data)
    spec = data.get("session", {"base": "base", "ext": "ext"})
    try:
        return Session(env[spec["base"]], env[spec["ext"]], env)
    except KeyError as exc:
        raise ParseError(f"scenario has no session object {exc}") from None


def run_session(source, commands: Iterable[str], echo: bool = False):
    """Run ``commands`` and return (exit code, output lines).

    Errors inside the loop are reported and the loop continues; the exit
    code is that of the last failing command (0 when none failed).
    """
    session = open_session(source)
    out = []
    code = 0
    for line in commands:
        line = line.rstrip("\n")
        if echo:
            out.append(f"> {line}")
        try:
            out.extend(session.execute(line))
        except SessionExit:
            break
        except MaxMultError as exc:
            out.append(f"error: {exc}")
            code = exc.exit_code
        except (KeyError, ValueError) as exc:
            out.append(f"error: {exc}")
            code = 2
    return code, out
