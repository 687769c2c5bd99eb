"""End-to-end acceptance checks, each timed against its limit.

Every check prints one ``PASS``/``FAIL`` line (with the elapsed time) to the
terminal, then asserts, so a failure shows up both in the report and in the
pytest outcome.
"""

import subprocess
import sys
import time
from pathlib import Path

import pytest

from maxmult import (
    CoordinatePrime,
    Ideal,
    ReesAlgebra,
    RingSpec,
    Tower,
    algebra_equal_up_to,
    blowup_charts,
    diff_saturate,
    eliminate_algebra,
    max_mult_stratum,
    presentation_algebra,
    rees_integrality_test,
    restrict_to_subscheme,
    stratum_contains,
    strong_transversality_probe,
    tower_transform,
    weak_transform,
    zariski_check,
)
from maxmult.groebner import clear_cache
from maxmult.multiplicity import hilbert_samuel_lengths
from maxmult.rees import sing_is_empty
from maxmult.transversality import monomial_closure_membership

ROOT = Path(__file__).resolve().parent.parent


def _alg(ring, pairs, modulo=None):
    return ReesAlgebra.parse(ring, pairs, modulo)


def _same(polys, texts):
    polys = list(polys)
    return len(polys) == len(texts) and set(polys) == {polys[0].ring.parse(t) for t in texts}


def _report(capsys, label, limit, check):
    clear_cache()
    start = time.perf_counter()
    failures = check()
    elapsed = time.perf_counter() - start
    if elapsed >= limit:
        failures.append(f"took {elapsed:.2f} s, limit {limit} s")
    with capsys.disabled():
        status = "PASS" if not failures else "FAIL"
        print(f"\n{status} {label} ({elapsed:.2f} s < {limit} s)" if not failures
              else f"\n{status} {label}: " + "; ".join(failures))
    assert not failures


def _example_74():
    bad = []
    X = Tower.build(2, ["t", "x"], [("y", "y^4 - x^13")])
    Xp = Tower.build(2, ["t", "x"], [("y", "y^4 - x^13"), ("z", "z^2 - x^5")])
    for T, mult in ((X, 4), (Xp, 8)):
        rep = max_mult_stratum(T)
        if not (rep.nonempty and rep.expected_mult == mult and stratum_contains(T, CoordinatePrime(T.ring.variables))):
            bad.append(f"stratum of rank {mult} tower")
    ring, G = presentation_algebra(X)
    GX = restrict_to_subscheme(diff_saturate(G), X.ideal())
    GXp = restrict_to_subscheme(diff_saturate(presentation_algebra(Xp)[1]), Xp.ideal())
    if [(f.to_text(), w) for f, w in GX.gens] != [("x^12", 3)]:
        bad.append(f"restricted base algebra {GX.gens}")
    if [(f.to_text(), w) for f, w in GXp.gens] != [("x^4", 1)]:
        bad.append(f"restricted extension algebra {GXp.gens}")
    R = Xp.ring
    v = rees_integrality_test(ReesAlgebra(R, [(R.parse("x^12"), 3)], Xp.ideal()),
                              ReesAlgebra(R, [(R.parse("x^4"), 1)], Xp.ideal()))
    eqs = v.witness.get("equations", []) if v.integral else []
    if not (len(eqs) == 1 and eqs[0]["N"] == 3 and eqs[0]["verified"]):
        bad.append(f"integrality {v.status}")
    X1, Xp1 = (tower_transform(T, CoordinatePrime(T.ring.variables), "t") for T in (X, Xp))
    if not _same(Xp1.relations, ["y^4 - t^9*x^13", "z^2 - t^3*x^5"]):
        bad.append("first blow-up relations")
    X2 = tower_transform(X1, CoordinatePrime(["t", "y"]), "t")
    Xp2 = tower_transform(Xp1, CoordinatePrime(["t", "y", "z"]), "t")
    if not _same(Xp2.relations, ["y^4 - t^5*x^13", "z^2 - t*x^5"]):
        bad.append("second blow-up relations")
    if not stratum_contains(X2, CoordinatePrime(["t", "y"])):
        bad.append("base stratum misses ⟨t2,y2⟩")
    if stratum_contains(Xp2, CoordinatePrime(["t", "y", "z"])):
        bad.append("extension stratum contains ⟨t2,y2,z2⟩")
    steps = [(CoordinatePrime(["t", "x", "y", "z"]), "t"), (CoordinatePrime(["t", "y", "z"]), "t")]
    probe = strong_transversality_probe(X, Xp, steps, [CoordinatePrime(["t", "y"])])
    if probe.verdict != "violated":
        bad.append(f"probe verdict {probe.verdict}")
    return bad


def _example_522():
    bad = []
    F2 = RingSpec(2, ("x", "y"))
    G = _alg(F2, [("x^2", 1), ("y^2 - x^3", 2)])
    E = eliminate_algebra(diff_saturate(G), ["y"], 2)
    if not algebra_equal_up_to(E, _alg(E.ring, [("x^2", 1)]), 2):
        bad.append("elimination is not [x^2 W]")
    chart = next(c for c in blowup_charts(F2, CoordinatePrime(["x", "y"])) if c.chart_var == "x")
    if not sing_is_empty(weak_transform(G, chart)):
        bad.append("extension transform has a singular point")
    F1 = RingSpec(2, ("x",))
    (c1,) = [c for c in blowup_charts(F1, CoordinatePrime(["x"])) if c.chart_var == "x"]
    G1 = weak_transform(_alg(F1, [("x^2", 1)]), c1)
    if [(f.to_text(), w) for f, w in G1.gens] != [("x", 1)] or sing_is_empty(G1):
        bad.append(f"base transform {G1.gens}")
    return bad


def _example_85():
    bad = []
    R = RingSpec(0, ("x", "T"))
    D = diff_saturate(_alg(R, [("T^3 + x^3*T + x^7", 3)]))
    if not algebra_equal_up_to(D, _alg(R, [("T", 1), ("x^2", 1), ("x^3", 2)]), 3):
        bad.append("saturation is not [T W, x^2 W, x^3 W^2]")
    E = eliminate_algebra(D, ["T"], 3)
    if not algebra_equal_up_to(E, _alg(E.ring, [("x^2", 1), ("x^3", 2)]), 3):
        bad.append("elimination is not [x^2 W, x^3 W^2]")
    QXZ = RingSpec(0, ("x", "z"))
    H = _alg(QXZ, [("x^2", 1), ("x^3", 2)], ["z^2 - x^3"])
    v = rees_integrality_test(H, H.with_gens(list(H.gens) + [(QXZ.parse("z"), 1)]))
    Ns = {eq["generator"]: eq["N"] for eq in v.witness.get("equations", [])} if v.integral else {}
    if Ns.get("z W") != 2:
        bad.append(f"z W over H: {v.status}")
    QX = RingSpec(0, ("x",))
    if monomial_closure_membership(QX.parse("x"), Ideal.parse(QX, ["x^2"])):
        bad.append("x reported in the closure of <x^2>")
    return bad


def _zariski_cusp():
    bad = []
    QX = RingSpec(0, ("x",))
    ext = Tower.build(0, ["x"], [("y", "y^2 - x^3")])
    rep = zariski_check((QX, Ideal(QX)), ext, CoordinatePrime(["x"]))
    if (rep.lhs, rep.rhs, rep.equal) != (2, 2, True):
        bad.append(f"LHS {rep.lhs} RHS {rep.rhs}")
    lengths = hilbert_samuel_lengths((ext.ring, ext.ideal()), CoordinatePrime(["x", "y"]), 8)
    if lengths != [2 * n - 1 for n in range(1, 9)]:
        bad.append(f"lengths {lengths}")
    return bad


def _property_suite():
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-m", "property", "-q", "-p", "no:cacheprovider"],
        cwd=ROOT, capture_output=True, text=True, timeout=600)
    if proc.returncode != 0:
        return [proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else "pytest failed"]
    return []


def test_example_7_4_end_to_end(capsys):
    _report(capsys, "example_7_4 end to end", 10, _example_74)


def test_example_5_22(capsys):
    _report(capsys, "example_5_22 in char 2", 1, _example_522)


def test_example_8_5(capsys):
    _report(capsys, "example_8_5 in char 0", 5, _example_85)


def test_zariski_formula_on_cusp(capsys):
    _report(capsys, "Zariski formula on the cusp", 2, _zariski_cusp)


def test_property_suites(capsys):
    _report(capsys, "property suites", 60, _property_suite)
