"""Compare the compiled and pure-Python kernels on the same workloads.

Each backend runs in its own interpreter (``MAXMULT_PURE=1`` forces the
fallback), so the choice made at import time is the one being timed.

    python3 benchmarks/bench_kernels.py --repeat 3
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import maxmult
from maxmult import RingSpec, Ideal, groebner_basis, Polynomial
from maxmult.groebner import clear_cache
from maxmult.scenario import run_scenario

def cyclic(n, char):
    vs = tuple(f"x{i}" for i in range(n))
    R = RingSpec(char, vs)
    gens = []
    for d in range(1, n):
        terms = []
        for i in range(n):
            terms.append("*".join(vs[(i + j) % n] for j in range(d)))
        gens.append(" + ".join(terms))
    gens.append("*".join(vs) + " - 1")
    return Ideal.parse(R, gens)

def product(char, deg):
    R = RingSpec(char, ("x", "y", "z"))
    f = R.parse("x^3 + 2*y^2*z - 5*x*z + 7")
    g = R.parse("y^4 - 3*x*z^2 + x^2*y + 1")
    return f, g, deg

workloads = {
    "gb cyclic4 QQ": lambda: groebner_basis(cyclic(4, 0)),
    "gb cyclic6 GF(32003)": lambda: groebner_basis(cyclic(6, 32003)),
    "poly power GF(101)": lambda: (lambda f, g, d: (f * g) ** d)(*product(101, 4)),
    "scenario example_7_4": lambda: run_scenario("example_7_4"),
}
repeat = int(sys.argv[1])
out = {"backend": maxmult.BACKEND}
for name, fn in workloads.items():
    best = float("inf")
    for _ in range(repeat):
        clear_cache()
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    out[name] = best
print(json.dumps(out))
"""


def run_backend(pure: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("MAXMULT_PURE", None)
    if pure:
        env["MAXMULT_PURE"] = "1"
    res = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run_backend(False, args.repeat)
    slow = run_backend(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled kernels are not built; both columns use the pure-Python backend")
    print(f"{'workload':28s} {'cython s':>10s} {'python s':>10s} {'speedup':>8s}")
    for name in fast:
        if name == "backend":
            continue
        a, b = fast[name], slow[name]
        print(f"{name:28s} {a:10.4f} {b:10.4f} {b / a:8.2f}")


if __name__ == "__main__":
    main()
