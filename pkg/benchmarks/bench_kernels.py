"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Micro benchmarks call both kernel modules directly on the same seeded data.
The end-to-end rows run the SL2 pipeline in a subprocess per backend, with
DERIVEDMW_PURE_PYTHON selecting the fallback.
"""

import argparse
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from derivedmw import _kernels_py

try:
    from derivedmw import _kernels as _kernels_c
except ImportError:
    _kernels_c = None

PIPELINE = """
import time
from derivedmw._backend import BACKEND
from derivedmw.scenario_io import CORPUS_DIR, build_report, load_scenario

sc = load_scenario(CORPUS_DIR / "sl2_cotangent_lift.toml")
times = []
for _ in range({repeat}):
    t0 = time.perf_counter()
    build_report(sc, cross_check=True)
    times.append(time.perf_counter() - t0)
print(BACKEND, min(times))
"""


def _terms(rng, n, size):
    return {(0,) + tuple(rng.randint(0, 4) for _ in range(n)): Fraction(rng.randint(1, 9), rng.randint(1, 3))
            for _ in range(size)}


def micro_cases(k):
    rng = random.Random(7)
    a, b = _terms(rng, 4, 30), _terms(rng, 4, 30)
    f, g = _terms(rng, 4, 10), _terms(rng, 4, 10)
    basis = []
    for _ in range(8):
        t = _terms(rng, 4, 6)
        lm = k.leading(t, 0, 0)
        c = t[lm]
        basis.append((lm, {m: v / c for m, v in t.items()}))
    big = k.poly_mul(f, g)
    pairs = [(tuple(rng.randint(0, 5) for _ in range(6)), tuple(rng.randint(0, 5) for _ in range(6)))
             for _ in range(2000)]
    return {
        "poly_mul 30x30": lambda: k.poly_mul(a, b),
        "normal_form": lambda: k.normal_form(big, basis, 0, 0),
        "exps_cmp x2000": lambda: [k.exps_cmp(x, y, 0, 0) for x, y in pairs],
        "leading": lambda: k.leading(big, 0, 0),
    }


def bench(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def pipeline(pure, repeat):
    env = dict(os.environ)
    if pure:
        env["DERIVEDMW_PURE_PYTHON"] = "1"
    else:
        env.pop("DERIVEDMW_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", PIPELINE.format(repeat=repeat)], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels_c is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'case':22s} {'python':>12s} {'cython':>12s} {'speedup':>8s}")
    py_cases = micro_cases(_kernels_py)
    c_cases = micro_cases(_kernels_c) if _kernels_c else {}
    for name, fn in py_cases.items():
        tp = bench(fn, args.repeat)
        if name in c_cases:
            tc = bench(c_cases[name], args.repeat)
            print(f"{name:22s} {tp * 1e6:10.1f}us {tc * 1e6:10.1f}us {tp / tc:7.2f}x")
        else:
            print(f"{name:22s} {tp * 1e6:10.1f}us {'-':>12s}")
    _, tp = pipeline(True, args.repeat)
    backend, tc = pipeline(False, args.repeat)
    if backend == "cython":
        print(f"{'sl2 pipeline':22s} {tp * 1e3:10.1f}ms {tc * 1e3:10.1f}ms {tp / tc:7.2f}x")
    else:
        print(f"{'sl2 pipeline':22s} {tp * 1e3:10.1f}ms {'-':>12s}")


if __name__ == "__main__":
    main()
