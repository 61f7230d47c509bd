"""Time the compiled density kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [-X 20] [--repeat 3]

Both backends must return identical tallies; the script exits nonzero if not.
"""

import argparse
import sys
import timeit

from binic import _kernels_py, kernels

try:
    from binic import _kernels
except ImportError:
    _kernels = None


def bench(label, fn, repeat):
    t = min(timeit.repeat(fn, number=1, repeat=repeat))
    print(f"{label:<32s} {t * 1e3:10.2f} ms")
    return t


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("-X", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--primes", type=int, nargs="*", default=[5, 11, 23])
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the numpy backend is available")
        return 1
    X = args.X
    sf = kernels.squarefree_table(kernels.cubic_disc_bound(X))
    sv = kernels.squarefree_table(kernels.cubic_disc_bound(X), 50)
    ok = True
    print(f"box census, X = {X} ({(2 * X + 1) ** 4} forms)")
    out = {}
    for name, mod in (("compiled", _kernels), ("numpy", _kernels_py)):
        out[name] = mod.box_census(X, sf, sv, -X, X)
        bench(f"  {name}", lambda: mod.box_census(X, sf, sv, -X, X), args.repeat)
    ok &= out["compiled"] == out["numpy"]
    for p in args.primes:
        print(f"lift census, p = {p}")
        res = {}
        for name, mod in (("compiled", _kernels), ("numpy", _kernels_py)):
            res[name] = mod.lift_census(p)
            bench(f"  {name}", lambda: mod.lift_census(p), args.repeat)
        ok &= res["compiled"] == res["numpy"]
    print("backends agree" if ok else "BACKENDS DISAGREE")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
