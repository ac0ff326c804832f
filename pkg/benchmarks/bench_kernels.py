"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 32,64,128,256] [--repeat 3]

Both backends are imported directly, so the environment switch is irrelevant
here. Outputs are compared bit-for-bit before any timing is reported.
"""
import argparse
import sys
import timeit

import numpy as np

from meannorm import _kernels_py

try:
    from meannorm import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None


def _symmetric(n: int, seed: int = 0) -> np.ndarray:
    a = np.random.default_rng(seed).standard_normal((n, n))
    return np.ascontiguousarray((a + a.T) / 2.0)


def _best(fn, repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def cases(sizes):
    for n in sizes:
        a = _symmetric(n)
        yield f"jacobi n={n}", "jacobi_eigenvalues", (a,)  # diagonalised in place: copied per call
    for n in sizes:
        m = np.ascontiguousarray(np.random.default_rng(1).random((n, n)) / np.arange(1, n + 1))
        yield f"rowsums n={n}", "neumaier_rowsums", (m,)
    x = np.random.default_rng(2).random(1_000_000)
    yield "cumsum 1e6", "neumaier_cumsum", (x,)
    yield "sum 1e6", "neumaier_sum", (x,)


def _fresh(fn, name):
    """Jacobi works in place; run it on a copy and return the diagonal too."""
    if name != "jacobi_eigenvalues":
        return fn

    def run(a):
        work = a.copy()
        return fn(work), np.diag(work).copy()

    return run


def _same(u, v) -> bool:
    if isinstance(u, tuple):
        return all(_same(p, q) for p, q in zip(u, v))
    return np.array_equal(np.asarray(u), np.asarray(v))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", default="32,64,128,256")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if _kernels_c is None:
        print("compiled extension not available; build it with `pip install -e . --no-build-isolation`")
        return 1
    print(f"{'case':<18}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}  identical")
    for label, name, call_args in cases(sizes):
        py_fn = _fresh(getattr(_kernels_py, name), name)
        c_fn = _fresh(getattr(_kernels_c, name), name)
        same = _same(py_fn(*call_args), c_fn(*call_args))
        t_py = _best(lambda: py_fn(*call_args), args.repeat)
        t_c = _best(lambda: c_fn(*call_args), args.repeat)
        print(f"{label:<18}{t_py:>12.4g}{t_c:>12.4g}{t_py / t_c:>9.1f}x  {'yes' if same else 'NO'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
