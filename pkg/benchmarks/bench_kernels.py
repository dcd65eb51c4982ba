"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--n 20000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from radialbc import _kernels_py

try:
    from radialbc import _kernels
except ImportError:
    _kernels = None


def numerov_case(n):
    # oscillator-like q on a uniform grid: decaying and growing pieces
    h = 20.0 / n
    x = np.linspace(0.0, 20.0, n)
    q = np.ascontiguousarray(2.0 * (1.5 - 0.5 * x**2))
    return (q, h, 0.0, 1e-10, 0, n - 1)


def sturm_case(n):
    h = 40.0 / n
    r = h * np.arange(1, n + 1)
    diag = 1.0 / h**2 - 1.0 / r
    off = np.full(n - 1, -0.5 / h**2)
    return (diag, off, -0.4)


def bench(fn, args, repeat):
    number = 1
    return min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat)) / number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cases = [("numerov", numerov_case(args.n)), ("sturm_count", sturm_case(args.n))]
    print(f"grid points: {args.n}, best of {args.repeat}")
    print(f"{'kernel':<12} {'python [ms]':>12} {'compiled [ms]':>14} {'speedup':>8}")
    for name, case in cases:
        t_py = bench(getattr(_kernels_py, name), case, args.repeat)
        if _kernels is None:
            print(f"{name:<12} {1e3 * t_py:12.2f} {'n/a':>14} {'n/a':>8}")
            continue
        py_out = getattr(_kernels_py, name)(*case)
        c_out = getattr(_kernels, name)(*case)
        if name == "numerov":
            assert np.allclose(py_out[0], c_out[0], rtol=1e-12, atol=0)
        else:
            assert py_out == c_out
        t_c = bench(getattr(_kernels, name), case, args.repeat)
        print(f"{name:<12} {1e3 * t_py:12.2f} {1e3 * t_c:14.3f} {t_py / t_c:7.0f}x")


if __name__ == "__main__":
    main()
