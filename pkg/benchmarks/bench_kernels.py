"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Each case runs both backends on identical inputs, checks the outputs match,
and reports the best-of-``repeat`` wall time and the speedup.
"""
import argparse
import time
from fractions import Fraction

from slotmc import _purepy
from slotmc.rng import batch_seeds, error_threshold

try:
    from slotmc import _kernels
except ImportError:
    _kernels = None

THR, ALWAYS = error_threshold(Fraction(1, 10))

CASES = [
    ("convergence B=8 N=8, 200 runs", "convergence_rounds", (8, 8, batch_seeds(1, 200), 10**6)),
    ("convergence B=16 N=12, 200 runs", "convergence_rounds", (16, 12, batch_seeds(1, 200), 10**6)),
    ("error trace B=16 N=8, 10k rounds", "error_trace", (16, 8, 1, 10_000, THR, ALWAYS)),
    ("transitions B=4 N=3 d=1, 20k", "transition_histogram", (4, 3, 1, 20_000, 1)),
    ("enumerate B=6 N=6 d=0", "enumerate_counts", (6, 6, [])),
]


def best_time(fn, args, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, list(out)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _kernels is None:
        print("compiled kernels not built; only the Python backend is available")
    print(f"{'case':38s} {'python [s]':>11s} {'compiled [s]':>13s} {'speedup':>8s}")
    for name, func, fargs in CASES:
        t_py, out_py = best_time(getattr(_purepy, func), fargs, args.repeat)
        if _kernels is None:
            print(f"{name:38s} {t_py:11.4f} {'-':>13s} {'-':>8s}")
            continue
        t_c, out_c = best_time(getattr(_kernels, func), fargs, args.repeat)
        if out_c != out_py:
            raise SystemExit(f"backend mismatch in {name}")
        print(f"{name:38s} {t_py:11.4f} {t_c:13.5f} {t_py / t_c:7.0f}x")


if __name__ == "__main__":
    main()
