#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Runs the same seeded workloads through both backends, checks the outputs are
bit-identical, and reports wall times and speedups. The numba timings exclude
the one-off JIT compilation (a warmup run triggers it; with cache=True it is
paid once per machine).
"""

import argparse
import time

from agegossip.core import bernoulli
from agegossip.cycles import MultiFileRun, SingleFileRun, rlc_dissemination_trial
from agegossip.kernels import get_backend


def time_run(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench(name, make_fn, repeats, check=lambda a, b: a == b):
    numba_backend = get_backend("numba")
    numpy_backend = get_backend("numpy")
    make_fn(numba_backend)()  # warmup: JIT compile / load from disk cache
    t_nb, r_nb = time_run(make_fn(numba_backend), repeats)
    t_np, r_np = time_run(make_fn(numpy_backend), repeats)
    agree = check(r_nb, r_np)
    print(f"{name:<44} numba {t_nb:8.3f}s   numpy {t_np:8.3f}s   "
          f"speedup {t_np / t_nb:6.1f}x   identical={agree}")
    return agree


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=2,
                    help="timed repetitions per backend (best is reported)")
    ap.add_argument("--heavy", action="store_true",
                    help="add the figure-scale n=97 coded run (slow on numpy)")
    args = ap.parse_args()

    print(f"timing {args.repeats} repetition(s) per backend, best-of shown\n")
    ok = True

    ok &= bench(
        "interleave age run (n=256, ell=8, 50 cycles)",
        lambda b: lambda: SingleFileRun(256, 8, 18, bernoulli(0.7), 50, seed=1,
                                        backend=b).run().avg_age,
        args.repeats)

    ok &= bench(
        "coded push age run (n=31, q=31, 20 cycles)",
        lambda b: lambda: MultiFileRun(31, 6, 31, bernoulli(0.7), 20, seed=1,
                                       backend=b).run().avg_age,
        args.repeats)

    ok &= bench(
        "coded dissemination (n=61, q=61, 10 trials)",
        lambda b: lambda: [rlc_dissemination_trial(61, 61, seed=2, trial=t,
                                                   backend=b)
                           for t in range(10)],
        args.repeats)

    if args.heavy:
        ok &= bench(
            "coded push age run (n=97, q=97, 100 cycles)",
            lambda b: lambda: MultiFileRun(97, 6, 97, bernoulli(0.7), 100,
                                           seed=1, backend=b).run().avg_age,
            1)

    if not ok:
        raise SystemExit("backend outputs diverged; this is a bug")
    print("\nall workloads produced bit-identical results on both backends")


if __name__ == "__main__":
    main()
