"""Benchmark the Monte Carlo kernels: numba vs pure numpy.

    python benchmarks/bench_kernels.py [--repeat N]

The numpy path is what runs when INFODISTURB_NO_NUMBA=1 is set.
"""
import argparse
import time

import numpy as np

from infodisturb import kernels
from infodisturb.oracle import haar_probabilities
from infodisturb.quantities import MeasurementSpec


def best_of(fn, args, repeat):
    fn(*args)  # warm-up (includes JIT compilation on the first call)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    print(f"{'kernel':<12} {'d':>2} {'samples':>9} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for d in (2, 5, 8):
        spec = MeasurementSpec(d, 1, d - 1, 0.6)
        diag = np.asarray(spec.diagonal())
        for n in (100_000, 1_000_000):
            probs = haar_probabilities(d, n, seed=1)
            for name, np_fn, nb_fn in (
                ("features", kernels.mc_features_numpy, kernels.mc_features_numba),
                ("reversal", kernels.reversal_numpy, kernels.reversal_numba),
            ):
                t_np = best_of(np_fn, (probs, diag), args.repeat)
                t_nb = best_of(nb_fn, (probs, diag), args.repeat)
                a, b = np.asarray(np_fn(probs, diag)), np.asarray(nb_fn(probs, diag))
                flag = "" if np.allclose(a, b, rtol=1e-12, atol=1e-15) else "  MISMATCH"
                print(f"{name:<12} {d:>2} {n:>9} {t_np * 1e3:>10.2f} {t_nb * 1e3:>10.2f} {t_np / t_nb:>7.1f}x{flag}")

    d, n = 5, 1_000_000
    t0 = time.perf_counter()
    haar_probabilities(d, n, seed=1)
    print(f"\nHaar sampling, d={d}, n={n}: {(time.perf_counter() - t0) * 1e3:.1f} ms (numpy RNG, shared by both paths)")


if __name__ == "__main__":
    main()
