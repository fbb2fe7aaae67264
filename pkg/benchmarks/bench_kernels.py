"""Numba versus numpy timings for the batched sextic kernel.

    python3 benchmarks/bench_kernels.py --n 10000 --repeat 5

Reports the best wall time of each backend, the speedup and the largest
coefficient difference between the two.
"""

import argparse
import time

import numpy as np

from quathyp import kernels
from quathyp.normal_forms import random_isometry


def best_time(fn, arg, repeat: int) -> float:
    fn(arg)  # warm-up (triggers compilation for the numba path)
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn(arg)
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=10_000, help="batch size")
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    As = np.ascontiguousarray(np.stack([random_isometry("H", "ball", rng) for _ in range(args.n)]))

    t_np = best_time(kernels.sextic_batch_np, As, args.repeat)
    print(f"numpy  sextic_batch  N={args.n}: {1e3 * t_np:8.2f} ms")
    if not kernels.HAVE_NUMBA:
        print("numba unavailable (or QUATHYP_DISABLE_NUMBA set); numpy only")
        return
    t_nb = best_time(kernels.sextic_batch_nb, As, args.repeat)
    diff = float(np.max(np.abs(kernels.sextic_batch_nb(As) - kernels.sextic_batch_np(As))))
    print(f"numba  sextic_batch  N={args.n}: {1e3 * t_nb:8.2f} ms")
    print(f"speedup {t_np / t_nb:.1f}x, max coefficient difference {diff:.1e}")


if __name__ == "__main__":
    main()
