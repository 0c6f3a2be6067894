"""Compare the numba and pure-numpy intensity kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--n 4]
"""

import argparse
import time

import numpy as np

from fringelab import kernels
from fringelab.sampling import random_density


def best_of(fn, repeat):
    fn()  # warm-up (and JIT compile)
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)

    if kernels.numba_backend is None:
        raise SystemExit("numba is not importable; nothing to compare")
    rng = np.random.default_rng(args.seed)
    n = args.n
    rho = np.asarray(random_density(n, rng).entries)
    phases = rng.uniform(0, 2 * np.pi, size=(200_000, n))
    thetas = np.linspace(0, 2 * np.pi, 1 << 16, endpoint=False)
    offsets = rng.uniform(0, 2 * np.pi, size=n)
    per_axis = {2: 100_000, 3: 400, 4: 64, 5: 24}.get(n, 8)

    cases = {
        "quadratic_form_batch (200k)": lambda b: b.quadratic_form_batch(rho, phases),
        "linear_sweep (65536)": lambda b: b.linear_sweep(rho, offsets, thetas),
        f"torus_grid_values ({per_axis}^{n - 1})": lambda b: b.torus_grid_values(rho, per_axis),
        "intensity_grad (x2000)": lambda b: [b.intensity_grad(rho, phases[i]) for i in range(2000)],
    }
    print(f"n = {n}, best of {args.repeat}")
    print(f"{'kernel':<32} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>9}")
    for name, run in cases.items():
        t_np = best_of(lambda: run(kernels.numpy_backend), args.repeat)
        t_nb = best_of(lambda: run(kernels.numba_backend), args.repeat)
        print(f"{name:<32} {1e3 * t_np:>12.2f} {1e3 * t_nb:>12.2f} {t_np / t_nb:>8.1f}x")


if __name__ == "__main__":
    main()
