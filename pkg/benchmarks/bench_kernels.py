#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy twins.

Times the two hot paths of the package: the winding-number grid scan and
the piecewise-constant propagation loop.  The jitted functions are warmed
up once before timing so compilation is not counted.

Run: python benchmarks/bench_kernels.py  [--nk 1024] [--grid 151] [--steps 4000]
"""

import argparse
import time

import numpy as np

from ssh_topo._kernels import accel, reference


def timeit(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_winding_grid(grid, nk):
    j_values = np.linspace(0.0, 3.0, grid)
    z_values = np.linspace(0.0, 3.0, grid)

    accel.winding_grid(j_values[:2], z_values[:2], 0.0, 1.0, 64)  # warm the JIT

    t_np, (w_np, ok_np, _) = timeit(lambda: reference.winding_grid(j_values, z_values, 0.0, 1.0, nk))
    t_nb, (w_nb, ok_nb, _) = timeit(lambda: accel.winding_grid(j_values, z_values, 0.0, 1.0, nk))
    assert np.array_equal(w_np[ok_np & ok_nb], w_nb[ok_np & ok_nb])
    return t_np, t_nb


def bench_propagation(steps, n_cells=8):
    rng = np.random.default_rng(7)
    theta = np.linspace(0.0, 2.0 * np.pi, steps)
    coeffs = np.column_stack(
        [0.55 * np.sin(theta), 1.1 * (1.0 - np.cos(theta)), np.full(steps, 1.0), np.full(steps, 0.1)]
    )
    dts = np.full(steps, 0.05)
    psi0 = rng.normal(size=2 * n_cells) + 1j * rng.normal(size=2 * n_cells)
    psi0 /= np.linalg.norm(psi0)

    accel.propagate_piecewise(coeffs[:4], 0.0, dts[:4], psi0)  # warm the JIT

    t_np, s_np = timeit(lambda: reference.propagate_piecewise(coeffs, 0.0, dts, psi0))
    t_nb, s_nb = timeit(lambda: accel.propagate_piecewise(coeffs, 0.0, dts, psi0))
    assert np.max(np.abs(np.abs(s_np) ** 2 - np.abs(s_nb) ** 2)) < 1e-12
    return t_np, t_nb


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nk", type=int, default=1024)
    parser.add_argument("--grid", type=int, default=151)
    parser.add_argument("--steps", type=int, default=4000)
    args = parser.parse_args()

    print(f"winding grid {args.grid}x{args.grid}, nk={args.nk}")
    t_np, t_nb = bench_winding_grid(args.grid, args.nk)
    print(f"  numpy : {t_np:8.3f} s")
    print(f"  numba : {t_nb:8.3f} s   ({t_np / t_nb:.1f}x)")

    print(f"propagation, {args.steps} steps, 16 sites")
    t_np, t_nb = bench_propagation(args.steps)
    print(f"  numpy : {t_np:8.3f} s")
    print(f"  numba : {t_nb:8.3f} s   ({t_np / t_nb:.1f}x)")


if __name__ == "__main__":
    main()
