"""Compare the compiled velocity-Verlet kernel against the numpy fallback.

Runs the standard oracle workload (two 2800-mode reservoirs, t_end 420)
with both kernels and reports wall time and the maximum coordinate
difference between the two integrations.

Usage: python benchmarks/bench_kernel.py [--modes N] [--t-end T]
"""
import argparse
import time

import numpy as np

from easc import _verlet_np
from easc.microscopic import discretize_reservoir
from easc.model import PowerLaw

try:
    from easc import _verlet
except ImportError:
    _verlet = None


def run(kernel, r1, r2, coupling, t_end, dt):
    s1 = 2.0 * np.sqrt(r1.mode_frequencies) * r1.mode_couplings
    s2 = 2.0 * np.sqrt(r2.mode_frequencies) * r2.mode_couplings
    x = np.array([1.0, 0.0])
    v = np.zeros(2)
    y1, u1 = np.zeros(s1.size), np.zeros(s1.size)
    y2, u2 = np.zeros(s2.size), np.zeros(s2.size)
    t0 = time.perf_counter()
    ts, xs = kernel.verlet_two_baths(
        1.0,
        2.0 * coupling,
        r1.mode_frequencies**2,
        s1,
        r2.mode_frequencies**2,
        s2,
        x,
        v,
        y1,
        u1,
        y2,
        u2,
        dt,
        int(round(t_end / dt)),
        8,
    )
    return time.perf_counter() - t0, xs


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--modes", type=int, default=2800)
    parser.add_argument("--t-end", type=float, default=420.0)
    args = parser.parse_args()

    r1 = discretize_reservoir(
        PowerLaw(2), 0.02, (0.3, 1.7), args.modes, coupling_max=0.05
    )
    r2 = discretize_reservoir(
        PowerLaw(2), 0.01, (0.3, 1.7), args.modes, coupling_max=0.05
    )
    t_np, xs_np = run(_verlet_np, r1, r2, 0.05, args.t_end, 0.0115)
    print(f"numpy fallback : {t_np:8.3f} s")
    if _verlet is None:
        print("compiled kernel: not built")
        return
    t_c, xs_c = run(_verlet, r1, r2, 0.05, args.t_end, 0.0115)
    diff = np.max(np.abs(xs_np - xs_c))
    print(f"compiled kernel: {t_c:8.3f} s   (speedup {t_np / t_c:5.1f}x)")
    print(f"max |x_np - x_compiled| = {diff:.3e}")


if __name__ == "__main__":
    main()
