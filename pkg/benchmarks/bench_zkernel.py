"""Benchmark of the longitudinal-overlap kernel: compiled vs NumPy fallback.

Builds batches representative of real brightness sweeps (mild focusing,
strong focusing, thick-crystal oscillatory) and times both backends on them.

Run:  python3 benchmarks/bench_zkernel.py
"""

import time

import numpy as np

from spdcfocus import _zcore_py

try:
    from spdcfocus import _zcore
except ImportError:
    _zcore = None

RNG = np.random.default_rng(12345)

CASES = {
    # (phase scale [rad], mu scale, cc scale)
    "thin, smooth      ": (0.5, 0.02, 0.01),
    "moderate focusing ": (8.0, 0.3, 0.5),
    "thick, oscillatory": (60.0, 1.5, 3.0),
}


def make_batch(n, phase_scale, mu_scale, cc_scale):
    phase = RNG.uniform(-phase_scale, phase_scale, n)
    mu = RNG.uniform(-mu_scale, mu_scale, (n, 4))
    cc = RNG.uniform(0.0, cc_scale, (n, 4))
    return phase, mu, cc


def run(impl, batch, repeats=3):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        values, err, panels = impl.z_overlap_batch(*batch, rtol=1e-8)
        best = min(best, time.perf_counter() - start)
    return best, values


def main():
    n = 8192
    print(f"batch size {n}, rtol 1e-8, best of 3\n")
    print(f"{'case':<20} {'python [ms]':>12} {'compiled [ms]':>14} {'speedup':>9} {'max |diff|':>12}")
    for name, scales in CASES.items():
        batch = make_batch(n, *scales)
        t_py, v_py = run(_zcore_py, batch)
        if _zcore is None:
            print(f"{name:<20} {1e3 * t_py:12.1f} {'(not built)':>14}")
            continue
        t_c, v_c = run(_zcore, batch)
        diff = float(np.max(np.abs(v_py - v_c)))
        print(f"{name:<20} {1e3 * t_py:12.1f} {1e3 * t_c:14.1f} {t_py / t_c:8.1f}x {diff:12.2e}")
    if _zcore is None:
        print("\ncompiled kernel missing; install with a C compiler to compare")


if __name__ == "__main__":
    main()
