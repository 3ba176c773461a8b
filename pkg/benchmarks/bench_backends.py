"""Compare the compiled pair-potential kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_backends.py``. Each kernel is timed on
the particle counts below and the two implementations are checked to agree
to round-off before timing.
"""

import time

import numpy as np

from s2dyn import _pairops_np
from s2dyn.zoo import fibonacci_sphere

try:
    from s2dyn import _fastops
except ImportError:
    _fastops = None

SIZES = (32, 128, 642)
REPEATS = 20


def _time(fn, *args):
    best = np.inf
    for _ in range(REPEATS):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    if _fastops is None:
        print("compiled extension not available; nothing to compare")
        return
    kernels = [
        ("sphere_gravity", "sphere_gravity_energy_grad", (1.0,)),
        ("lennard_jones", "lj_energy_grad", (0.01, 0.25)),
    ]
    print(f"{'kernel':>16s} {'n':>5s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}")
    for label, name, extra in kernels:
        for n in SIZES:
            # evenly spread points keep both potentials well conditioned
            q = fibonacci_sphere(n)
            fast = getattr(_fastops, name)
            slow = getattr(_pairops_np, name)
            e_f, g_f = fast(q, *extra)
            e_s, g_s = slow(q, *extra)
            # summation order differs between the two implementations, so
            # agreement is relative, not bitwise
            assert abs(e_f - e_s) <= 1e-9 * max(1.0, abs(e_s))
            assert np.max(np.abs(g_f - g_s)) <= 1e-9 * max(1.0, np.max(np.abs(g_s)))
            t_s = _time(slow, q, *extra)
            t_f = _time(fast, q, *extra)
            print(f"{label:>16s} {n:5d} {t_s * 1e3:9.3f}ms {t_f * 1e3:9.3f}ms "
                  f"{t_s / t_f:7.1f}x")


if __name__ == "__main__":
    main()
