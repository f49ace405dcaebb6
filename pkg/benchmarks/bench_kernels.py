"""Compare the compiled kernel extension against the pure-Python twin.

Usage: python benchmarks/bench_kernels.py

Times each hot kernel on representative inputs, then an end-to-end
radius sweep per backend in subprocesses (backend selection happens at
import time, so the sweep needs a fresh interpreter per lane).
"""

import os
import subprocess
import sys
import timeit

import numpy as np

from pulsekit import _native

try:
    from pulsekit import _speedups
except ImportError:
    _speedups = None


def time_call(fn, min_time=0.2):
    n = 1
    while True:
        t = timeit.timeit(fn, number=n)
        if t > min_time:
            return t / n
        n = max(n + 1, int(n * min_time / max(t, 1e-9)))


def kernel_cases():
    rng = np.random.default_rng(7)
    a4 = rng.uniform(-2, 2, (4, 4))
    a8 = rng.uniform(-2, 2, (8, 8))
    s4 = 0.5 * (a4 + a4.T)
    s8 = 0.5 * (a8 + a8.T)
    spd4 = a4 @ a4.T + 2 * np.eye(4)
    sth = np.array([[-0.0028, 1.3e-8], [5000.0, -0.016]])
    return [
        ("mat_exp 4x4 (|tA|~8)", lambda k: k.mat_exp(a4, 1.3)),
        ("mat_exp 2x2 mixed-scale", lambda k: k.mat_exp(sth, 365.0)),
        ("jacobi_eigh 4x4", lambda k: k.jacobi_eigh(s4)),
        ("jacobi_eigh 8x8", lambda k: k.jacobi_eigh(s8)),
        ("hessenberg_qr 4x4", lambda k: k.hessenberg_qr_eigvals(a4, 400)),
        ("hessenberg_qr 8x8", lambda k: k.hessenberg_qr_eigvals(a8, 800)),
        ("cholesky 4x4", lambda k: k.cholesky_lower(spd4)),
        ("rk4 1000 steps 4x4", lambda k: k.rk4_propagator(a4, 1.0, 1000)),
    ]


SWEEP_SNIPPET = """
import time
from pulsekit.presets import get_preset
from pulsekit.spectral import sample_curve
from pulsekit._backend import BACKEND
system = get_preset("sth-roundworm").system
sample_curve(system, 600.0, 601)  # warm up
t0 = time.perf_counter()
sample_curve(system, 600.0, 601)
print(f"{BACKEND} {time.perf_counter() - t0:.6f}")
"""


def run_sweep(backend):
    env = dict(os.environ, PULSEKIT_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", SWEEP_SNIPPET], env=env,
                         capture_output=True, text=True, check=True)
    name, elapsed = out.stdout.split()
    assert name == backend
    return float(elapsed)


def main():
    print(f"{'kernel':<26} {'pure (us)':>12} {'compiled (us)':>14} "
          f"{'speedup':>9}")
    for name, call in kernel_cases():
        t_pure = time_call(lambda: call(_native)) * 1e6
        if _speedups is None:
            print(f"{name:<26} {t_pure:>12.1f} {'-':>14} {'-':>9}")
            continue
        t_c = time_call(lambda: call(_speedups)) * 1e6
        print(f"{name:<26} {t_pure:>12.1f} {t_c:>14.1f} "
              f"{t_pure / t_c:>8.1f}x")

    print()
    print("end-to-end: 601-point radius sweep of the roundworm preset")
    t_py = run_sweep("python")
    print(f"  python backend: {t_py * 1e3:8.1f} ms")
    if _speedups is not None:
        t_c = run_sweep("c")
        print(f"  c backend:      {t_c * 1e3:8.1f} ms  "
              f"({t_py / t_c:.1f}x speedup)")


if __name__ == "__main__":
    main()
