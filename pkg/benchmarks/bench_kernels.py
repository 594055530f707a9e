"""Timing comparison of the compiled integration kernels against the
pure-Python fallback.

The fallback is selected by the KMBUBBLE_DISABLE_NUMBA environment
variable, which must be set before the package is imported, so each
variant runs in a fresh subprocess.

Usage: python benchmarks/bench_kernels.py [n_steps]
"""

import os
import subprocess
import sys

WORKLOAD = """
import time
import numpy as np
import kmbubble
from kmbubble import (BubbleConfig, BubbleState, DriveConfig, FluidProperties,
                      dimensionless_groups, simulate, step_pulse)
from kmbubble.solver import default_dtau

n_steps = {n_steps}
groups = dimensionless_groups(FluidProperties(), BubbleConfig(),
                              DriveConfig(pressure_amplitude=2.0e4))
dtau = default_dtau(groups)
forcing = step_pulse(1, n_steps * dtau, dtau, groups.omega_p)

# warm-up run: triggers JIT compilation when numba is enabled
simulate(BubbleState(), forcing, groups, dtau=dtau)

times = []
for _ in range(5):
    t0 = time.perf_counter()
    traj = simulate(BubbleState(), forcing, groups, dtau=dtau)
    times.append(time.perf_counter() - t0)
best = min(times)
print(f"{{best:.6f}} {{n_steps / best:,.0f}} {{float(traj.r[-1])!r}}")
"""


def run_variant(n_steps, disable_numba):
    env = dict(os.environ)
    if disable_numba:
        env["KMBUBBLE_DISABLE_NUMBA"] = "1"
    else:
        env.pop("KMBUBBLE_DISABLE_NUMBA", None)
    out = subprocess.run([sys.executable, "-c", WORKLOAD.format(n_steps=n_steps)],
                         env=env, capture_output=True, text=True, check=True)
    best, rate, r_last = out.stdout.split()
    return float(best), rate, float(r_last)


def main():
    n_steps = int(sys.argv[1]) if len(sys.argv) > 1 else 500_000
    print(f"integrating {n_steps:,} RK4 steps (best of 5 runs)\n")
    results = {}
    for label, disable in (("compiled (numba)", False),
                           ("pure-python fallback", True)):
        best, rate, r_last = run_variant(n_steps, disable)
        results[label] = (best, r_last)
        print(f"{label:24s} {best:10.4f} s   {rate:>14s} steps/s")
    (t_fast, r_fast), (t_slow, r_slow) = results.values()
    print(f"\nspeedup: {t_slow / t_fast:.1f}x")
    agree = "yes" if r_fast == r_slow else "NO"
    print(f"final radius matches bit for bit: {agree}")


if __name__ == "__main__":
    main()
