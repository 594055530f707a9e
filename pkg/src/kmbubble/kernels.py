"""Hot numeric kernels: the fixed-step RK4 Keller-Miksis integrator.

The kernels are compiled with numba by default. Setting the environment
variable KMBUBBLE_DISABLE_NUMBA=1 selects the pure-Python/numpy fallback
path (same code, no @njit); results are identical, only slower. See
benchmarks/bench_kernels.py for a timing comparison.
"""

import os

import numpy as np

DISABLE_NUMBA = os.environ.get("KMBUBBLE_DISABLE_NUMBA", "0").lower() in ("1", "true", "yes")
NUMBA_ENABLED = not DISABLE_NUMBA

if NUMBA_ENABLED:
    try:
        import numba
    except ImportError:  # pragma: no cover
        NUMBA_ENABLED = False


def _jit(func):
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(func)
    return func


STATUS_OK = 0
STATUS_COLLAPSE = 1
STATUS_SINGULAR = 2

R_COLLAPSE = 1.0e-3
DEN_EPS = 1.0e-12


@_jit
def _sample_zoh(values, dtau_grid, tau):
    """Zero-order-hold lookup of a sampled signal at dimensionless time tau."""
    i = int(tau / dtau_grid)
    if i < 0:
        i = 0
    n = values.shape[0]
    if i >= n:
        i = n - 1
    return values[i]


@_jit
def _km_accel(r, v, pa, dpa, omega, visc, surf, elast, force, kexp):
    """Radial acceleration of the nondimensional Keller-Miksis equation."""
    num = ((omega * v - 3.0) * 0.5 * v * v
           - (surf + visc * v) / r
           + (elast + surf) * (1.0 + (1.0 - kexp) * omega * v) / r ** kexp
           - (1.0 + omega * v) * (elast + force * pa)
           - force * omega * r * dpa)
    den = (1.0 - omega * v) * r + omega * visc
    return num / den


@_jit
def _integrate_km(r0, v0, n_steps, dtau, forcing, dforcing, sig_dtau,
                  omega, visc, surf, elast, force, kexp, h, use_deriv):
    """Classic RK4 over the KM equation with zero-order-hold forcing.

    Returns (r, v, p_scat, status, fail_index); arrays have n_steps + 1
    entries and are valid up to fail_index when status is nonzero.
    """
    r_out = np.empty(n_steps + 1)
    v_out = np.empty(n_steps + 1)
    p_out = np.empty(n_steps + 1)

    r = r0
    v = v0
    status = STATUS_OK
    fail = n_steps

    for i in range(n_steps + 1):
        tau = i * dtau
        pa = _sample_zoh(forcing, sig_dtau, tau)
        dpa = _sample_zoh(dforcing, sig_dtau, tau) if use_deriv else 0.0

        den = (1.0 - omega * v) * r + omega * visc
        if abs(den) < DEN_EPS:
            status = STATUS_SINGULAR
            fail = i
            break
        if r < R_COLLAPSE:
            status = STATUS_COLLAPSE
            fail = i
            break

        acc = _km_accel(r, v, pa, dpa, omega, visc, surf, elast, force, kexp)
        r_out[i] = r
        v_out[i] = v
        p_out[i] = (r / h) * (r * acc + 2.0 * v * v)
        if i == n_steps:
            break

        tau_h = tau + 0.5 * dtau
        pa_h = _sample_zoh(forcing, sig_dtau, tau_h)
        pa_f = _sample_zoh(forcing, sig_dtau, tau + dtau)
        dpa_h = _sample_zoh(dforcing, sig_dtau, tau_h) if use_deriv else 0.0
        dpa_f = _sample_zoh(dforcing, sig_dtau, tau + dtau) if use_deriv else 0.0

        k1r = v
        k1v = acc
        k2r = v + 0.5 * dtau * k1v
        k2v = _km_accel(r + 0.5 * dtau * k1r, v + 0.5 * dtau * k1v,
                        pa_h, dpa_h, omega, visc, surf, elast, force, kexp)
        k3r = v + 0.5 * dtau * k2v
        k3v = _km_accel(r + 0.5 * dtau * k2r, v + 0.5 * dtau * k2v,
                        pa_h, dpa_h, omega, visc, surf, elast, force, kexp)
        k4r = v + dtau * k3v
        k4v = _km_accel(r + dtau * k3r, v + dtau * k3v,
                        pa_f, dpa_f, omega, visc, surf, elast, force, kexp)

        r = r + dtau * (k1r + 2.0 * k2r + 2.0 * k3r + k4r) / 6.0
        v = v + dtau * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0

    return r_out, v_out, p_out, status, fail
