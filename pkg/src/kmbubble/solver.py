"""Keller-Miksis integration and the linearized step-response oracle."""

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CollapseError, DomainError, SingularityError
from .physics import DimensionlessSet
from .score import PressureSignal

DEFAULT_FARFIELD = 100.0  # far-field distance in units of the equilibrium radius


@dataclass(frozen=True)
class BubbleState:
    r: float = 1.0
    r_dot: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        if self.r <= 0:
            raise DomainError("radius must be positive")


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled (tau, r, r', p_scat) time series."""

    tau: np.ndarray
    r: np.ndarray
    r_dot: np.ndarray
    p_scat: np.ndarray
    omega_p: float

    @property
    def dtau(self):
        return float(self.tau[1] - self.tau[0])

    @property
    def t_seconds(self):
        return self.tau / self.omega_p

    @property
    def dt_seconds(self):
        return self.dtau / self.omega_p

    def to_csv(self, path, decimate=1):
        idx = slice(None, None, max(int(decimate), 1))
        data = np.column_stack([self.t_seconds[idx], self.tau[idx], self.r[idx],
                                self.r_dot[idx], self.p_scat[idx]])
        np.savetxt(path, data, delimiter=",",
                   header="t_seconds,tau,r,r_dot,p_scat", comments="")


@dataclass(frozen=True)
class LinearOscillatorParams:
    quality: float        # Q
    forcing_scale: float  # Lambda
    omega0: float         # undamped natural frequency (per tau)
    omega_damped: float   # damped natural frequency; magnitude if overdamped
    relax: float          # relaxation time, 2Q
    overdamped: bool = False


def scattered_pressure(r, r_dot, r_ddot, h=DEFAULT_FARFIELD):
    """Nondimensional far-field scattered pressure, (r/h)(r r'' + 2 r'^2)."""
    if h <= 0:
        raise DomainError("far-field distance h must be positive")
    return (r / h) * (r * r_ddot + 2.0 * r_dot ** 2)


def km_rhs(state: BubbleState, pa: float, dpa: float,
           groups: DimensionlessSet) -> tuple:
    """Right-hand side (r', r'') of the nondimensional KM equation."""
    den = (1.0 - groups.omega * state.r_dot) * state.r + groups.omega * groups.visc
    if abs(den) < kernels.DEN_EPS:
        raise SingularityError(f"leading coefficient {den:g} is numerically singular")
    acc = kernels._km_accel(state.r, state.r_dot, pa, dpa, groups.omega,
                            groups.visc, groups.surf, groups.elast,
                            groups.force, groups.kexp)
    return state.r_dot, acc


def default_dtau(groups: DimensionlessSet) -> float:
    """Step size giving ~100 steps per natural oscillation period."""
    w0 = math.sqrt(groups.kexp * groups.elast)
    return 2.0 * math.pi / (100.0 * w0)


def simulate(initial: BubbleState, forcing: PressureSignal,
             groups: DimensionlessSet, dtau=None, tau_end=None,
             h=DEFAULT_FARFIELD, include_drive_derivative=False) -> Trajectory:
    """Integrate the KM equation under sampled forcing with fixed-step RK4.

    The forcing is evaluated by zero-order hold on its own grid; when
    include_drive_derivative is set, P_a' is realized as the first
    difference of the samples divided by the grid spacing.
    """
    if h <= 0:
        raise DomainError("far-field distance h must be positive")
    if dtau is None:
        dtau = default_dtau(groups)
    if dtau <= 0:
        raise DomainError("dtau must be positive")
    sig_dtau = forcing.dt_seconds * groups.omega_p
    if tau_end is None:
        tau_end = forcing.duration_seconds * groups.omega_p
    if tau_end <= 0:
        raise DomainError("tau_end must be positive")
    if forcing.samples.size * sig_dtau < tau_end - 0.5 * sig_dtau:
        raise DomainError("forcing signal does not cover [0, tau_end]")

    n_steps = int(round(tau_end / dtau))
    samples = np.ascontiguousarray(forcing.samples, dtype=np.float64)
    if include_drive_derivative:
        dsamples = np.diff(samples, prepend=0.0) / sig_dtau
    else:
        dsamples = np.zeros(1)

    r, v, p, status, fail = kernels._integrate_km(
        float(initial.r), float(initial.r_dot), n_steps, float(dtau),
        samples, dsamples, float(sig_dtau),
        groups.omega, groups.visc, groups.surf, groups.elast, groups.force,
        groups.kexp, float(h), include_drive_derivative)

    if status == kernels.STATUS_COLLAPSE:
        raise CollapseError(fail * dtau)
    if status == kernels.STATUS_SINGULAR:
        raise SingularityError(f"singular coefficient at tau={fail * dtau:.6g}")

    tau = initial.tau + np.arange(n_steps + 1) * dtau
    return Trajectory(tau, r, v, p, groups.omega_p)


def linear_oracle(groups: DimensionlessSet, approximate=False) -> LinearOscillatorParams:
    """Damped-oscillator parameters of the KM equation linearized about r = 1.

    The exact branch keeps the viscous and forcing corrections; the
    approximate branch uses the large-gas-elasticity limits.
    """
    km = groups.kexp * groups.elast_base
    if km <= 0:
        raise DomainError("kexp * elast_base must be positive")
    if approximate:
        quality = groups.omega / km
        omega0 = math.sqrt(km) / groups.omega
        forcing_scale = groups.force_base / groups.omega ** 2
    else:
        stiffness = groups.kexp * (groups.elast + groups.surf) - groups.surf
        den = groups.omega * groups.visc + 1.0
        damping = groups.visc + groups.force * groups.omega + stiffness * groups.omega
        quality = den / damping
        omega0 = math.sqrt(stiffness / den)
        forcing_scale = groups.force / den

    disc = omega0 ** 2 - 1.0 / (4.0 * quality ** 2)
    overdamped = disc <= 0.0
    omega_damped = math.sqrt(abs(disc))
    return LinearOscillatorParams(quality, forcing_scale, omega0,
                                  omega_damped, 2.0 * quality, overdamped)


def linear_step_response(params: LinearOscillatorParams, tau):
    """Closed-form radius perturbation r1(tau) after a unit pressure step."""
    if params.overdamped:
        raise DomainError("step response oracle requires the underdamped regime")
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise DomainError("tau must be nonnegative")
    lam = params.forcing_scale
    w0sq = params.omega0 ** 2
    wd = params.omega_damped
    decay = np.exp(-tau / params.relax)
    return decay * (lam * np.sin(wd * tau) / (2.0 * params.quality * w0sq * wd)
                    + lam * np.cos(wd * tau) / w0sq) - lam / w0sq


def step_pulse(amplitude: int, tau_p: float, dtau: float, omega_p: float,
               tau_total=None, amplitude_scale: float = 0.0) -> PressureSignal:
    """Single square pulse P_a = amplitude on [0, tau_p], zero afterwards."""
    if amplitude not in (1, -1):
        raise DomainError("pulse amplitude must be +1 or -1")
    if tau_p <= 0:
        raise DomainError("tau_p must be positive")
    if dtau <= 0 or omega_p <= 0:
        raise DomainError("dtau and omega_p must be positive")
    if tau_total is None:
        tau_total = tau_p
    n_pulse = int(round(tau_p / dtau))
    n_total = max(int(round(tau_total / dtau)), n_pulse)
    samples = np.zeros(n_total)
    samples[:n_pulse] = amplitude
    return PressureSignal(samples, dtau / omega_p, amplitude_scale)
