"""High-level pipelines behind the CLI commands: melody rendering,
single-pulse step-response studies, and the memory-capacity benchmark."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import analysis, reservoir, score as score_mod, solver
from .errors import DomainError
from .physics import (BubbleConfig, DriveConfig, FluidProperties,
                      dimensionless_groups, relaxation_time)

SILENCE_FLOOR = 1e-12


def physics_from_config(cfg, alpha=None):
    """Build the physics objects (and groups) from a config dict."""
    phys = cfg["physics"]
    fluid = FluidProperties(sound_speed=phys["c"], dynamic_viscosity=phys["mu"],
                            surface_tension=phys["sigma"], density=phys["rho"],
                            vapor_pressure=phys["p_v"])
    bubble = BubbleConfig(equilibrium_radius=phys["r0"],
                          static_pressure=phys["p0"],
                          polytropic_exponent=phys["kappa"])
    drive = DriveConfig(pressure_amplitude=phys["alpha"] if alpha is None else alpha,
                        reference_frequency=phys["f_p"])
    return fluid, bubble, drive, dimensionless_groups(fluid, bubble, drive)


def _solver_dtau(cfg, groups):
    dtau = cfg["solver"]["dtau"]
    return solver.default_dtau(groups) if dtau <= 0 else dtau


@dataclass
class RenderResult:
    forcing: score_mod.PressureSignal
    trajectory: solver.Trajectory
    input_spectrum: analysis.PowerSpectrum
    output_spectrum: analysis.PowerSpectrum
    input_peaks: int
    output_peaks: int


def render_melody(parsed: score_mod.Score, cfg) -> RenderResult:
    """Encode a score, drive the bubble with it, and analyze both signals."""
    enc = cfg["encoding"]
    fluid, bubble, drive, groups = physics_from_config(cfg)
    forcing = score_mod.render_pulse_train(
        parsed, enc["dt"], polarity=enc["polarity"], duty=enc["duty"],
        articulation=enc["articulation"], amplitude_scale=drive.pressure_amplitude)
    traj = solver.simulate(
        solver.BubbleState(), forcing, groups, dtau=_solver_dtau(cfg, groups),
        h=cfg["solver"]["h"],
        include_drive_derivative=cfg["solver"]["drive_derivative"])

    spec_in = analysis.power_spectrum(forcing.samples, forcing.dt_seconds, "hann")
    spec_out = analysis.power_spectrum(traj.p_scat, traj.dt_seconds, "hann")
    return RenderResult(forcing, traj, spec_in, spec_out,
                        analysis.count_peaks(spec_in),
                        analysis.count_peaks(spec_out))


@dataclass
class StepResult:
    alpha: float                 # Pa, signed
    freq_in_hz: Optional[float]  # dominant frequency during the pulse
    freq_post_hz: Optional[float]
    relax_in_s: Optional[float]  # fitted relaxation time during the pulse
    relax_post_s: Optional[float]
    note: str = ""
    spectrum_in: Optional[analysis.PowerSpectrum] = None
    spectrum_post: Optional[analysis.PowerSpectrum] = None


def _segment_metrics(seg, dt_s):
    if seg.size < 16 or np.max(np.abs(seg)) < SILENCE_FLOOR:
        return None, None, None
    spec = analysis.power_spectrum(seg, dt_s, "hann")
    freq = analysis.dominant_frequency(spec)
    try:
        env = analysis.envelope(seg, dt_s)
        relax = analysis.fit_relaxation(env)
    except DomainError:
        relax = None
    return freq, relax, spec


def free_decay_metrics(cfg, groups, r_start=1.001):
    """Reference frequency/relaxation from an unforced small-amplitude decay."""
    tau0 = relaxation_time(groups)
    dtau = _solver_dtau(cfg, groups)
    n = int(round(20.0 * tau0 / dtau))
    quiet = score_mod.PressureSignal(np.zeros(n), dtau / groups.omega_p)
    traj = solver.simulate(solver.BubbleState(r=r_start), quiet, groups,
                           dtau=dtau, h=cfg["solver"]["h"])
    skip = int(round(2.0 * tau0 / dtau))
    freq, _, _ = _segment_metrics(traj.p_scat[skip:], traj.dt_seconds)
    _, relax, _ = _segment_metrics(traj.p_scat, traj.dt_seconds)
    return freq, relax


def step_response(cfg, alpha: float) -> StepResult:
    """Single-pulse experiment at a signed pressure amplitude (Pa)."""
    p0 = cfg["physics"]["p0"]
    if not -p0 < alpha < p0:
        raise DomainError(f"amplitude {alpha:g} Pa outside (-p0, p0)")
    fluid, bubble, drive, groups = physics_from_config(cfg, alpha=alpha)
    tau0 = relaxation_time(groups)
    dtau = _solver_dtau(cfg, groups)
    tau_p = 8.0 * tau0
    forcing = solver.step_pulse(1, tau_p, dtau, groups.omega_p,
                                tau_total=20.0 * tau0, amplitude_scale=alpha)
    traj = solver.simulate(solver.BubbleState(), forcing, groups, dtau=dtau,
                           h=cfg["solver"]["h"],
                           include_drive_derivative=cfg["solver"]["drive_derivative"])
    i_end = int(round(tau_p / dtau))
    dt_s = traj.dt_seconds
    in_seg = traj.p_scat[:i_end]
    post_seg = traj.p_scat[i_end:]
    skip = int(round(2.0 * tau0 / dtau))

    if np.max(np.abs(traj.p_scat)) < SILENCE_FLOOR:
        return StepResult(alpha, None, None, None, None, note="no oscillation")

    f_in, relax_in, _ = _segment_metrics(in_seg, dt_s)
    _, relax_post, spec_post = _segment_metrics(post_seg, dt_s)
    # frequency after the pulse is measured once the transient has decayed
    f_post, _, _ = _segment_metrics(post_seg[skip:], dt_s)
    # harmonics are strongest early in the transient; analyze the first 3 tau0
    n_early = min(int(round(3.0 * tau0 / dtau)), in_seg.size)
    _, _, spec_in = _segment_metrics(in_seg[:n_early], dt_s)
    return StepResult(alpha, f_in, f_post, relax_in, relax_post,
                      spectrum_in=spec_in, spectrum_post=spec_post)


@dataclass
class MemoryResult:
    bits: np.ndarray
    stm: reservoir.CapacityReport
    pc: reservoir.CapacityReport
    slot_tau: float
    state_matrix: np.ndarray


def memory_benchmark(cfg, n_bits=None, seed=None) -> MemoryResult:
    """Binary-drive memory benchmark of the bubble reservoir."""
    res = cfg["reservoir"]
    n_bits = res["n_bits"] if n_bits is None else n_bits
    seed = res["seed"] if seed is None else seed
    fluid, bubble, drive, groups = physics_from_config(cfg, alpha=res["alpha"])

    tau0 = relaxation_time(groups)
    slot_tau = res["c_tau"] * tau0
    dtau = _solver_dtau(cfg, groups)
    # lock the step to the slot so every symbol holds an integer number of steps
    n_slot = max(int(round(slot_tau / dtau)), res["n_virtual"])
    dtau = slot_tau / n_slot

    rng = np.random.default_rng(seed)
    bits = rng.integers(0, 2, n_bits)
    seq = score_mod.BinarySequence(bits, slot_tau / groups.omega_p)
    forcing = score_mod.encode_binary(seq, dtau / groups.omega_p,
                                      amplitude_scale=res["alpha"])
    traj = solver.simulate(solver.BubbleState(), forcing, groups, dtau=dtau,
                           tau_end=n_bits * slot_tau, h=cfg["solver"]["h"],
                           include_drive_derivative=cfg["solver"]["drive_derivative"])
    x = reservoir.harvest_virtual_neurons(traj, bits, slot_tau, res["n_virtual"])
    stm = reservoir.stm_capacity(bits, x, res["beta"], res["k_max"])
    pc = reservoir.pc_capacity(bits, x, res["beta"], res["k_max"])
    return MemoryResult(bits, stm, pc, slot_tau, x)
