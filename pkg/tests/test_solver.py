"""Fixed-step integration of the bubble equation and its linear oracle."""

import os
import subprocess
import sys

import numpy as np
import pytest

from kmbubble import (BubbleConfig, BubbleState, DriveConfig, FluidProperties,
                      dimensionless_groups, km_rhs, linear_oracle,
                      linear_step_response, scattered_pressure, simulate,
                      step_pulse)
from kmbubble.errors import CollapseError, DomainError, SingularityError
from kmbubble.score import PressureSignal
from kmbubble.solver import default_dtau


@pytest.fixture(scope="module")
def groups():
    return dimensionless_groups(FluidProperties(), BubbleConfig(),
                                DriveConfig(pressure_amplitude=100.0))


def test_default_dtau_resolves_the_natural_period(groups):
    dtau = default_dtau(groups)
    period = 2.0 * np.pi / np.sqrt(groups.kexp * groups.elast)
    assert period / dtau == pytest.approx(100.0, rel=1e-12)
    assert dtau == pytest.approx(1.99733e-3, rel=1e-5)


def test_scattered_pressure_formula():
    assert scattered_pressure(1.0, 0.0, 0.0) == 0.0
    assert scattered_pressure(2.0, 3.0, 5.0, h=100.0) == pytest.approx(
        (2.0 / 100.0) * (2.0 * 5.0 + 2.0 * 9.0))
    with pytest.raises(DomainError):
        scattered_pressure(1.0, 0.0, 0.0, h=0.0)


def test_equilibrium_is_a_fixed_point(groups):
    dtau = default_dtau(groups)
    quiet = PressureSignal(np.zeros(2000), dtau / groups.omega_p)
    traj = simulate(BubbleState(), quiet, groups, dtau=dtau)
    assert np.max(np.abs(traj.r - 1.0)) < 1e-12
    assert np.max(np.abs(traj.r_dot)) < 1e-12
    assert np.max(np.abs(traj.p_scat)) < 1e-12


def test_km_rhs_restoring_force_signs(groups):
    # compressed bubble accelerates outward, expanded bubble inward
    _, acc_small = km_rhs(BubbleState(r=0.95), 0.0, 0.0, groups)
    _, acc_big = km_rhs(BubbleState(r=1.05), 0.0, 0.0, groups)
    assert acc_small > 0
    assert acc_big < 0


def test_linear_oracle_frozen_values(groups):
    p = linear_oracle(groups)
    assert p.quality == pytest.approx(2.34779, rel=1e-5)
    assert p.omega0 == pytest.approx(31.4754, rel=1e-5)
    assert p.omega_damped == pytest.approx(31.4747, rel=1e-5)
    assert p.relax == pytest.approx(2.0 * p.quality, rel=1e-12)
    assert p.forcing_scale == pytest.approx(0.253302, rel=1e-5)
    assert not p.overdamped


def test_linear_oracle_approximate_branch(groups):
    p = linear_oracle(groups, approximate=True)
    assert p.omega0 == pytest.approx(
        np.sqrt(groups.kexp * groups.elast_base) / groups.omega, rel=1e-12)
    # the exact and limit branches agree to leading order
    exact = linear_oracle(groups)
    assert p.omega0 == pytest.approx(exact.omega0, rel=5e-3)
    assert p.quality == pytest.approx(exact.quality, rel=5e-2)


def test_linear_step_response_boundary_values(groups):
    p = linear_oracle(groups)
    r1 = linear_step_response(p, np.array([0.0, 200.0]))
    assert r1[0] == pytest.approx(0.0, abs=1e-15)
    # settles to the static deflection -Lambda/omega0^2
    assert r1[1] == pytest.approx(-p.forcing_scale / p.omega0 ** 2, rel=1e-6)
    with pytest.raises(DomainError):
        linear_step_response(p, [-1.0])


def test_simulate_matches_linear_oracle_at_small_amplitude(groups):
    p = linear_oracle(groups)
    dtau = default_dtau(groups)
    tau_end = 5.0 * p.relax
    forcing = step_pulse(1, tau_end, dtau, groups.omega_p)
    traj = simulate(BubbleState(), forcing, groups, dtau=dtau)
    oracle = 1.0 + linear_step_response(p, traj.tau)
    err = np.linalg.norm(traj.r - oracle) / np.linalg.norm(oracle)
    assert err < 1e-4


def test_step_pulse_shape():
    sig = step_pulse(-1, tau_p=2.0, dtau=0.5, omega_p=1.0, tau_total=4.0)
    np.testing.assert_array_equal(sig.samples, [-1, -1, -1, -1, 0, 0, 0, 0])
    assert sig.dt_seconds == pytest.approx(0.5)
    with pytest.raises(DomainError):
        step_pulse(2, 1.0, 0.1, 1.0)
    with pytest.raises(DomainError):
        step_pulse(1, 0.0, 0.1, 1.0)


def test_simulate_requires_forcing_coverage(groups):
    dtau = default_dtau(groups)
    short = step_pulse(1, 10 * dtau, dtau, groups.omega_p)
    with pytest.raises(DomainError, match="cover"):
        simulate(BubbleState(), short, groups, dtau=dtau, tau_end=100 * dtau)


def test_collapse_is_reported_with_its_time():
    # nearly vapor-filled bubble: negligible gas stiffness, so a strong
    # positive pressure step drives the radius to collapse
    weak = dimensionless_groups(FluidProperties(vapor_pressure=9.99e4),
                                BubbleConfig(),
                                DriveConfig(pressure_amplitude=5.0e4))
    dtau = default_dtau(weak)
    forcing = step_pulse(1, 2000 * dtau, dtau, weak.omega_p)
    with pytest.raises(CollapseError) as exc:
        simulate(BubbleState(), forcing, weak, dtau=dtau)
    assert 0.0 < exc.value.tau < 2000 * dtau


def test_singular_leading_coefficient_is_detected(groups):
    # inward wall speed that zeroes (1 - omega v) r + omega visc
    v = (1.0 + groups.omega * groups.visc) / groups.omega
    with pytest.raises(SingularityError):
        km_rhs(BubbleState(r=1.0, r_dot=v), 0.0, 0.0, groups)


def test_trajectory_units_and_csv_roundtrip(tmp_path, groups):
    dtau = default_dtau(groups)
    forcing = step_pulse(1, 64 * dtau, dtau, groups.omega_p)
    traj = simulate(BubbleState(), forcing, groups, dtau=dtau)
    assert traj.dtau == pytest.approx(dtau)
    assert traj.dt_seconds == pytest.approx(dtau / groups.omega_p)
    np.testing.assert_allclose(traj.t_seconds, traj.tau / groups.omega_p)

    path = tmp_path / "traj.csv"
    traj.to_csv(path, decimate=4)
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data.shape == ((traj.tau.size + 3) // 4, 5)
    np.testing.assert_allclose(data[:, 2], traj.r[::4], rtol=1e-6)


def test_pure_python_fallback_matches_compiled_kernels(groups):
    dtau = default_dtau(groups)
    n = 400
    forcing = step_pulse(1, n * dtau, dtau, groups.omega_p)
    traj = simulate(BubbleState(), forcing, groups, dtau=dtau)

    code = (
        "import numpy as np\n"
        "from kmbubble import (BubbleConfig, BubbleState, DriveConfig,\n"
        "    FluidProperties, dimensionless_groups, simulate, step_pulse)\n"
        "g = dimensionless_groups(FluidProperties(), BubbleConfig(),\n"
        "    DriveConfig(pressure_amplitude=100.0))\n"
        f"dtau = {dtau!r}\n"
        f"f = step_pulse(1, {n} * dtau, dtau, g.omega_p)\n"
        "t = simulate(BubbleState(), f, g, dtau=dtau)\n"
        "print(repr(float(t.r[-1])), repr(float(t.r_dot[-1])))\n")
    env = dict(os.environ, KMBUBBLE_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True, check=True)
    r_last, v_last = (float(tok) for tok in out.stdout.split())
    assert r_last == pytest.approx(traj.r[-1], rel=1e-12, abs=1e-15)
    assert v_last == pytest.approx(traj.r_dot[-1], rel=1e-12, abs=1e-15)


def test_invalid_simulation_arguments(groups):
    dtau = default_dtau(groups)
    forcing = step_pulse(1, 32 * dtau, dtau, groups.omega_p)
    with pytest.raises(DomainError):
        simulate(BubbleState(), forcing, groups, dtau=-dtau)
    with pytest.raises(DomainError):
        simulate(BubbleState(), forcing, groups, dtau=dtau, h=0.0)
    with pytest.raises(DomainError):
        BubbleState(r=0.0)
