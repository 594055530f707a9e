"""Dimensional bubble/liquid parameters and the nondimensional groups.

All dimensional quantities are SI. The nondimensional scaling uses the
equilibrium radius as the length scale and 1/omega_p as the time scale,
so every downstream time variable tau is omega_p * t.
"""

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class FluidProperties:
    """Liquid properties; defaults are water at 20 C."""

    sound_speed: float = 1484.0        # m/s
    dynamic_viscosity: float = 1.0e-3  # kg/(m s)
    surface_tension: float = 7.25e-2   # N/m
    density: float = 1.0e3             # kg/m^3
    vapor_pressure: float = 2330.0     # Pa

    def __post_init__(self):
        for name in ("sound_speed", "surface_tension", "density", "vapor_pressure"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be positive")
        # zero viscosity is allowed as the inviscid limit
        if self.dynamic_viscosity < 0.0:
            raise DomainError("dynamic_viscosity must be nonnegative")


@dataclass(frozen=True)
class BubbleConfig:
    """Equilibrium state of the gas bubble."""

    equilibrium_radius: float = 1.0e-3   # m
    static_pressure: float = 1.0e5       # Pa
    polytropic_exponent: float = 4.0 / 3.0

    def __post_init__(self):
        if self.equilibrium_radius <= 0.0:
            raise DomainError("equilibrium_radius must be positive")
        if self.static_pressure <= 0.0:
            raise DomainError("static_pressure must be positive")
        if self.polytropic_exponent < 1.0:
            raise DomainError("polytropic_exponent must be >= 1")


@dataclass(frozen=True)
class DriveConfig:
    """Acoustic forcing scale and the reference (time-scale) frequency."""

    pressure_amplitude: float = 2.0e4   # Pa, signed scale of P_a
    reference_frequency: float = 100.0  # Hz

    def __post_init__(self):
        if self.reference_frequency <= 0.0:
            raise DomainError("reference_frequency must be positive")

    @property
    def angular_frequency(self):
        return 2.0 * math.pi * self.reference_frequency


@dataclass(frozen=True)
class DimensionlessSet:
    """Nondimensional groups of the bubble model.

    omega  -- bubble size relative to the acoustic wavelength
    visc   -- inverse-Reynolds viscous term
    surf   -- inverse-Weber surface-tension term
    elast  -- gas elasticity term
    force  -- acoustic forcing measure (signed)
    kexp   -- 3 * polytropic exponent

    The *_base fields are the omega-independent bases; visc, elast and
    force scale as base/omega^2 while surf scales as base/omega^3.
    """

    omega: float
    visc: float
    surf: float
    elast: float
    force: float
    kexp: float
    visc_base: float
    surf_base: float
    elast_base: float
    force_base: float
    omega_p: float  # rad/s, kept for dimensional conversions


def dimensionless_groups(fluid: FluidProperties, bubble: BubbleConfig,
                         drive: DriveConfig) -> DimensionlessSet:
    """Compute the nondimensional parameter set from dimensional inputs."""
    c = fluid.sound_speed
    rho = fluid.density
    wp = drive.angular_frequency
    dp = bubble.static_pressure - fluid.vapor_pressure
    if dp <= 0.0:
        raise DomainError("static_pressure must exceed vapor_pressure")

    omega = wp * bubble.equilibrium_radius / c
    visc_base = 4.0 * fluid.dynamic_viscosity * wp / (rho * c * c)
    surf_base = 2.0 * fluid.surface_tension * wp / (rho * c ** 3)
    elast_base = dp / (rho * c * c)
    force_base = drive.pressure_amplitude / (rho * c * c)

    return DimensionlessSet(
        omega=omega,
        visc=visc_base / omega ** 2,
        surf=surf_base / omega ** 3,
        elast=elast_base / omega ** 2,
        force=force_base / omega ** 2,
        kexp=3.0 * bubble.polytropic_exponent,
        visc_base=visc_base,
        surf_base=surf_base,
        elast_base=elast_base,
        force_base=force_base,
        omega_p=wp,
    )


def natural_frequency(fluid: FluidProperties, bubble: BubbleConfig) -> float:
    """Natural oscillation frequency of the bubble in Hz."""
    dp = bubble.static_pressure - fluid.vapor_pressure
    if dp <= 0.0:
        raise DomainError("static_pressure must exceed vapor_pressure")
    stiffness = 3.0 * bubble.polytropic_exponent * dp / fluid.density
    return math.sqrt(stiffness) / (2.0 * math.pi * bubble.equilibrium_radius)


def relaxation_time(groups: DimensionlessSet) -> float:
    """Dimensionless e-folding time of the transient decay, 2*omega/(kexp*elast_base)."""
    km = groups.kexp * groups.elast_base
    if km <= 0.0:
        raise DomainError("kexp * elast_base must be positive")
    return 2.0 * groups.omega / km
