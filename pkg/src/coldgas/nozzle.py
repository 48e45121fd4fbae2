"""Isentropic design of a conical converging-diverging nozzle."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Printed nozzle lengths kept for comparison only; they do not follow from
# the printed 5 deg half-angle and diameters.
REFERENCE_CONVERGENT_LENGTH = 11.44e-3  # m
REFERENCE_DIVERGENT_LENGTH = 9.47e-3  # m


@dataclass(frozen=True)
class GasModel:
    gamma: float = 1.4
    specific_gas_constant: float = 296.8  # J/(kg K)

    def __post_init__(self):
        if not self.gamma > 1:
            raise DomainError("gamma must exceed 1")
        if not self.specific_gas_constant > 0:
            raise DomainError("gas constant must be positive")

    @property
    def cp(self) -> float:
        return self.gamma * self.specific_gas_constant / (self.gamma - 1.0)


NITROGEN = GasModel()


@dataclass(frozen=True)
class NozzleDesign:
    p_chamber: float  # Pa, stagnation
    t_chamber: float  # K
    p_exit: float  # Pa
    t_exit: float  # K
    mach_exit: float
    expansion_ratio: float
    throat_area: float  # m^2
    exit_area: float
    inlet_area: float
    mass_flow: float  # kg/s
    exit_velocity: float  # m/s
    thrust_vacuum: float  # N

    def ideal_isp(self, g0: float = 9.80665) -> float:
        """Vacuum specific impulse (s) implied by the design."""
        return self.thrust_vacuum / (self.mass_flow * g0)


@dataclass(frozen=True)
class NozzleGeometry:
    inlet_diameter: float  # m
    throat_diameter: float
    exit_diameter: float
    convergent_half_angle: float  # deg
    divergent_half_angle: float
    convergent_length: float  # m
    divergent_length: float

    @property
    def length(self) -> float:
        return self.convergent_length + self.divergent_length

    def radius_at(self, x):
        """Wall radius (m) at axial station ``x`` measured from the inlet plane."""
        x = np.asarray(x, dtype=float)
        ri, rt, re = self.inlet_diameter / 2, self.throat_diameter / 2, self.exit_diameter / 2
        lc, ld = self.convergent_length, self.divergent_length
        conv = ri + (rt - ri) * (x / lc)
        div = rt + (re - rt) * ((x - lc) / ld)
        return np.where(x <= lc, conv, div)

    def profile(self, n: int = 200) -> np.ndarray:
        """Rows of (x, radius) in metres, uniform in x, throat included."""
        x = np.linspace(0.0, self.length, n)
        if not np.any(x == self.convergent_length):
            x = np.sort(np.append(x, self.convergent_length))
        return np.column_stack([x, self.radius_at(x)])

    def length_discrepancies(self, rtol: float = 0.01) -> list[str]:
        notes = []
        for label, ours, ref in (
            ("convergent", self.convergent_length, REFERENCE_CONVERGENT_LENGTH),
            ("divergent", self.divergent_length, REFERENCE_DIVERGENT_LENGTH),
        ):
            if abs(ours - ref) > rtol * ref:
                notes.append(
                    f"{label} length {ours * 1e3:.4g} mm from diameters and half-angle "
                    f"differs from printed reference {ref * 1e3:.4g} mm"
                )
        return notes


def static_ratios(mach: float, gas: GasModel = NITROGEN) -> tuple[float, float]:
    """Stagnation-to-static ratios ``(T0/T, P0/P)`` at Mach ``mach``."""
    if mach < 0:
        raise DomainError("Mach number must be non-negative")
    g = gas.gamma
    t_ratio = 1.0 + 0.5 * (g - 1.0) * mach * mach
    return t_ratio, t_ratio ** (g / (g - 1.0))


def exit_mach(p_ratio: float, gas: GasModel = NITROGEN) -> float:
    """Mach number reached by isentropic expansion through ``P0/P = p_ratio``."""
    if not p_ratio > 1:
        raise DomainError(f"pressure ratio must exceed 1, got {p_ratio}")
    g = gas.gamma
    # expm1/log keep precision as p_ratio -> 1+
    t_ratio_minus_1 = math.expm1((g - 1.0) / g * math.log(p_ratio))
    return math.sqrt(2.0 / (g - 1.0) * t_ratio_minus_1)


def expansion_ratio(mach: float, gas: GasModel = NITROGEN) -> float:
    """Area ratio A/A* of isentropic flow at ``mach``."""
    if not mach > 0:
        raise DomainError("Mach number must be positive")
    g = gas.gamma
    base = (2.0 / (g + 1.0)) * (1.0 + 0.5 * (g - 1.0) * mach * mach)
    return base ** ((g + 1.0) / (2.0 * (g - 1.0))) / mach


def choked_mass_flow(throat_area: float, p0: float, t0: float, gas: GasModel = NITROGEN) -> float:
    g, R = gas.gamma, gas.specific_gas_constant
    return throat_area * p0 * math.sqrt(g / (R * t0)) * (2.0 / (g + 1.0)) ** ((g + 1.0) / (2.0 * (g - 1.0)))


def cone_length(d_big: float, d_throat: float, half_angle_deg: float) -> float:
    return (d_big - d_throat) / (2.0 * math.tan(math.radians(half_angle_deg)))


def design_nozzle(
    p_chamber: float,
    t_chamber: float,
    p_exit: float,
    throat_area: float,
    gas: GasModel = NITROGEN,
    half_angles: tuple[float, float] = (5.0, 5.0),
    inlet_diameter: float = 10e-3,
) -> tuple[NozzleDesign, NozzleGeometry]:
    """Size a perfectly expanded conical nozzle for the given operating point.

    Args:
        p_chamber: stagnation pressure at the nozzle inlet (Pa).
        t_chamber: stagnation temperature (K).
        p_exit: design exit static pressure (Pa).
        throat_area: throat cross-section (m^2).
        gas: working gas; nitrogen by default.
        half_angles: convergent and divergent cone half-angles (deg).
        inlet_diameter: inlet diameter (m), must exceed the throat diameter.

    Returns:
        The thermodynamic design and the conical geometry.
    """
    if not (p_chamber > 0 and p_exit > 0 and t_chamber > 0):
        raise DomainError("pressures and temperature must be positive")
    if not p_chamber > p_exit:
        raise DomainError("chamber pressure must exceed exit pressure")
    if not throat_area > 0:
        raise DomainError("throat area must be positive")
    conv_angle, div_angle = half_angles
    if not (0 < conv_angle < 90 and 0 < div_angle < 90):
        raise DomainError("half-angles must lie in (0, 90) degrees")

    m_e = exit_mach(p_chamber / p_exit, gas)
    eps = expansion_ratio(m_e, gas)
    t_ratio, _ = static_ratios(m_e, gas)
    t_exit = t_chamber / t_ratio
    exit_area = eps * throat_area

    d_throat = math.sqrt(4.0 * throat_area / math.pi)
    d_exit = math.sqrt(4.0 * exit_area / math.pi)
    if not inlet_diameter > d_throat:
        raise DomainError("inlet diameter must exceed throat diameter")
    inlet_area = math.pi * inlet_diameter**2 / 4.0

    mdot = choked_mass_flow(throat_area, p_chamber, t_chamber, gas)
    v_e = m_e * math.sqrt(gas.gamma * gas.specific_gas_constant * t_exit)
    thrust = mdot * v_e + p_exit * exit_area

    design = NozzleDesign(
        p_chamber=p_chamber,
        t_chamber=t_chamber,
        p_exit=p_exit,
        t_exit=t_exit,
        mach_exit=m_e,
        expansion_ratio=eps,
        throat_area=throat_area,
        exit_area=exit_area,
        inlet_area=inlet_area,
        mass_flow=mdot,
        exit_velocity=v_e,
        thrust_vacuum=thrust,
    )
    geometry = NozzleGeometry(
        inlet_diameter=inlet_diameter,
        throat_diameter=d_throat,
        exit_diameter=d_exit,
        convergent_half_angle=conv_angle,
        divergent_half_angle=div_angle,
        convergent_length=cone_length(inlet_diameter, d_throat, conv_angle),
        divergent_length=cone_length(d_exit, d_throat, div_angle),
    )
    return design, geometry


def write_geometry_profile(path, geometry: NozzleGeometry, n: int = 200) -> None:
    """Write ``x_m radius_m`` pairs, one station per line."""
    rows = geometry.profile(n)
    with open(path, "w", newline="\n") as fh:
        fh.write("# x_m radius_m\n")
        for x, r in rows:
            fh.write(f"{float(x)!r} {float(r)!r}\n")


def read_geometry_profile(path) -> np.ndarray:
    return np.loadtxt(path, comments="#", ndmin=2)
