"""Quasi-one-dimensional isentropic flow through a choked nozzle profile."""

from __future__ import annotations

import csv
import math
from dataclasses import astuple, dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, ProfileError
from .nozzle import NITROGEN, GasModel, NozzleGeometry, expansion_ratio, static_ratios

SUBSONIC = "subsonic"
SUPERSONIC = "supersonic"

CSV_HEADER = ("x_m", "area_m2", "mach", "pressure_pa", "temperature_k", "density_kgm3", "velocity_ms")


@dataclass(frozen=True)
class FlowStation:
    x: float  # m
    area: float  # m^2
    mach: float
    pressure: float  # Pa
    temperature: float  # K
    density: float  # kg/m^3
    velocity: float  # m/s

    @property
    def mass_flux(self) -> float:
        return self.density * self.velocity * self.area


class AreaProfile:
    """Ordered axial stations with a single interior throat."""

    def __init__(self, x, area):
        x = np.asarray(x, dtype=float)
        area = np.asarray(area, dtype=float)
        if x.ndim != 1 or x.shape != area.shape or x.size < 3:
            raise ProfileError("profile needs at least three matching (x, area) stations")
        if np.any(np.diff(x) <= 0):
            raise ProfileError("station x must be strictly increasing")
        if np.any(area <= 0) or not np.all(np.isfinite(area)):
            raise ProfileError("areas must be positive and finite")
        i_min = int(np.argmin(area))
        if np.count_nonzero(area == area[i_min]) != 1:
            raise ProfileError("profile has no unique minimum-area throat")
        if i_min == 0 or i_min == x.size - 1:
            raise ProfileError("throat must be an interior station")
        self.x = x
        self.area = area
        self.throat_index = i_min

    def __len__(self):
        return self.x.size

    @property
    def stations(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.area.tolist()))

    @classmethod
    def from_radii(cls, x, radius) -> AreaProfile:
        return cls(x, math.pi * np.square(np.asarray(radius, dtype=float)))

    @classmethod
    def from_geometry(cls, geometry: NozzleGeometry, n: int = 200) -> AreaProfile:
        rows = geometry.profile(n)
        return cls.from_radii(rows[:, 0], rows[:, 1])


def _area_residual(mach: float, a_ratio: float, gas: GasModel) -> float:
    return expansion_ratio(mach, gas) / a_ratio - 1.0


def mach_from_area_ratio(a_ratio: float, branch: str, gas: GasModel = NITROGEN) -> float:
    """Invert the area-Mach relation on the requested branch."""
    if branch not in (SUBSONIC, SUPERSONIC):
        raise DomainError(f"branch must be {SUBSONIC!r} or {SUPERSONIC!r}")
    if not a_ratio >= 1:
        raise DomainError(f"area ratio below 1 has no isentropic solution: {a_ratio}")
    if a_ratio == 1:
        return 1.0
    g = gas.gamma
    if branch == SUBSONIC:
        # A/A* >= c/M with c = (2/(g+1))^k, so M = c/(2 a_ratio) is bracketing.
        c = (2.0 / (g + 1.0)) ** ((g + 1.0) / (2.0 * (g - 1.0)))
        lo, hi = 0.5 * c / a_ratio, 1.0
    else:
        lo, hi = 1.0, 2.0
        while expansion_ratio(hi, gas) < a_ratio:
            hi *= 2.0
    return brentq(_area_residual, lo, hi, args=(a_ratio, gas), xtol=1e-15, rtol=1e-15, maxiter=200)


def solve_profile(
    profile: AreaProfile, p0: float, t0: float, gas: GasModel = NITROGEN
) -> list[FlowStation]:
    """Choked, shock-free solution: subsonic before the throat, supersonic after."""
    if not isinstance(profile, AreaProfile):
        profile = AreaProfile(*zip(*profile))
    if not (p0 > 0 and t0 > 0):
        raise DomainError("stagnation pressure and temperature must be positive")
    g, R = gas.gamma, gas.specific_gas_constant
    a_star = profile.area[profile.throat_index]
    out = []
    for i, (x, area) in enumerate(zip(profile.x.tolist(), profile.area.tolist())):
        if i == profile.throat_index:
            mach = 1.0
        else:
            branch = SUBSONIC if i < profile.throat_index else SUPERSONIC
            mach = mach_from_area_ratio(area / a_star, branch, gas)
        t_ratio, p_ratio = static_ratios(mach, gas)
        temperature = t0 / t_ratio
        pressure = p0 / p_ratio
        density = pressure / (R * temperature)
        velocity = mach * math.sqrt(g * R * temperature)
        out.append(FlowStation(x, area, mach, pressure, temperature, density, velocity))
    return out


def write_stations_csv(path, stations: list[FlowStation]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for st in stations:
            writer.writerow([repr(v) for v in astuple(st)])
