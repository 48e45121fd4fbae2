"""Thick-walled cylindrical pressure vessel (Lamé) analysis and sizing.

Sign convention: tension positive, so a wall loaded by pressure ``p`` has
radial stress ``-p`` at that wall.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, UnsizableError

NITROGEN_GAS_CONSTANT = 296.8  # J/(kg K)


@dataclass(frozen=True)
class TankSpec:
    p_internal: float  # Pa
    r_inner: float  # m
    r_outer: float  # m
    p_external: float = 0.0  # Pa
    length: float = 0.0  # m
    allowable_stress: float | None = None  # Pa
    safety_factor: float = 1.0

    def __post_init__(self):
        if not self.r_inner > 0:
            raise DomainError("inner radius must be positive")
        if not self.r_outer > self.r_inner:
            raise DomainError("outer radius must exceed inner radius")
        if not self.p_internal >= self.p_external >= 0:
            raise DomainError("require p_internal >= p_external >= 0")
        if self.safety_factor < 1:
            raise DomainError("safety factor must be >= 1")
        if self.length < 0:
            raise DomainError("length must be non-negative")

    @property
    def thickness(self) -> float:
        return self.r_outer - self.r_inner

    @property
    def volume(self) -> float:
        """Internal volume of the cylindrical section (m^3)."""
        return math.pi * self.r_inner**2 * self.length


@dataclass(frozen=True)
class LameField:
    const_a: float  # Pa
    const_b: float  # Pa m^2
    r_inner: float
    r_outer: float
    p_internal: float
    p_external: float

    # Evaluated as one quotient rather than a -/+ b/r^2: for thin walls the
    # two terms nearly cancel and the boundary values would drift off -p.
    def _stress(self, r, sign):
        r2 = np.square(r)
        ri2, re2 = self.r_inner**2, self.r_outer**2
        num = self.p_internal * ri2 * (r2 + sign * re2) - self.p_external * re2 * (r2 + sign * ri2)
        return num / (r2 * (re2 - ri2))

    def radial_stress(self, r):
        return self._stress(r, -1.0)

    def hoop_stress(self, r):
        return self._stress(r, 1.0)

    @property
    def axial_stress(self) -> float:
        """Uniform axial stress for a capped cylinder (reported, not a sizing driver)."""
        ri2, re2 = self.r_inner**2, self.r_outer**2
        return (self.p_internal * ri2 - self.p_external * re2) / (re2 - ri2)

    def profile(self, n: int = 51) -> np.ndarray:
        """Stress across the wall as rows of (r, radial, hoop) in m and Pa."""
        r = np.linspace(self.r_inner, self.r_outer, n)
        return np.column_stack([r, self.radial_stress(r), self.hoop_stress(r)])


def lame_field(spec: TankSpec) -> LameField:
    ri2, re2 = spec.r_inner**2, spec.r_outer**2
    pi, po = spec.p_internal, spec.p_external
    denom = re2 - ri2
    return LameField(
        const_a=(pi * ri2 - po * re2) / denom,
        const_b=(pi - po) * ri2 * re2 / denom,
        r_inner=spec.r_inner,
        r_outer=spec.r_outer,
        p_internal=pi,
        p_external=po,
    )


def size_thickness(
    p_internal: float, r_inner: float, allowable_stress: float, safety_factor: float = 1.0
) -> float:
    """Smallest wall thickness (m) keeping inner-wall hoop stress at f/SF.

    Assumes zero external pressure. Raises :class:`UnsizableError` when the
    working stress does not exceed the internal pressure, since the inner
    hoop stress of a closed cylinder never drops below ``p``.
    """
    if not (p_internal > 0 and r_inner > 0 and allowable_stress > 0):
        raise DomainError("pressure, radius and allowable stress must be positive")
    if safety_factor < 1:
        raise DomainError("safety factor must be >= 1")
    f_work = allowable_stress / safety_factor
    if f_work <= p_internal:
        raise UnsizableError(
            f"working stress {f_work:.6g} Pa does not exceed internal pressure "
            f"{p_internal:.6g} Pa; no thickness satisfies the hoop limit"
        )
    r_outer = r_inner * math.sqrt((f_work + p_internal) / (f_work - p_internal))
    return r_outer - r_inner


def stored_gas_mass(
    p: float,
    volume: float,
    temperature: float,
    specific_gas_constant: float = NITROGEN_GAS_CONSTANT,
) -> float:
    """Ideal-gas mass (kg) held in ``volume`` m^3 at ``p`` Pa and ``temperature`` K."""
    if p < 0:
        raise DomainError("pressure must be non-negative")
    if not (volume > 0 and temperature > 0 and specific_gas_constant > 0):
        raise DomainError("volume, temperature and gas constant must be positive")
    return p * volume / (specific_gas_constant * temperature)
