"""Coplanar Hohmann transfer plan and rocket-equation propellant budget."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .astro import EARTH, G0, BodyConstants, circular_energy, vis_viva_speed
from .errors import DomainError


@dataclass(frozen=True)
class TransferPlan:
    r1: float  # km
    r2: float  # km
    a_transfer: float  # km
    eps_transfer: float  # km^2/s^2
    eps_orbit1: float
    eps_orbit2: float
    v_orbit1: float  # km/s
    v_orbit2: float
    v_t1: float
    v_t2: float
    dv1: float  # km/s, signed along velocity
    dv2: float
    dv_total: float
    tof: float  # s

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class PropellantBudget:
    isp: float  # s
    g0: float  # m/s^2
    u_eq: float  # m/s
    m_initial: float  # kg
    m_final: float  # kg
    m_propellant: float  # kg
    dv: float  # m/s


def plan_hohmann(alt1: float, alt2: float, body: BodyConstants = EARTH) -> TransferPlan:
    """Plan a two-burn Hohmann transfer between circular orbits.

    Altitudes are in km above ``body.radius``. Burn values are signed along
    the local velocity, so a transfer to a lower orbit yields negative
    ``dv1``, ``dv2`` and ``dv_total``.
    """
    if not (alt1 > 0 and alt2 > 0):
        raise DomainError("altitudes must be positive")
    if alt1 == alt2:
        raise DomainError("initial and target altitudes are equal; no transfer")
    r1 = body.radius + alt1
    r2 = body.radius + alt2
    a_t = 0.5 * (r1 + r2)

    v_orbit1 = vis_viva_speed(r1, r1, body)
    v_orbit2 = vis_viva_speed(r2, r2, body)
    v_t1 = vis_viva_speed(r1, a_t, body)
    v_t2 = vis_viva_speed(r2, a_t, body)
    dv1 = v_t1 - v_orbit1
    dv2 = v_orbit2 - v_t2

    return TransferPlan(
        r1=r1,
        r2=r2,
        a_transfer=a_t,
        eps_transfer=-body.mu / (2.0 * a_t),
        eps_orbit1=circular_energy(r1, body),
        eps_orbit2=circular_energy(r2, body),
        v_orbit1=v_orbit1,
        v_orbit2=v_orbit2,
        v_t1=v_t1,
        v_t2=v_t2,
        dv1=dv1,
        dv2=dv2,
        dv_total=dv1 + dv2,
        tof=math.pi * math.sqrt(a_t**3 / body.mu),
    )


def propellant_mass(dv: float, isp: float, m_final: float, g0: float = G0) -> PropellantBudget:
    """Propellant needed to deliver ``dv`` (m/s) ending at ``m_final`` kg."""
    if dv < 0:
        raise DomainError("dv is a magnitude and must be non-negative")
    if not isp > 0:
        raise DomainError("isp must be positive")
    if not m_final > 0:
        raise DomainError("final mass must be positive")
    u_eq = g0 * isp
    m_p = m_final * math.expm1(dv / u_eq)
    return PropellantBudget(
        isp=isp,
        g0=g0,
        u_eq=u_eq,
        m_initial=m_final + m_p,
        m_final=m_final,
        m_propellant=m_p,
        dv=dv,
    )
