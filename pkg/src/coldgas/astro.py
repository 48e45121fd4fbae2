"""Two-body constants, state/element representations and conversions.

Units at the API boundary are km, km/s, seconds and degrees; radians are
used internally only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError

G0 = 9.80665  # m/s^2, standard gravity
EARTH_ROTATION_RATE = 7.2921159e-5  # rad/s

# Below these thresholds the corresponding angle is undefined and folded
# into the next one (see state_to_elements).
CIRCULAR_ECC = 1e-8
EQUATORIAL_INC_DEG = 1e-8


class Vec3(NamedTuple):
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def dot(self, other) -> float:
        return self.x * other[0] + self.y * other[1] + self.z * other[2]

    def cross(self, other) -> Vec3:
        return Vec3(
            self.y * other[2] - self.z * other[1],
            self.z * other[0] - self.x * other[2],
            self.x * other[1] - self.y * other[0],
        )

    def scale(self, k: float) -> Vec3:
        return Vec3(self.x * k, self.y * k, self.z * k)


@dataclass(frozen=True)
class BodyConstants:
    mu: float = 398600.0  # km^3/s^2
    radius: float = 6378.14  # km

    def __post_init__(self):
        if not (self.mu > 0 and self.radius > 0):
            raise DomainError("mu and radius must be positive")


EARTH = BodyConstants()


@dataclass(frozen=True)
class StateVector:
    epoch: float  # s since simulation start
    position: Vec3  # km
    velocity: Vec3  # km/s

    def __post_init__(self):
        object.__setattr__(self, "position", Vec3(*map(float, self.position)))
        object.__setattr__(self, "velocity", Vec3(*map(float, self.velocity)))
        if not all(math.isfinite(c) for c in (*self.position, *self.velocity)):
            raise DomainError("state vector components must be finite")

    @property
    def radius(self) -> float:
        return self.position.norm()

    @property
    def speed(self) -> float:
        return self.velocity.norm()

    def altitude(self, body: BodyConstants = EARTH) -> float:
        return self.radius - body.radius


@dataclass(frozen=True)
class KeplerianElements:
    semi_major_axis: float  # km
    eccentricity: float
    inclination: float  # deg
    raan: float  # deg
    arg_perigee: float  # deg
    true_anomaly: float  # deg

    def validate(self) -> None:
        if not self.semi_major_axis > 0:
            raise DomainError(f"semi-major axis must be positive, got {self.semi_major_axis}")
        if not 0 <= self.eccentricity < 1:
            raise DomainError(f"eccentricity must be in [0, 1), got {self.eccentricity}")

    @property
    def periapsis_radius(self) -> float:
        return self.semi_major_axis * (1 - self.eccentricity)

    @property
    def apoapsis_radius(self) -> float:
        return self.semi_major_axis * (1 + self.eccentricity)


def normalize_deg(angle: float) -> float:
    """Wrap an angle in degrees into [0, 360)."""
    wrapped = angle % 360.0
    return 0.0 if wrapped >= 360.0 else wrapped


def vis_viva_speed(r: float, a: float, body: BodyConstants = EARTH) -> float:
    """Orbital speed at radius ``r`` on a conic of semi-major axis ``a``."""
    if not (r > 0 and a > 0):
        raise DomainError("r and a must be positive")
    if r == a:
        return math.sqrt(body.mu / r)
    term = 2.0 / r - 1.0 / a
    if term <= 0:
        raise DomainError(f"orbit with a={a} km cannot reach r={r} km")
    return math.sqrt(body.mu * term)


def specific_energy(state_or_r, v: float | None = None, body: BodyConstants = EARTH) -> float:
    """Specific orbital energy v^2/2 - mu/r in km^2/s^2.

    Accepts either a :class:`StateVector` or a radius/speed pair.
    """
    if isinstance(state_or_r, StateVector):
        r, v = state_or_r.radius, state_or_r.speed
    else:
        r = float(state_or_r)
        if v is None:
            raise DomainError("speed is required when passing a radius")
    if not r > 0:
        raise DomainError("radius must be positive")
    return 0.5 * v * v - body.mu / r


def circular_energy(r: float, body: BodyConstants = EARTH) -> float:
    return -body.mu / (2.0 * r)


def orbital_period(a: float, body: BodyConstants = EARTH) -> float:
    if not a > 0:
        raise DomainError("semi-major axis must be positive")
    return 2.0 * math.pi * math.sqrt(a**3 / body.mu)


def elements_to_state(
    el: KeplerianElements, body: BodyConstants = EARTH, epoch: float = 0.0
) -> StateVector:
    el.validate()
    a, e = el.semi_major_axis, el.eccentricity
    inc, raan, argp, nu = (
        math.radians(el.inclination),
        math.radians(el.raan),
        math.radians(el.arg_perigee),
        math.radians(el.true_anomaly),
    )
    p = a * (1.0 - e * e)
    r = p / (1.0 + e * math.cos(nu))
    k = math.sqrt(body.mu / p)
    rp = (r * math.cos(nu), r * math.sin(nu))
    vp = (-k * math.sin(nu), k * (e + math.cos(nu)))

    cO, sO = math.cos(raan), math.sin(raan)
    cw, sw = math.cos(argp), math.sin(argp)
    ci, si = math.cos(inc), math.sin(inc)
    # Columns of the perifocal-to-inertial rotation for the P and Q axes.
    P = (cO * cw - sO * sw * ci, sO * cw + cO * sw * ci, sw * si)
    Q = (-cO * sw - sO * cw * ci, -sO * sw + cO * cw * ci, cw * si)
    pos = Vec3(*(P[j] * rp[0] + Q[j] * rp[1] for j in range(3)))
    vel = Vec3(*(P[j] * vp[0] + Q[j] * vp[1] for j in range(3)))
    return StateVector(epoch, pos, vel)


def _signed_angle(u: Vec3, w: Vec3, axis: Vec3) -> float:
    """Angle from ``u`` to ``w`` measured positively about ``axis`` (rad)."""
    return math.atan2(axis.dot(u.cross(w)), u.dot(w))


def state_to_elements(sv: StateVector, body: BodyConstants = EARTH) -> KeplerianElements:
    """Osculating elements of a bound state.

    Singular geometries use fixed conventions: when the orbit is circular
    the argument of perigee is 0 and the true anomaly is measured from the
    node (or from the x-axis if also equatorial); when equatorial the RAAN
    is 0 and the perigee is measured from the x-axis.
    """
    r_vec, v_vec = sv.position, sv.velocity
    r = r_vec.norm()
    v = v_vec.norm()
    mu = body.mu
    if r == 0:
        raise DomainError("position is at the origin")
    h_vec = r_vec.cross(v_vec)
    h = h_vec.norm()
    if h <= 1e-12 * r * max(v, 1e-300):
        raise DomainError("radial trajectory: angular momentum is zero")
    energy = 0.5 * v * v - mu / r
    if energy >= 0:
        raise DomainError("trajectory is not bound (e >= 1)")
    a = -mu / (2.0 * energy)

    rv = r_vec.dot(v_vec)
    coef_r = (v * v - mu / r) / mu
    e_vec = Vec3(*((coef_r * r_vec[j] - rv * v_vec[j] / mu) for j in range(3)))
    e = e_vec.norm()

    h_hat = h_vec.scale(1.0 / h)
    inc = math.degrees(math.acos(max(-1.0, min(1.0, h_hat.z))))
    equatorial = inc < EQUATORIAL_INC_DEG or inc > 180.0 - EQUATORIAL_INC_DEG
    circular = e < CIRCULAR_ECC
    x_hat = Vec3(1.0, 0.0, 0.0)

    if equatorial:
        raan = 0.0
        node = x_hat
    else:
        node = Vec3(-h_vec.y, h_vec.x, 0.0)
        raan = math.atan2(node.y, node.x)
        node = node.scale(1.0 / node.norm())

    if circular:
        argp = 0.0
        nu = _signed_angle(node, r_vec, h_hat)
    else:
        argp = _signed_angle(node, e_vec, h_hat)
        nu = _signed_angle(e_vec, r_vec, h_hat)

    return KeplerianElements(
        semi_major_axis=a,
        eccentricity=e,
        inclination=inc,
        raan=normalize_deg(math.degrees(raan)),
        arg_perigee=normalize_deg(math.degrees(argp)),
        true_anomaly=normalize_deg(math.degrees(nu)),
    )


def solve_kepler(mean_anomaly: float, e: float, tol: float = 1e-12) -> float:
    """Eccentric anomaly (rad) from mean anomaly (rad) by Newton iteration."""
    if not 0 <= e < 1:
        raise DomainError(f"eccentricity must be in [0, 1), got {e}")
    M = mean_anomaly % (2.0 * math.pi)
    if e == 0:
        return M
    E = M if e < 0.8 else math.pi
    for _ in range(100):
        dE = (E - e * math.sin(E) - M) / (1.0 - e * math.cos(E))
        E -= dE
        if abs(dE) < tol:
            return E
    raise DomainError("Kepler's equation did not converge")


def eccentric_to_true(E: float, e: float) -> float:
    return 2.0 * math.atan2(math.sqrt(1 + e) * math.sin(E / 2), math.sqrt(1 - e) * math.cos(E / 2))


def true_to_mean(nu: float, e: float) -> float:
    """Mean anomaly (rad) from true anomaly (rad)."""
    E = 2.0 * math.atan2(math.sqrt(1 - e) * math.sin(nu / 2), math.sqrt(1 + e) * math.cos(nu / 2))
    return E - e * math.sin(E)


def mean_to_true(M: float, e: float, tol: float = 1e-12) -> float:
    if e == 0:
        return M % (2.0 * math.pi)
    return eccentric_to_true(solve_kepler(M, e, tol), e)


def kepler_propagate(
    el: KeplerianElements, dt: float, body: BodyConstants = EARTH
) -> KeplerianElements:
    """Advance elements by ``dt`` seconds along the unperturbed conic."""
    el.validate()
    a, e = el.semi_major_axis, el.eccentricity
    n = math.sqrt(body.mu / a**3)
    M = true_to_mean(math.radians(el.true_anomaly), e) + n * dt
    nu = mean_to_true(M, e)
    return KeplerianElements(a, e, el.inclination, el.raan, el.arg_perigee,
                             normalize_deg(math.degrees(nu)))
