"""Fixed-step RK4 two-body propagation with impulsive burns and drag."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

from .astro import (
    EARTH,
    EARTH_ROTATION_RATE,
    G0,
    BodyConstants,
    KeplerianElements,
    StateVector,
    Vec3,
    orbital_period,
    specific_energy,
    state_to_elements,
)
from .atmosphere import AtmosphereModel
from .errors import DomainError, ImpactError, StepSizeError

PERIGEE = "perigee"
APOGEE = "apogee"

TRAJECTORY_HEADER = (
    "t_s", "x_km", "y_km", "z_km", "vx_kms", "vy_kms", "vz_kms",
    "a_km", "e", "i_deg", "raan_deg", "argp_deg", "nu_deg", "alt_km",
)
ELEMENT_HEADER = ("t_s", "a_km", "e", "i_deg", "raan_deg", "argp_deg", "nu_deg", "alt_km")

APSIS_TIME_TOL = 1e-3  # s


@dataclass(frozen=True)
class SpacecraftConfig:
    mass: float  # kg
    reference_area: float  # m^2
    drag_coefficient: float = 2.2
    isp: float | None = None  # s; when set, burns deplete mass

    def __post_init__(self):
        if not (self.mass > 0 and self.reference_area > 0 and self.drag_coefficient > 0):
            raise DomainError("mass, area and drag coefficient must be positive")
        if self.isp is not None and not self.isp > 0:
            raise DomainError("isp must be positive")

    @property
    def ballistic_coefficient(self) -> float:
        """m / (Cd A) in kg/m^2."""
        return self.mass / (self.drag_coefficient * self.reference_area)


@dataclass(frozen=True)
class ImpulsiveBurn:
    """Instantaneous velocity change along the local velocity.

    Exactly one of ``time`` (s) or ``apsis`` (``"perigee"``/``"apogee"``) sets
    the trigger. Apsis triggers fire at the first such passage after every
    earlier burn in the list has fired.
    """

    delta_v: float  # km/s, negative is retrograde
    time: float | None = None
    apsis: str | None = None
    label: str = ""

    def __post_init__(self):
        if not math.isfinite(self.delta_v):
            raise DomainError("burn delta-v must be finite")
        if (self.time is None) == (self.apsis is None):
            raise DomainError("a burn needs exactly one of time or apsis trigger")
        if self.apsis is not None and self.apsis not in (PERIGEE, APOGEE):
            raise DomainError(f"unknown apsis trigger {self.apsis!r}")


@dataclass(frozen=True)
class StopCondition:
    max_time: float | None = None  # s of elapsed time
    altitude_floor: float | None = None  # km

    def __post_init__(self):
        if self.max_time is None and self.altitude_floor is None:
            raise DomainError("stop condition needs a time limit or an altitude floor")
        if self.max_time is not None and not self.max_time > 0:
            raise DomainError("max_time must be positive")


@dataclass(frozen=True)
class TrajectorySample:
    state: StateVector
    elements: KeplerianElements
    altitude: float  # km

    @property
    def t(self) -> float:
        return self.state.epoch


@dataclass
class PropagationResult:
    samples: list[TrajectorySample]
    events: list[dict] = field(default_factory=list)
    stop_reason: str = ""
    final_mass: float = 0.0
    max_energy_drift: float = 0.0  # per orbit, drag-free arcs only

    @property
    def final(self) -> TrajectorySample:
        return self.samples[-1]


def _make_deriv(mu, drag_k, atmosphere, body_radius):
    """Build f(y) for y = (x, y, z, vx, vy, vz); drag_k = Cd A / m in m^2/kg."""
    w = EARTH_ROTATION_RATE
    density = atmosphere.density if atmosphere is not None else None

    def deriv(s):
        x, y, z, vx, vy, vz = s
        r2 = x * x + y * y + z * z
        r = math.sqrt(r2)
        g = -mu / (r2 * r)
        ax, ay, az = g * x, g * y, g * z
        if density is not None:
            rho = density(r - body_radius)
            # Velocity relative to the co-rotating atmosphere.
            ux, uy, uz = vx + w * y, vy - w * x, vz
            u = math.sqrt(ux * ux + uy * uy + uz * uz)
            # rho [kg/m^3] * (km/s)^2 * m^2/kg -> km/s^2 needs a factor 1e3.
            k = -0.5e3 * rho * u * drag_k
            ax += k * ux
            ay += k * uy
            az += k * uz
        return (vx, vy, vz, ax, ay, az)

    return deriv


def _rk4(deriv, s, h):
    k1 = deriv(s)
    h2 = 0.5 * h
    k2 = deriv(tuple(s[i] + h2 * k1[i] for i in range(6)))
    k3 = deriv(tuple(s[i] + h2 * k2[i] for i in range(6)))
    k4 = deriv(tuple(s[i] + h * k3[i] for i in range(6)))
    h6 = h / 6.0
    return tuple(s[i] + h6 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) for i in range(6))


def _radial_velocity(s):
    return s[0] * s[3] + s[1] * s[4] + s[2] * s[5]


def _energy(s, mu):
    r = math.sqrt(s[0] ** 2 + s[1] ** 2 + s[2] ** 2)
    return 0.5 * (s[3] ** 2 + s[4] ** 2 + s[5] ** 2) - mu / r


def acceleration(
    state: StateVector,
    config: SpacecraftConfig,
    atmosphere: AtmosphereModel | None = None,
    body: BodyConstants = EARTH,
) -> Vec3:
    """Two-body gravity plus optional drag, in km/s^2."""
    if state.radius <= body.radius:
        raise ImpactError(f"state is {state.altitude(body):.6g} km relative to the surface")
    drag_k = config.drag_coefficient * config.reference_area / config.mass
    deriv = _make_deriv(body.mu, drag_k, atmosphere, body.radius)
    return Vec3(*deriv((*state.position, *state.velocity))[3:])


def make_sample(t: float, s, body: BodyConstants = EARTH) -> TrajectorySample:
    sv = StateVector(t, Vec3(s[0], s[1], s[2]), Vec3(s[3], s[4], s[5]))
    return TrajectorySample(sv, state_to_elements(sv, body), sv.radius - body.radius)


def apply_burn(state: StateVector, delta_v: float) -> StateVector:
    """Add ``delta_v`` km/s along the current velocity direction."""
    v = state.velocity
    speed = v.norm()
    if speed == 0:
        raise DomainError("cannot orient a velocity-direction burn at zero speed")
    k = (speed + delta_v) / speed
    return StateVector(state.epoch, state.position, v.scale(k))


def propagate(
    initial: StateVector,
    config: SpacecraftConfig,
    burns=(),
    atmosphere: AtmosphereModel | None = None,
    dt: float = 1.0,
    stop: StopCondition | None = None,
    body: BodyConstants = EARTH,
    decimation: int = 1,
    energy_tol: float = 1e-6,
) -> PropagationResult:
    """Integrate a trajectory with fixed-step RK4.

    Burns are applied in list order. Time-triggered burns land exactly on
    their epoch by shortening the preceding step; apsis-triggered burns are
    located by the sign change of radial velocity and bisected to
    ``APSIS_TIME_TOL`` seconds. Samples are kept every ``decimation`` steps
    plus at every burn and at the final state.

    With drag disabled the specific-energy drift over each orbital period is
    checked against ``energy_tol`` and :class:`StepSizeError` is raised when
    it is exceeded.
    """
    if not dt > 0:
        raise DomainError("time step must be positive")
    if decimation < 1:
        raise DomainError("decimation must be >= 1")
    if stop is None:
        raise DomainError("a stop condition is required")
    if initial.radius <= body.radius:
        raise ImpactError("initial state is below the surface")

    mu = body.mu
    mass = config.mass
    pending = list(burns)

    def deriv_for(m):
        return _make_deriv(mu, config.drag_coefficient * config.reference_area / m, atmosphere, body.radius)

    deriv = deriv_for(mass)
    t0 = initial.epoch
    t = t0
    s = (*initial.position, *initial.velocity)
    t_end = None if stop.max_time is None else t0 + stop.max_time
    floor = stop.altitude_floor

    result = PropagationResult(samples=[make_sample(t, s, body)])
    events = result.events

    def check_energy_ref():
        return t, _energy(s, mu), _period_or_none(s)

    def _period_or_none(st):
        eps = _energy(st, mu)
        return orbital_period(-mu / (2 * eps), body) if eps < 0 else None

    ref_t, ref_e, ref_period = check_energy_ref()

    def fire(burn):
        nonlocal s, mass, deriv, ref_t, ref_e, ref_period
        sv = StateVector(t, Vec3(*s[:3]), Vec3(*s[3:]))
        e_before = specific_energy(sv, body=body)
        sv_after = apply_burn(sv, burn.delta_v)
        s = (*sv_after.position, *sv_after.velocity)
        mass_before = mass
        if config.isp is not None:
            mass = mass_before * math.exp(-abs(burn.delta_v) * 1e3 / (G0 * config.isp))
            deriv = deriv_for(mass)
        events.append({
            "event": "burn",
            "label": burn.label,
            "t_s": t,
            "delta_v_kms": burn.delta_v,
            "speed_before_kms": sv.speed,
            "energy_before_km2s2": e_before,
            "energy_after_km2s2": specific_energy(sv_after, body=body),
            "mass_before_kg": mass_before,
            "mass_after_kg": mass,
            "propellant_kg": mass_before - mass,
        })
        result.samples.append(make_sample(t, s, body))
        ref_t, ref_e, ref_period = check_energy_ref()

    step = 0
    while True:
        while pending and pending[0].time is not None and pending[0].time <= t + 1e-9:
            fire(pending.pop(0))

        h = dt
        nxt = pending[0] if pending else None
        if nxt is not None and nxt.time is not None and t + h > nxt.time:
            h = nxt.time - t
        if t_end is not None and t + h > t_end:
            h = t_end - t
        if h <= 1e-12:
            result.stop_reason = "max_time"
            break

        s_new = _rk4(deriv, s, h)

        if nxt is not None and nxt.apsis is not None:
            rd0, rd1 = _radial_velocity(s), _radial_velocity(s_new)
            crossed = (rd0 < 0 <= rd1) if nxt.apsis == PERIGEE else (rd0 > 0 >= rd1)
            if crossed:
                lo, hi = 0.0, h
                while hi - lo > APSIS_TIME_TOL:
                    mid = 0.5 * (lo + hi)
                    rd = _radial_velocity(_rk4(deriv, s, mid))
                    if (rd < 0) if nxt.apsis == PERIGEE else (rd > 0):
                        lo = mid
                    else:
                        hi = mid
                tau = 0.5 * (lo + hi)
                s = _rk4(deriv, s, tau)
                t += tau
                fire(pending.pop(0))
                continue

        s = s_new
        t += h
        step += 1

        r = math.sqrt(s[0] ** 2 + s[1] ** 2 + s[2] ** 2)
        alt = r - body.radius
        if alt <= 0:
            result.stop_reason = "impact"
            events.append({"event": "impact", "t_s": t})
            break
        if floor is not None and alt <= floor:
            result.stop_reason = "altitude_floor"
            events.append({"event": "altitude_floor", "t_s": t, "alt_km": alt})
            break

        if atmosphere is None and ref_period is not None and t - ref_t >= ref_period:
            e_now = _energy(s, mu)
            drift = abs(e_now - ref_e) / abs(ref_e) * ref_period / (t - ref_t)
            result.max_energy_drift = max(result.max_energy_drift, drift)
            if drift > energy_tol:
                raise StepSizeError(
                    f"energy drift {drift:.3g} per orbit exceeds {energy_tol:.3g}; reduce dt={dt}"
                )
            ref_t, ref_e, ref_period = check_energy_ref()

        if t_end is not None and t >= t_end - 1e-12:
            result.stop_reason = "max_time"
            break
        if step % decimation == 0:
            result.samples.append(make_sample(t, s, body))

    if result.samples[-1].t != t:
        result.samples.append(make_sample(t, s, body))
    result.final_mass = mass
    return result


def sample_row(sample: TrajectorySample) -> list[float]:
    sv, el = sample.state, sample.elements
    return [
        sv.epoch, *sv.position, *sv.velocity,
        el.semi_major_axis, el.eccentricity, el.inclination, el.raan,
        el.arg_perigee, el.true_anomaly, sample.altitude,
    ]


def write_trajectory_csv(path, samples) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRAJECTORY_HEADER)
        for smp in samples:
            writer.writerow([repr(float(v)) for v in sample_row(smp)])


def write_elements_csv(path, samples) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(ELEMENT_HEADER)
        for smp in samples:
            el = smp.elements
            writer.writerow([repr(float(v)) for v in (
                smp.t, el.semi_major_axis, el.eccentricity, el.inclination,
                el.raan, el.arg_perigee, el.true_anomaly, smp.altitude,
            )])


def read_trajectory_csv(path, body: BodyConstants = EARTH) -> list[TrajectorySample]:
    """Load a trajectory CSV written by :func:`write_trajectory_csv`."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(TRAJECTORY_HEADER[:7]) - set(reader.fieldnames or ())
        if missing:
            raise DomainError(f"trajectory file lacks columns {sorted(missing)}")
        for row in reader:
            s = [float(row[k]) for k in TRAJECTORY_HEADER[1:7]]
            out.append(make_sample(float(row["t_s"]), s, body))
    if not out:
        raise DomainError("trajectory file has no samples")
    return out
