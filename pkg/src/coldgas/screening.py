"""Close-approach screening of a trajectory against a TLE catalogue.

Catalogue objects are propagated on unperturbed two-body conics from their
TLE mean elements. That is adequate for a positional demonstration over a
few hours but drifts from real ephemerides quickly; it is not SGP4.
"""

from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .astro import EARTH, BodyConstants, solve_kepler
from .errors import DomainError
from .tle import TleRecord, mean_motion_rad_s, parse_tle_lenient

log = logging.getLogger(__name__)

CSV_HEADER = ("t_s", "catalog_id", "miss_km", "rel_speed_kms")
REFINE_TOL = 1e-3  # s
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ConjunctionEvent:
    time: float  # s since trajectory start
    miss_distance: float  # km
    catalog_id: int
    relative_speed: float  # km/s


class KeplerOrbit:
    """Closed-form two-body ephemeris built from a TLE record."""

    def __init__(self, rec: TleRecord, body: BodyConstants = EARTH):
        if not 0 <= rec.eccentricity < 1:
            raise DomainError(f"record {rec.norad_id} is not a closed orbit")
        self.norad_id = rec.norad_id
        self.epoch_days = rec.epoch_days
        self.e = rec.eccentricity
        self.n = mean_motion_rad_s(rec.mean_motion)
        self.a = (body.mu / self.n**2) ** (1.0 / 3.0)
        self.m0 = math.radians(rec.mean_anomaly)
        O, w, i = (math.radians(v) for v in (rec.raan, rec.arg_perigee, rec.inclination))
        cO, sO, cw, sw, ci, si = math.cos(O), math.sin(O), math.cos(w), math.sin(w), math.cos(i), math.sin(i)
        self.P = np.array([cO * cw - sO * sw * ci, sO * cw + cO * sw * ci, sw * si])
        self.Q = np.array([-cO * sw - sO * cw * ci, -sO * sw + cO * cw * ci, cw * si])

    def _eccentric_anomaly(self, M):
        e = self.e
        if e == 0:
            return M
        E = np.where(e < 0.8, M, np.pi)
        for _ in range(50):
            dE = (E - e * np.sin(E) - M) / (1.0 - e * np.cos(E))
            E = E - dE
            if np.all(np.abs(dE) < 1e-12):
                break
        return E

    def state(self, dt_s):
        """Position (km) and velocity (km/s) ``dt_s`` seconds after epoch.

        Accepts scalars or arrays; array input returns arrays of shape (n, 3).
        """
        dt_s = np.asarray(dt_s, dtype=float)
        M = np.mod(self.m0 + self.n * dt_s, 2.0 * np.pi)
        if dt_s.ndim == 0:
            E = solve_kepler(float(M), self.e) if self.e > 0 else float(M)
        else:
            E = self._eccentric_anomaly(M)
        a, e = self.a, self.e
        cE, sE = np.cos(E), np.sin(E)
        b = a * math.sqrt(1.0 - e * e)
        x, y = a * (cE - e), b * sE
        Edot = self.n / (1.0 - e * cE)
        vx, vy = -a * sE * Edot, b * cE * Edot
        pos = np.multiply.outer(x, self.P) + np.multiply.outer(y, self.Q)
        vel = np.multiply.outer(vx, self.P) + np.multiply.outer(vy, self.Q)
        return pos, vel


class TrajectoryInterpolator:
    """Cubic Hermite interpolation of sampled position and velocity.

    Repeated sample times (pre/post impulsive burn) are collapsed to the
    later sample so each segment spans a smooth arc.
    """

    def __init__(self, samples):
        if not samples:
            raise DomainError("trajectory is empty")
        t, p, v = [], [], []
        for smp in samples:
            sv = smp.state
            if t and sv.epoch <= t[-1]:
                if sv.epoch < t[-1]:
                    raise DomainError("trajectory samples must be time-ordered")
                t.pop(), p.pop(), v.pop()
            t.append(sv.epoch)
            p.append(tuple(sv.position))
            v.append(tuple(sv.velocity))
        self.t = np.array(t)
        self.p = np.array(p)
        self.v = np.array(v)

    @property
    def t_start(self) -> float:
        return float(self.t[0])

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    def __call__(self, tq):
        tq = np.atleast_1d(np.asarray(tq, dtype=float))
        if self.t.size == 1:
            return np.repeat(self.p, tq.size, 0), np.repeat(self.v, tq.size, 0)
        k = np.clip(np.searchsorted(self.t, tq, side="right") - 1, 0, self.t.size - 2)
        t0, t1 = self.t[k], self.t[k + 1]
        h = (t1 - t0)[:, None]
        s = ((tq - t0) / (t1 - t0))[:, None]
        p0, p1, v0, v1 = self.p[k], self.p[k + 1], self.v[k] * h, self.v[k + 1] * h
        s2, s3 = s * s, s * s * s
        pos = (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * v0 + (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * v1
        dpos = (6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * v0 + (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * v1
        return pos, dpos / h


def _golden_min(f, lo, hi, tol=REFINE_TOL):
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
    candidates = [(f(lo), lo), (fc, c), (fd, d), (f(hi), hi)]
    return min(candidates)[::-1]


def _local_minima(d):
    n = d.size
    if n == 1:
        return [0]
    idx = []
    for i in range(n):
        left = d[i - 1] if i > 0 else np.inf
        right = d[i + 1] if i < n - 1 else np.inf
        if d[i] <= left and d[i] <= right:
            if idx and idx[-1] == i - 1 and d[i] == d[i - 1]:
                continue
            idx.append(i)
    return idx


def closest_approaches(
    trajectory,
    record: TleRecord,
    dt: float,
    start_epoch_days: float,
    body: BodyConstants = EARTH,
    interp: TrajectoryInterpolator | None = None,
) -> list[ConjunctionEvent]:
    """Every refined local minimum of separation against one catalogue object."""
    interp = interp or TrajectoryInterpolator(trajectory)
    orbit = KeplerOrbit(record, body)
    offset = (start_epoch_days - orbit.epoch_days) * 86400.0
    t0, t1 = interp.t_start, interp.t_end
    n_steps = max(1, int(math.ceil((t1 - t0) / dt - 1e-9)))
    grid = np.minimum(t0 + dt * np.arange(n_steps + 1), t1)

    p_traj, _ = interp(grid)
    p_obj, _ = orbit.state(grid + offset)
    dist = np.linalg.norm(p_traj - p_obj, axis=1)

    def sep(t):
        pt, _ = interp(t)
        po, _ = orbit.state(t + offset)
        return float(np.linalg.norm(pt[0] - po))

    events = []
    for i in _local_minima(dist):
        lo, hi = max(t0, grid[i] - 2 * dt), min(t1, grid[i] + 2 * dt)
        t_ref, d_ref = _golden_min(sep, lo, hi) if hi > lo else (grid[i], float(dist[i]))
        if d_ref > dist[i]:
            t_ref, d_ref = float(grid[i]), float(dist[i])
        if events and abs(events[-1].time - t_ref) < REFINE_TOL:
            continue
        pt, vt = interp(t_ref)
        po, vo = orbit.state(t_ref + offset)
        events.append(ConjunctionEvent(float(t_ref), d_ref, record.norad_id,
                                       float(np.linalg.norm(vt[0] - vo))))
    return events


def screen_conjunctions(
    trajectory,
    catalog,
    threshold: float,
    dt: float | None = None,
    start_epoch_days: float | None = None,
    body: BodyConstants = EARTH,
    max_workers: int | None = None,
) -> list[ConjunctionEvent]:
    """Close approaches below ``threshold`` km, sorted by (time, catalog id).

    Args:
        trajectory: time-ordered trajectory samples (``t`` = 0 at
            ``start_epoch_days``).
        catalog: TLE records, or raw TLE text (bad sets are skipped with a
            logged warning).
        threshold: miss-distance threshold in km.
        dt: coarse sampling step in s; defaults to the median sample spacing.
        start_epoch_days: trajectory start as days since 2000-01-01 UTC;
            defaults to the earliest catalogue epoch.
        max_workers: screen catalogue objects on this many threads.
    """
    return screen_all(trajectory, catalog, dt, start_epoch_days, body, max_workers,
                      threshold=threshold)[0]


def screen_all(
    trajectory,
    catalog,
    dt=None,
    start_epoch_days=None,
    body: BodyConstants = EARTH,
    max_workers=None,
    threshold: float = math.inf,
):
    """Return ``(events_below_threshold, global_minimum_or_None, skipped_errors)``."""
    if not threshold > 0:
        raise DomainError("threshold must be positive")
    skipped = []
    if isinstance(catalog, str):
        catalog, skipped = parse_tle_lenient(catalog)
        for err in skipped:
            log.warning("skipping TLE set: %s", err)
    catalog = list(catalog)
    interp = TrajectoryInterpolator(trajectory)
    if dt is None:
        steps = np.diff(interp.t)
        dt = float(np.median(steps)) if steps.size else 1.0
    if not dt > 0:
        raise DomainError("screening step must be positive")
    if start_epoch_days is None:
        if not catalog:
            return [], None, skipped
        start_epoch_days = min(r.epoch_days for r in catalog)

    def one(rec):
        try:
            return closest_approaches(trajectory, rec, dt, start_epoch_days, body, interp)
        except DomainError as exc:
            log.warning("skipping catalogue object %s: %s", rec.norad_id, exc)
            return []

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            per_object = list(pool.map(one, catalog))
    else:
        per_object = [one(rec) for rec in catalog]

    minima = [ev for evs in per_object for ev in evs]
    key = lambda ev: (ev.time, ev.catalog_id)  # noqa: E731
    events = sorted((ev for ev in minima if ev.miss_distance < threshold), key=key)
    closest = min(minima, key=lambda ev: (ev.miss_distance, ev.time, ev.catalog_id), default=None)
    return events, closest, skipped


def write_events_csv(path, events, closest: ConjunctionEvent | None = None) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for ev in events:
            writer.writerow([repr(ev.time), ev.catalog_id, repr(ev.miss_distance), repr(ev.relative_speed)])
        if closest is None:
            fh.write("# global minimum: none\n")
        else:
            fh.write(
                f"# global minimum: catalog_id={closest.catalog_id} t_s={closest.time!r} "
                f"miss_km={closest.miss_distance!r}\n"
            )
