"""Shared scenario builders and independent oracles for the test modules."""

import math

import numpy as np

from coldgas.astro import EARTH, KeplerianElements, elements_to_state
from coldgas.propagator import ImpulsiveBurn, SpacecraftConfig, StopCondition, propagate
from coldgas.tle import TleRecord, elements_to_tle, epoch_to_days

EPOCH_YEAR, EPOCH_DAY = 2024, 100.0
START_EPOCH = epoch_to_days(EPOCH_YEAR, EPOCH_DAY)
ALT = 668.0
INC, RAAN = 98.0, 30.0
TRAJ_A = EARTH.radius + ALT


def oracle_checksum(text):
    return (sum(int(c) for c in text if c.isdigit()) + text.count("-")) % 10


def random_record(rng) -> TleRecord:
    """Record whose float fields are exactly representable in TLE columns."""

    def implied(zero_prob=0.2):
        if rng.random() < zero_prob:
            return 0.0
        sign = "-" if rng.random() < 0.5 else ""
        return float(f"{sign}0.{rng.integers(10000, 100000):05d}e{rng.integers(-9, 10)}")

    return TleRecord(
        norad_id=int(rng.integers(0, 100000)),
        classification=str(rng.choice(["U", "C", "S"])),
        int_designator=f"{rng.integers(0, 100):02d}{rng.integers(1, 1000):03d}"
                       f"{''.join(rng.choice(list('ABCDEFGH'), rng.integers(1, 4)))}",
        epoch_year=int(rng.integers(1957, 2057)),
        epoch_day=int(rng.integers(100000000, 36700000000)) / 1e8,
        ndot=int(rng.integers(-99999999, 100000000)) / 1e8,
        nddot=implied(0.7),
        bstar=implied(),
        ephemeris_type=0,
        element_set_no=int(rng.integers(0, 10000)),
        inclination=int(rng.integers(0, 1800001)) / 1e4,
        raan=int(rng.integers(0, 3600000)) / 1e4,
        eccentricity=int(rng.integers(0, 10000000)) / 1e7,
        arg_perigee=int(rng.integers(0, 3600000)) / 1e4,
        mean_anomaly=int(rng.integers(0, 3600000)) / 1e4,
        mean_motion=int(rng.integers(100000000, 1799999999)) / 1e8,
        rev_number=int(rng.integers(0, 100000)),
    )


def circular_positions(a, inc_deg, raan_deg, u0_deg, t):
    """Closed-form positions (n, 3) on a circular orbit; u is argument of latitude."""
    n = math.sqrt(EARTH.mu / a**3)
    u = math.radians(u0_deg) + n * np.asarray(t, dtype=float)
    O, i = math.radians(raan_deg), math.radians(inc_deg)
    node = np.array([math.cos(O), math.sin(O), 0.0])
    perp = np.array([-math.sin(O) * math.cos(i), math.cos(O) * math.cos(i), math.sin(i)])
    return a * (np.outer(np.cos(u), node) + np.outer(np.sin(u), perp))


def reference_trajectory(duration=3600.0, dt=1.0, decimation=10, burns=()):
    sv = elements_to_state(KeplerianElements(TRAJ_A, 0.0, INC, RAAN, 0.0, 0.0))
    cfg = SpacecraftConfig(1000.0, 1.5)
    stop = StopCondition(max_time=duration)
    return propagate(sv, cfg, burns, dt=dt, stop=stop, decimation=decimation).samples


def departing_trajectory(duration=3600.0):
    """Circular 668 km start with the retrograde transfer burn at t = 0."""
    return reference_trajectory(duration, burns=[ImpulsiveBurn(-0.115849, time=0.0)])


def catalog_object(norad_id, d_alt=0.0, d_inc=0.0, u0=0.0):
    el = KeplerianElements(TRAJ_A + d_alt, 0.0, INC + d_inc, RAAN, 0.0, u0)
    return elements_to_tle(el, norad_id, EPOCH_YEAR, EPOCH_DAY)


def dense_min_separation(d_alt, d_inc, u0, duration, step=0.01, t_lo=0.0):
    t = np.arange(t_lo, duration + step / 2, step)
    p1 = circular_positions(TRAJ_A, INC, RAAN, 0.0, t)
    p2 = circular_positions(TRAJ_A + d_alt, INC + d_inc, RAAN, u0, t)
    d = np.linalg.norm(p1 - p2, axis=1)
    k = int(np.argmin(d))
    return float(t[k]), float(d[k])
