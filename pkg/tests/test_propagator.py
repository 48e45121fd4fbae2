import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coldgas.astro import (
    EARTH,
    KeplerianElements,
    StateVector,
    Vec3,
    elements_to_state,
    kepler_propagate,
    specific_energy,
)
from coldgas.atmosphere import AtmosphereModel
from coldgas.errors import DomainError, ImpactError, StepSizeError
from coldgas.propagator import (
    ELEMENT_HEADER,
    PERIGEE,
    TRAJECTORY_HEADER,
    ImpulsiveBurn,
    SpacecraftConfig,
    StopCondition,
    acceleration,
    apply_burn,
    propagate,
    read_trajectory_csv,
    write_elements_csv,
    write_trajectory_csv,
)

R1 = EARTH.radius + 668.0
PERIOD_668 = 2 * math.pi * math.sqrt(R1**3 / EARTH.mu)
VEHICLE = SpacecraftConfig(mass=1000.0, reference_area=1.5)


def circular(alt, inc=98.0, raan=30.0, nu=0.0):
    return elements_to_state(KeplerianElements(EARTH.radius + alt, 0.0, inc, raan, 0.0, nu))


def pos_error(a, b):
    return np.linalg.norm(np.subtract(a.state.position, b.state.position))


def test_gravity_magnitude_at_departure():
    a = acceleration(circular(668.0), VEHICLE)
    assert a.norm() == pytest.approx(8.029e-3, abs=1e-6)
    assert a.norm() == pytest.approx(EARTH.mu / R1**2, rel=1e-14)


def test_zero_velocity_acceleration_is_radial():
    sv = StateVector(0.0, Vec3(3000.0, 4000.0, 5000.0), Vec3(0.0, 0.0, 0.0))
    a = acceleration(sv, VEHICLE)
    rhat = np.array(sv.position) / sv.radius
    assert np.allclose(np.array(a) / a.norm(), -rhat, atol=1e-15)


def test_drag_negligible_at_departure():
    sv = circular(668.0)
    atm = AtmosphereModel.default()
    for mass in (1000.0, 1346.663):
        cfg = SpacecraftConfig(mass, 1.5)
        grav = acceleration(sv, cfg)
        full = acceleration(sv, cfg, atm)
        diff = np.linalg.norm(np.subtract(full, grav))
        assert diff / grav.norm() < 1e-9


def test_impact_is_flagged():
    below = StateVector(0.0, Vec3(EARTH.radius - 1.0, 0, 0), Vec3(0, 7.9, 0))
    with pytest.raises(ImpactError):
        acceleration(below, VEHICLE)
    with pytest.raises(ImpactError):
        propagate(below, VEHICLE, stop=StopCondition(max_time=10.0))


def test_one_period_closure():
    sv = circular(668.0)
    r = propagate(sv, VEHICLE, dt=1.0, stop=StopCondition(max_time=PERIOD_668))
    assert PERIOD_668 == pytest.approx(5886.0, abs=1.0)
    assert r.final.t == pytest.approx(PERIOD_668, abs=1e-9)
    assert np.linalg.norm(np.subtract(r.final.state.position, sv.position)) < 1.0
    assert r.max_energy_drift < 1e-9


def test_burn_energy_change_identity():
    sv = circular(668.0)
    for dv in (-0.1159, 0.05, -1.0):
        after = apply_burn(sv, dv)
        v = sv.speed
        assert specific_energy(after) - specific_energy(sv) == pytest.approx(v * dv + 0.5 * dv * dv, rel=1e-9)
        assert after.speed == pytest.approx(v + dv, rel=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(-2.0, 2.0), st.floats(0.0, 359.0), st.floats(0.0, 0.3))
def test_burn_energy_property(dv, nu, e):
    sv = elements_to_state(KeplerianElements(9000.0, e, 40.0, 10.0, 20.0, nu))
    after = apply_burn(sv, dv)
    expected = sv.speed * dv + 0.5 * dv * dv
    assert specific_energy(after) - specific_energy(sv) == pytest.approx(expected, rel=1e-8, abs=1e-12)


def test_rk4_fourth_order_convergence():
    sv = elements_to_state(KeplerianElements(8000.0, 0.1, 30.0, 0.0, 0.0, 0.0))
    t_end = 4000.0
    stop = StopCondition(max_time=t_end)

    def run(dt):
        return propagate(sv, VEHICLE, dt=dt, stop=stop, energy_tol=1.0).final

    ref = run(5.0)
    e40, e20 = pos_error(run(40.0), ref), pos_error(run(20.0), ref)
    ratio = e40 / e20
    assert 12.0 < ratio < 20.0, ratio


def test_energy_and_momentum_conserved_per_orbit():
    sv = circular(668.0)
    r = propagate(sv, VEHICLE, dt=1.0, stop=StopCondition(max_time=3 * PERIOD_668), decimation=100)
    e0 = specific_energy(sv)
    h0 = np.linalg.norm(np.cross(sv.position, sv.velocity))
    for smp in r.samples:
        assert abs(specific_energy(smp.state) - e0) / abs(e0) < 3e-9
        h = np.linalg.norm(np.cross(smp.state.position, smp.state.velocity))
        assert abs(h - h0) / h0 < 3e-9
    assert r.max_energy_drift < 1e-9


def test_matches_closed_form_kepler():
    el = KeplerianElements(7500.0, 0.05, 63.0, 45.0, 90.0, 10.0)
    r = propagate(elements_to_state(el), VEHICLE, dt=1.0, stop=StopCondition(max_time=3000.0),
                  decimation=250)
    for smp in r.samples:
        expected = elements_to_state(kepler_propagate(el, smp.t))
        assert np.linalg.norm(np.subtract(smp.state.position, expected.position)) < 1e-5


def test_coarse_step_is_reported():
    sv = elements_to_state(KeplerianElements(12000.0, 0.4, 30.0, 0.0, 0.0, 0.0))
    with pytest.raises(StepSizeError):
        propagate(sv, VEHICLE, dt=300.0, stop=StopCondition(max_time=40000.0))


def test_hohmann_burns_reach_target():
    sv = circular(668.0)
    burns = [ImpulsiveBurn(-0.115849, time=0.0, label="dv1"),
             ImpulsiveBurn(-0.117634, apsis=PERIGEE, label="dv2")]
    r = propagate(sv, VEHICLE, burns, dt=1.0, stop=StopCondition(max_time=9000.0), decimation=60)
    fired = [e for e in r.events if e["event"] == "burn"]
    assert len(fired) == 2
    assert fired[1]["t_s"] - fired[0]["t_s"] == pytest.approx(2813.0, abs=2.0)
    assert r.final.altitude == pytest.approx(250.0, abs=1.0)
    assert r.final.elements.eccentricity < 1e-4
    for ev in fired:
        assert ev["energy_after_km2s2"] - ev["energy_before_km2s2"] == pytest.approx(
            ev["speed_before_kms"] * ev["delta_v_kms"] + 0.5 * ev["delta_v_kms"] ** 2, rel=1e-9)


def test_time_burn_lands_exactly():
    r = propagate(circular(668.0), VEHICLE, [ImpulsiveBurn(0.01, time=12.34)], dt=1.0,
                  stop=StopCondition(max_time=20.0))
    assert r.events[0]["t_s"] == pytest.approx(12.34, abs=1e-12)


def test_mass_decrements_with_isp():
    cfg = SpacecraftConfig(1346.663, 1.5, isp=80.0)
    r = propagate(circular(668.0), cfg, [ImpulsiveBurn(-0.2335, time=0.0)], dt=1.0,
                  stop=StopCondition(max_time=10.0))
    assert r.final_mass == pytest.approx(1000.0, rel=1e-5)


def test_drag_decay_is_dissipative():
    cfg = SpacecraftConfig(100.0, 20.0)
    r = propagate(circular(250.0, inc=51.6), cfg, atmosphere=AtmosphereModel.default(), dt=10.0,
                  stop=StopCondition(max_time=5 * 86400.0, altitude_floor=100.0))
    assert r.stop_reason == "altitude_floor"
    assert r.final.altitude <= 100.0
    energy = np.array([specific_energy(s.state) for s in r.samples])
    assert np.all(np.diff(energy) <= 0.0)
    sma = np.array([s.elements.semi_major_axis for s in r.samples])
    assert np.all(np.diff(sma) < 0)
    # Per-revolution minimum altitude decays monotonically.
    periods = 2 * math.pi * np.sqrt(sma**3 / EARTH.mu)
    t = np.array([s.t for s in r.samples])
    alt = np.array([s.altitude for s in r.samples])
    rev = np.floor(t / periods[0]).astype(int)
    mins = [alt[rev == k].min() for k in np.unique(rev)]
    assert all(a > b for a, b in zip(mins, mins[1:]))


@pytest.mark.parametrize("kwargs", [dict(dt=0.0), dict(dt=-1.0), dict(decimation=0), dict(stop=None)])
def test_rejects_bad_configuration(kwargs):
    args = dict(dt=1.0, stop=StopCondition(max_time=10.0))
    args.update(kwargs)
    with pytest.raises(DomainError):
        propagate(circular(668.0), VEHICLE, **args)


def test_burn_validation():
    with pytest.raises(DomainError):
        ImpulsiveBurn(0.1)
    with pytest.raises(DomainError):
        ImpulsiveBurn(0.1, time=1.0, apsis=PERIGEE)
    with pytest.raises(DomainError):
        ImpulsiveBurn(float("nan"), time=0.0)
    with pytest.raises(DomainError):
        ImpulsiveBurn(0.1, apsis="node")


def test_csv_round_trip(tmp_path):
    r = propagate(circular(668.0), VEHICLE, dt=1.0, stop=StopCondition(max_time=100.0), decimation=10)
    path = tmp_path / "traj.csv"
    write_trajectory_csv(path, r.samples)
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(TRAJECTORY_HEADER)
    back = read_trajectory_csv(path)
    assert [s.state for s in back] == [s.state for s in r.samples]
    epath = tmp_path / "el.csv"
    write_elements_csv(epath, r.samples)
    assert epath.read_text().splitlines()[0] == ",".join(ELEMENT_HEADER)
