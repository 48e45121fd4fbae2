import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from coldgas.astro import EARTH, G0, orbital_period
from coldgas.errors import DomainError
from coldgas.transfer import plan_hohmann, propellant_mass


@pytest.fixture(scope="module")
def plan():
    return plan_hohmann(668.0, 250.0)


def test_table_rows(plan):
    assert plan.r1 == pytest.approx(7046.14)
    assert plan.r2 == pytest.approx(6628.14)
    assert plan.a_transfer == pytest.approx(6837.14)
    assert plan.v_t1 == pytest.approx(7.405, abs=1e-3)
    assert plan.v_orbit1 == pytest.approx(7.521, abs=1e-3)
    assert 7.871 <= plan.v_t2 <= 7.874
    assert plan.v_orbit2 == pytest.approx(7.754, abs=1e-3)
    assert plan.tof == pytest.approx(2813.15, abs=0.01)


def test_burns_are_retrograde_and_self_consistent(plan):
    assert plan.dv1 < 0 and plan.dv2 < 0
    assert abs(plan.dv1) == pytest.approx(0.1159, abs=1e-4)
    assert abs(plan.dv2) == pytest.approx(0.1176, abs=1e-4)
    assert plan.dv_total == pytest.approx(-0.2335, abs=1e-4)
    assert abs(plan.dv_total) == pytest.approx(abs(plan.dv1) + abs(plan.dv2), rel=1e-14)


def test_tof_is_half_transfer_period(plan):
    assert plan.tof == pytest.approx(0.5 * orbital_period(plan.a_transfer), rel=1e-14)


def test_degenerate_transfer():
    with pytest.raises(DomainError):
        plan_hohmann(400.0, 400.0)
    assert abs(plan_hohmann(400.0, 400.0 + 1e-6).dv_total) < 1e-8


@pytest.mark.parametrize("alts", [(0.0, 250.0), (668.0, -1.0)])
def test_rejects_non_positive_altitudes(alts):
    with pytest.raises(DomainError):
        plan_hohmann(*alts)


@settings(max_examples=100, deadline=None)
@given(st.floats(200.0, 2000.0), st.floats(200.0, 2000.0))
def test_direction_symmetry(a, b):
    if abs(a - b) < 1e-3:
        return
    down, up = plan_hohmann(a, b), plan_hohmann(b, a)
    assert abs(down.dv_total) == pytest.approx(abs(up.dv_total), rel=1e-12)
    assert down.tof == pytest.approx(up.tof, rel=1e-14)


@pytest.mark.parametrize("fixed", [200.0, 668.0, 2000.0])
def test_dv_monotone_in_altitude_gap(fixed):
    others = [h for h in range(200, 2001, 25) if h != fixed]
    above = sorted(h for h in others if h > fixed)
    below = sorted((h for h in others if h < fixed), reverse=True)
    for seq in (above, below):
        dvs = [abs(plan_hohmann(fixed, h).dv_total) for h in seq]
        assert all(x < y for x, y in zip(dvs, dvs[1:]))


def _integrated_initial_mass(dv, isp, m_final):
    # Burn backwards from the final mass: dm/d(dv) = m / u_eq.
    u = G0 * isp
    sol = solve_ivp(lambda v, m: m / u, (0.0, dv), [m_final], rtol=1e-12, atol=1e-12)
    return sol.y[0, -1]


def test_propellant_budget_paper_case():
    b = propellant_mass(233.5, 80.0, 1000.0)
    assert b.u_eq == pytest.approx(784.532, abs=1e-3)
    assert b.m_propellant == pytest.approx(346.7, abs=0.1)
    oracle = _integrated_initial_mass(233.5, 80.0, 1000.0) - 1000.0
    assert b.m_propellant == pytest.approx(oracle, rel=1e-8)
    assert b.m_initial == pytest.approx(b.m_final * math.exp(b.dv / b.u_eq), rel=1e-14)


def test_propellant_trivial_cases():
    assert propellant_mass(0.0, 80.0, 500.0).m_propellant == 0.0
    u = G0 * 80.0
    assert propellant_mass(u * math.log(2), 80.0, 123.0).m_propellant == pytest.approx(123.0, rel=1e-14)


@pytest.mark.parametrize("args", [(100.0, 0.0, 10.0), (100.0, 80.0, 0.0), (-1.0, 80.0, 10.0)])
def test_propellant_rejects_bad_inputs(args):
    with pytest.raises(DomainError):
        propellant_mass(*args)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 3000.0), st.floats(1.0, 500.0), st.floats(1.0, 1e5), st.floats(1.0, 100.0))
def test_propellant_monotone_and_linear(dv, ddv, m, k):
    a = propellant_mass(dv, 80.0, m).m_propellant
    b = propellant_mass(dv + ddv, 80.0, m).m_propellant
    assert b > a
    assert propellant_mass(dv, 80.0, k * m).m_propellant == pytest.approx(k * a, rel=1e-12, abs=1e-12)
