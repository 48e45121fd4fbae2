import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _scenarios import oracle_checksum, random_record
from coldgas.astro import EARTH, KeplerianElements, solve_kepler
from coldgas.errors import DomainError, TleError
from coldgas.tle import (
    checksum_of,
    elements_to_tle,
    format_catalog,
    format_tle,
    line_checksum,
    parse_epoch,
    parse_lines,
    parse_tle,
    parse_tle_lenient,
    tle_to_elements,
)

ISS_1 = "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927"
ISS_2 = "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537"

LINE_CHARS = "0123456789 -+.ABCUXYZ"


def perturb_last(line):
    return line[:-1] + str((int(line[-1]) + 1) % 10)


def test_published_line_parses():
    rec = parse_lines(ISS_1, ISS_2)
    assert rec.norad_id == 25544
    assert rec.classification == "U"
    assert rec.int_designator == "98067A"
    assert rec.epoch_year == 2008
    assert rec.epoch_day == 264.51782528
    assert rec.ndot == -0.00002182
    assert rec.nddot == 0.0
    assert rec.bstar == pytest.approx(-0.11606e-4, rel=1e-15)
    assert rec.element_set_no == 292
    assert rec.inclination == 51.6416
    assert rec.raan == 247.4627
    assert rec.eccentricity == 0.0006703
    assert rec.arg_perigee == 130.5360
    assert rec.mean_anomaly == 325.0288
    assert rec.mean_motion == 15.72125391
    assert rec.rev_number == 56353


def test_published_line_reserializes():
    # Zero is written with a '+' exponent; older catalogues print '00000-0'.
    l1, l2 = format_tle(parse_lines(ISS_1, ISS_2))
    assert l2 == ISS_2
    assert l1[:68] == ISS_1[:68].replace("00000-0", "00000+0")
    assert parse_lines(l1, l2) == parse_lines(ISS_1, ISS_2)


def test_zero_line_checksum():
    assert checksum_of("0" * 20 + " " * 48) == 0
    assert checksum_of("") == 0


@settings(max_examples=1000, deadline=None)
@given(st.text(alphabet=LINE_CHARS, min_size=68, max_size=68), st.integers(0, 9))
def test_checksum_properties(body, d):
    assert checksum_of(body) == oracle_checksum(body)
    assert checksum_of(body + str(d)) == (checksum_of(body) + d) % 10
    assert line_checksum(body + "7") == checksum_of(body)


def test_checksum_perturbation_rejected_over_random_lines():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        l1, l2 = format_tle(random_record(rng))
        for bad1, bad2, which in ((perturb_last(l1), l2, 1), (l1, perturb_last(l2), 2)):
            with pytest.raises(TleError) as info:
                parse_lines(bad1, bad2, lineno=10)
            assert info.value.columns == (69, 69)
            assert info.value.line == 9 + which


@settings(max_examples=500, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_round_trip_is_identity(seed):
    rec = random_record(np.random.default_rng(seed))
    l1, l2 = format_tle(rec)
    assert len(l1) == len(l2) == 69
    back = parse_lines(l1, l2)
    assert back == rec
    assert format_tle(back) == (l1, l2)


def test_three_line_catalog_round_trip():
    rng = np.random.default_rng(1)
    recs = []
    for k in range(5):
        r = random_record(rng)
        recs.append(type(r)(**{**r.__dict__, "name": f"OBJECT {k}"}))
    assert parse_tle(format_catalog(recs)) == recs
    text = "\n".join("0 " + ln if ln.startswith("OBJECT") else ln for ln in format_catalog(recs).splitlines())
    assert [r.name for r in parse_tle(text)] == [r.name for r in recs]


@pytest.mark.parametrize(
    "mutate, columns",
    [
        (lambda l1, l2: (l1[:-2], l2), None),  # short line
        (lambda l1, l2: (l1, l2[:8] + "5X.6416" + l2[15:]), (9, 16)),  # bad inclination
    ],
)
def test_errors_carry_location(mutate, columns):
    l1, l2 = mutate(ISS_1, ISS_2)
    if columns is not None:
        body = l2[:68]
        l2 = body + str(checksum_of(body))
    with pytest.raises(TleError) as info:
        parse_lines(l1, l2, lineno=3)
    assert info.value.line in (3, 4)
    if columns is not None:
        assert info.value.columns == columns
    assert "line" in str(info.value)


def test_lenient_parse_skips_bad_sets():
    text = "\n".join([ISS_1, ISS_2, perturb_last(ISS_1), ISS_2, ISS_1, ISS_2]) + "\n"
    recs, errs = parse_tle_lenient(text)
    assert len(recs) == 2 and len(errs) == 1
    assert errs[0].line == 3
    with pytest.raises(TleError):
        parse_tle(text)


def test_mean_motion_to_semi_major_axis():
    rec = parse_lines(ISS_1, ISS_2)
    rec = type(rec)(**{**rec.__dict__, "mean_motion": 15.5, "eccentricity": 0.0})
    el = tle_to_elements(rec)
    assert el.semi_major_axis == pytest.approx(6794.9, abs=0.5)
    n = math.sqrt(EARTH.mu / el.semi_major_axis**3)
    assert n * 86400 / (2 * math.pi) == pytest.approx(15.5, rel=1e-12)
    assert el.true_anomaly == rec.mean_anomaly


def test_kepler_symmetry_point():
    assert solve_kepler(math.pi, 0.7) == math.pi


def test_elements_to_tle_round_trip():
    el = KeplerianElements(7046.14, 0.001, 98.0, 30.0, 45.0, 120.0)
    rec = elements_to_tle(el, 40001, 2024, 100.0)
    back = tle_to_elements(parse_lines(*format_tle(rec)))
    assert back.semi_major_axis == pytest.approx(el.semi_major_axis, abs=1e-4)
    assert back.true_anomaly == pytest.approx(el.true_anomaly, abs=1e-3)


def test_epoch_parsing():
    assert parse_epoch("00001.0") == 0.0
    assert parse_epoch("24100.5") == pytest.approx(8865.5)
    assert parse_epoch("57001.0") < 0
    with pytest.raises(DomainError):
        parse_epoch("abc")


def test_format_rejects_overflow():
    rec = parse_lines(ISS_1, ISS_2)
    with pytest.raises(DomainError):
        format_tle(type(rec)(**{**rec.__dict__, "norad_id": 100000}))
    with pytest.raises(DomainError):
        format_tle(type(rec)(**{**rec.__dict__, "bstar": 1e20}))
