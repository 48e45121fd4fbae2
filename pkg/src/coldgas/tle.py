"""Two-line element set parsing, serialization and conversion to elements.

Column numbers in this module are 1-based and inclusive, matching the
published TLE format description.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date

from .astro import EARTH, BodyConstants, KeplerianElements, mean_to_true, normalize_deg, true_to_mean
from .errors import DomainError, TleError

LINE_LENGTH = 69
SECONDS_PER_DAY = 86400.0
_J2000_ORDINAL = date(2000, 1, 1).toordinal()


def checksum_of(text: str) -> int:
    """Mod-10 sum of the digits in ``text``, counting each '-' as 1."""
    total = 0
    for ch in text:
        if ch.isdigit():
            total += ord(ch) - 48
        elif ch == "-":
            total += 1
    return total % 10


def line_checksum(line: str) -> int:
    """Checksum over the first 68 columns of a TLE line."""
    return checksum_of(line[:68])


@dataclass(frozen=True)
class TleRecord:
    norad_id: int
    classification: str
    int_designator: str
    epoch_year: int  # four-digit
    epoch_day: float  # fractional day of year, 1.0 = Jan 1 00:00
    ndot: float  # rev/day^2, already halved as printed
    nddot: float  # rev/day^3, already divided by 6 as printed
    bstar: float  # 1/earth radii
    ephemeris_type: int
    element_set_no: int
    inclination: float  # deg
    raan: float  # deg
    eccentricity: float
    arg_perigee: float  # deg
    mean_anomaly: float  # deg
    mean_motion: float  # rev/day
    rev_number: int
    name: str | None = None

    @property
    def epoch_days(self) -> float:
        """Epoch as days since 2000-01-01 00:00 UTC."""
        return epoch_to_days(self.epoch_year, self.epoch_day)

    @property
    def checksums(self) -> tuple[int, int]:
        l1, l2 = format_tle(self)
        return int(l1[-1]), int(l2[-1])


def _field(line, lineno, start, end, conv, what):
    text = line[start - 1:end]
    try:
        return conv(text)
    except ValueError:
        raise TleError(f"invalid {what} {text!r}", lineno, (start, end)) from None


def _int(text):
    text = text.strip()
    return int(text) if text else 0


def _implied_exp(text: str) -> float:
    """Decode ``SMMMMMSE`` fields such as ' 12345-4' -> 0.12345e-4."""
    if len(text) != 8 or text[0] not in " +-" or text[6] not in "+-":
        raise ValueError(text)
    digits, exp = text[1:6].replace(" ", "0"), text[6:8]
    if not (digits.isdigit() and exp[1].isdigit()):
        raise ValueError(text)
    return float(f"{text[0].strip()}0.{digits}e{exp}")


def _implied_decimal(text: str) -> float:
    digits = text.strip()
    if not digits.isdigit():
        raise ValueError(text)
    return float("0." + digits)


def expand_year(yy: int) -> int:
    """Four-digit year from the two-digit TLE convention (57-99 -> 19xx)."""
    return 1900 + yy if yy >= 57 else 2000 + yy


def epoch_to_days(year: int, day_of_year: float) -> float:
    """Days since 2000-01-01 00:00 UTC; ``day_of_year`` is 1.0 at Jan 1 00:00."""
    return date(year, 1, 1).toordinal() - _J2000_ORDINAL + day_of_year - 1.0


def parse_epoch(text: str) -> float:
    """TLE-style ``YYDDD.DDDDDDDD`` epoch to days since 2000-01-01."""
    text = text.strip()
    if len(text) < 5 or not text[:5].isdigit():
        raise DomainError(f"epoch must look like YYDDD.DDDDDDDD, got {text!r}")
    return epoch_to_days(expand_year(int(text[:2])), float(text[2:]))


def _check_line(line, lineno, expected):
    if len(line) != LINE_LENGTH:
        raise TleError(f"line must be {LINE_LENGTH} characters, got {len(line)}", lineno, (1, len(line)))
    if line[0] != expected or line[1] != " ":
        raise TleError(f"expected line number {expected}", lineno, (1, 2))
    if not line[68].isdigit():
        raise TleError("checksum column is not a digit", lineno, (69, 69))
    want = line_checksum(line)
    if int(line[68]) != want:
        raise TleError(f"checksum mismatch: found {line[68]}, computed {want}", lineno, (69, 69))


def parse_lines(line1: str, line2: str, name: str | None = None, lineno: int = 1) -> TleRecord:
    """Decode one element set; ``lineno`` is the file line of ``line1``."""
    line1, line2 = line1.rstrip(), line2.rstrip()
    n2 = lineno + 1
    _check_line(line1, lineno, "1")
    _check_line(line2, n2, "2")

    norad = _field(line1, lineno, 3, 7, int, "satellite number")
    norad2 = _field(line2, n2, 3, 7, int, "satellite number")
    if norad != norad2:
        raise TleError(f"satellite numbers differ between lines ({norad} vs {norad2})", n2, (3, 7))
    yy = _field(line1, lineno, 19, 20, int, "epoch year")
    e = _field(line2, n2, 27, 33, _implied_decimal, "eccentricity")
    n = _field(line2, n2, 53, 63, float, "mean motion")
    if not n > 0:
        raise TleError("mean motion must be positive", n2, (53, 63))

    return TleRecord(
        norad_id=norad,
        classification=line1[7],
        int_designator=line1[9:17].strip(),
        epoch_year=expand_year(yy),
        epoch_day=_field(line1, lineno, 21, 32, float, "epoch day"),
        ndot=_field(line1, lineno, 34, 43, float, "first derivative of mean motion"),
        nddot=_field(line1, lineno, 45, 52, _implied_exp, "second derivative of mean motion"),
        bstar=_field(line1, lineno, 54, 61, _implied_exp, "B* drag term"),
        ephemeris_type=_field(line1, lineno, 63, 63, _int, "ephemeris type"),
        element_set_no=_field(line1, lineno, 65, 68, _int, "element set number"),
        inclination=_field(line2, n2, 9, 16, float, "inclination"),
        raan=_field(line2, n2, 18, 25, float, "right ascension of ascending node"),
        eccentricity=e,
        arg_perigee=_field(line2, n2, 35, 42, float, "argument of perigee"),
        mean_anomaly=_field(line2, n2, 44, 51, float, "mean anomaly"),
        mean_motion=n,
        rev_number=_field(line2, n2, 64, 68, _int, "revolution number"),
        name=name,
    )


def _iter_sets(text: str):
    """Yield ``(lineno, name, line1, line2)`` groups, or a TleError in place."""
    lines = [(i, ln.rstrip()) for i, ln in enumerate(text.splitlines(), start=1)]
    lines = [(i, ln) for i, ln in lines if ln.strip()]
    k = 0
    while k < len(lines):
        i, ln = lines[k]
        name = None
        if not ln.startswith("1 "):
            if ln.startswith("2 "):
                yield TleError("line 2 without a preceding line 1", i, (1, 2))
                k += 1
                continue
            name = ln[2:].strip() if ln.startswith("0 ") else ln.strip()
            k += 1
            if k >= len(lines):
                yield TleError("name line without element lines", i, (1, len(ln)))
                return
            i, ln = lines[k]
        if k + 1 >= len(lines):
            yield TleError("line 1 without a following line 2", i, (1, len(ln)))
            return
        j, ln2 = lines[k + 1]
        if not ln2.startswith("2"):
            yield TleError("expected line 2", j, (1, 2))
            k += 1
            continue
        yield i, name, ln, ln2
        k += 2


def parse_tle(text: str) -> list[TleRecord]:
    """Parse two- or three-line element text, raising on the first bad set."""
    records = []
    for item in _iter_sets(text):
        if isinstance(item, TleError):
            raise item
        i, name, l1, l2 = item
        records.append(parse_lines(l1, l2, name, i))
    return records


def parse_tle_lenient(text: str) -> tuple[list[TleRecord], list[TleError]]:
    """Parse what can be parsed; return the records and the errors skipped."""
    records, errors = [], []
    for item in _iter_sets(text):
        if isinstance(item, TleError):
            errors.append(item)
            continue
        i, name, l1, l2 = item
        try:
            records.append(parse_lines(l1, l2, name, i))
        except TleError as exc:
            errors.append(exc)
    return records, errors


def _fmt_implied_exp(value: float) -> str:
    if value == 0:
        return " 00000+0"
    sign = "-" if value < 0 else " "
    mant, exp = f"{abs(value):.4e}".split("e")
    exp10 = int(exp) + 1
    if not -9 <= exp10 <= 9:
        raise DomainError(f"value {value!r} does not fit an implied-exponent TLE field")
    return f"{sign}{mant.replace('.', '')}{'-' if exp10 < 0 else '+'}{abs(exp10)}"


def _fmt_ndot(value: float) -> str:
    if not abs(value) < 1:
        raise DomainError("first derivative of mean motion must satisfy |ndot| < 1")
    text = f"{abs(value):.8f}"[1:]
    if text == ".00000000" or value >= 0:
        return " " + text
    return "-" + text


def format_tle(rec: TleRecord) -> tuple[str, str]:
    """Serialize a record to its two 69-column lines, checksums included."""
    ecc = round(rec.eccentricity * 1e7)
    if not 0 <= ecc <= 9999999:
        raise DomainError("eccentricity must be in [0, 1)")
    if not 0 <= rec.norad_id <= 99999:
        raise DomainError("satellite number must fit five digits")
    body1 = (
        f"1 {rec.norad_id:05d}{rec.classification[:1] or 'U'} {rec.int_designator:<8.8} "
        f"{rec.epoch_year % 100:02d}{rec.epoch_day:012.8f} {_fmt_ndot(rec.ndot)} "
        f"{_fmt_implied_exp(rec.nddot)} {_fmt_implied_exp(rec.bstar)} "
        f"{rec.ephemeris_type:1d} {rec.element_set_no % 10000:4d}"
    )
    body2 = (
        f"2 {rec.norad_id:05d} {rec.inclination:8.4f} {rec.raan:8.4f} {ecc:07d} "
        f"{rec.arg_perigee:8.4f} {rec.mean_anomaly:8.4f} {rec.mean_motion:11.8f}"
        f"{rec.rev_number % 100000:5d}"
    )
    for body in (body1, body2):
        if len(body) != 68:
            raise DomainError(f"field overflow while formatting TLE line: {body!r}")
    return body1 + str(checksum_of(body1)), body2 + str(checksum_of(body2))


def format_catalog(records) -> str:
    out = []
    for rec in records:
        if rec.name:
            out.append(rec.name)
        out.extend(format_tle(rec))
    return "\n".join(out) + "\n"


def mean_motion_rad_s(rev_per_day: float) -> float:
    return rev_per_day * 2.0 * math.pi / SECONDS_PER_DAY


def tle_to_elements(rec: TleRecord, body: BodyConstants = EARTH) -> KeplerianElements:
    """Osculating-style elements from TLE mean elements (two-body reading)."""
    if not 0 <= rec.eccentricity < 1:
        raise DomainError(f"record {rec.norad_id} is not a closed orbit (e={rec.eccentricity})")
    if not rec.mean_motion > 0:
        raise DomainError(f"record {rec.norad_id} has non-positive mean motion")
    n = mean_motion_rad_s(rec.mean_motion)
    a = (body.mu / (n * n)) ** (1.0 / 3.0)
    if rec.eccentricity == 0:
        nu = normalize_deg(rec.mean_anomaly)
    else:
        nu = normalize_deg(math.degrees(mean_to_true(math.radians(rec.mean_anomaly), rec.eccentricity)))
    return KeplerianElements(a, rec.eccentricity, rec.inclination, rec.raan, rec.arg_perigee, nu)


def elements_to_tle(
    el: KeplerianElements,
    norad_id: int,
    epoch_year: int,
    epoch_day: float,
    body: BodyConstants = EARTH,
    name: str | None = None,
    int_designator: str = "",
) -> TleRecord:
    """Build a drag-free record whose mean motion matches ``el.semi_major_axis``."""
    el.validate()
    n = math.sqrt(body.mu / el.semi_major_axis**3) * SECONDS_PER_DAY / (2.0 * math.pi)
    mean_anom = normalize_deg(math.degrees(true_to_mean(math.radians(el.true_anomaly), el.eccentricity)))
    return TleRecord(
        norad_id=norad_id,
        classification="U",
        int_designator=int_designator,
        epoch_year=epoch_year,
        epoch_day=epoch_day,
        ndot=0.0,
        nddot=0.0,
        bstar=0.0,
        ephemeris_type=0,
        element_set_no=999,
        inclination=el.inclination,
        raan=el.raan,
        eccentricity=el.eccentricity,
        arg_perigee=el.arg_perigee,
        mean_anomaly=mean_anom,
        mean_motion=n,
        rev_number=0,
        name=name,
    )
