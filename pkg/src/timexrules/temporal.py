"""Time units, time fields, temporal values and the TIMEX3 value codec.

Instants are stored as a chain of ``(TimeField, int)`` pairs ordered from
the coarsest field down to the granularity.  All calendar work uses the
proleptic Gregorian calendar and ISO-8601 week numbering.
"""

from __future__ import annotations

import calendar
import re
from dataclasses import dataclass
from datetime import date, timedelta
from enum import Enum, IntEnum
from functools import lru_cache
from typing import Optional, Union

from .errors import IncomparableRange, TemporalError, UnsupportedValueForm, WrongKind, _bare


class _IntConstant(IntEnum):
    # int hashing; the Enum default hashes the member name in Python code
    __hash__ = int.__hash__


class TimeUnit(_IntConstant):
    """Units ordered from coarse (small value) to fine."""

    CENTURY = 0
    DECADE = 1
    YEAR = 2
    QUARTER = 3
    SEASON = 4
    MONTH = 5
    WEEK = 6
    DAY = 7
    DAYTIME = 8
    HOUR = 9
    MINUTE = 10
    SECOND = 11

    @property
    def label(self) -> str:
        return _UNIT_LABELS[self]

    @classmethod
    def from_label(cls, text: str) -> "TimeUnit":
        try:
            return _UNITS_BY_LABEL[text]
        except KeyError:
            raise ValueError(f"unknown time unit {text!r}") from None

    def coarser_than(self, other: "TimeUnit") -> bool:
        return int(self) < int(other)


_UNIT_LABELS = {
    TimeUnit.CENTURY: "century",
    TimeUnit.DECADE: "decade",
    TimeUnit.YEAR: "year",
    TimeUnit.QUARTER: "quarter",
    TimeUnit.SEASON: "season",
    TimeUnit.MONTH: "month",
    TimeUnit.WEEK: "week",
    TimeUnit.DAY: "day",
    TimeUnit.DAYTIME: "dayTime",
    TimeUnit.HOUR: "hour",
    TimeUnit.MINUTE: "minute",
    TimeUnit.SECOND: "second",
}
_UNITS_BY_LABEL = {v: k for k, v in _UNIT_LABELS.items()}


@dataclass(frozen=True, eq=False)
class TimeField:
    """A unit bounded by a coarser unit; ``bound=None`` means unbounded.

    Fields are module-level singletons compared by identity.
    """

    unit: TimeUnit
    bound: Optional[TimeUnit]
    lo: int
    hi: int

    def __post_init__(self):
        if self.bound is not None and not self.bound.coarser_than(self.unit):
            raise ValueError("field bound must be coarser than its unit")

    @property
    def name(self) -> str:
        if self.bound is None:
            return self.unit.label
        bound = self.bound.label
        return f"{self.unit.label}Of{bound[0].upper()}{bound[1:]}"

    def __repr__(self):
        return f"TimeField({self.name})"

    def __reduce__(self):
        return (_field_named, (self.name,))

    def __str__(self):
        return self.name


CENTURY = TimeField(TimeUnit.CENTURY, None, 0, 99)
DECADE = TimeField(TimeUnit.DECADE, None, 0, 999)
YEAR = TimeField(TimeUnit.YEAR, None, 1, 9999)
QUARTER_OF_YEAR = TimeField(TimeUnit.QUARTER, TimeUnit.YEAR, 1, 4)
SEASON_OF_YEAR = TimeField(TimeUnit.SEASON, TimeUnit.YEAR, 1, 4)
MONTH_OF_YEAR = TimeField(TimeUnit.MONTH, TimeUnit.YEAR, 1, 12)
MONTH_OF_QUARTER = TimeField(TimeUnit.MONTH, TimeUnit.QUARTER, 1, 3)
WEEK_OF_YEAR = TimeField(TimeUnit.WEEK, TimeUnit.YEAR, 1, 53)
DAY_OF_MONTH = TimeField(TimeUnit.DAY, TimeUnit.MONTH, 1, 31)
DAY_OF_WEEK = TimeField(TimeUnit.DAY, TimeUnit.WEEK, 1, 7)
DAYTIME_OF_DAY = TimeField(TimeUnit.DAYTIME, TimeUnit.DAY, 1, 4)
HOUR_OF_DAY = TimeField(TimeUnit.HOUR, TimeUnit.DAY, 0, 23)
MINUTE_OF_HOUR = TimeField(TimeUnit.MINUTE, TimeUnit.HOUR, 0, 59)
SECOND_OF_MINUTE = TimeField(TimeUnit.SECOND, TimeUnit.MINUTE, 0, 59)

ALL_FIELDS = (
    CENTURY, DECADE, YEAR, QUARTER_OF_YEAR, SEASON_OF_YEAR, MONTH_OF_YEAR,
    MONTH_OF_QUARTER, WEEK_OF_YEAR, DAY_OF_MONTH, DAY_OF_WEEK, DAYTIME_OF_DAY,
    HOUR_OF_DAY, MINUTE_OF_HOUR, SECOND_OF_MINUTE,
)
FIELDS_BY_NAME = {f.name: f for f in ALL_FIELDS}

# the field a bare unit stands for when it is used as a granularity
CANONICAL_FIELD = {
    TimeUnit.CENTURY: CENTURY,
    TimeUnit.DECADE: DECADE,
    TimeUnit.YEAR: YEAR,
    TimeUnit.QUARTER: QUARTER_OF_YEAR,
    TimeUnit.SEASON: SEASON_OF_YEAR,
    TimeUnit.MONTH: MONTH_OF_YEAR,
    TimeUnit.WEEK: WEEK_OF_YEAR,
    TimeUnit.DAY: DAY_OF_MONTH,
    TimeUnit.DAYTIME: DAYTIME_OF_DAY,
    TimeUnit.HOUR: HOUR_OF_DAY,
    TimeUnit.MINUTE: MINUTE_OF_HOUR,
    TimeUnit.SECOND: SECOND_OF_MINUTE,
}

_TIME_TAILS = (
    (DAYTIME_OF_DAY,),
    (HOUR_OF_DAY,),
    (HOUR_OF_DAY, MINUTE_OF_HOUR),
    (HOUR_OF_DAY, MINUTE_OF_HOUR, SECOND_OF_MINUTE),
)
_DATE = (YEAR, MONTH_OF_YEAR, DAY_OF_MONTH)
VALID_CHAINS = frozenset(
    [
        (CENTURY,), (DECADE,), (YEAR,),
        (YEAR, QUARTER_OF_YEAR), (YEAR, SEASON_OF_YEAR), (YEAR, MONTH_OF_YEAR),
        _DATE, (YEAR, WEEK_OF_YEAR), (YEAR, WEEK_OF_YEAR, DAY_OF_WEEK),
    ]
    + [_DATE + tail for tail in _TIME_TAILS]
)
# (chain, set unit) pairs that may carry a set marker
_SET_FORMS = {
    ((), TimeUnit.WEEK),
    ((YEAR,), TimeUnit.MONTH),
    ((YEAR,), TimeUnit.WEEK),
    ((YEAR,), TimeUnit.DAY),
    ((YEAR, MONTH_OF_YEAR), TimeUnit.DAY),
}


# -- enumerable constants ---------------------------------------------------

class MonthName(_IntConstant):
    January = 1
    February = 2
    March = 3
    April = 4
    May = 5
    June = 6
    July = 7
    August = 8
    September = 9
    October = 10
    November = 11
    December = 12


class Weekday(_IntConstant):
    Monday = 1
    Tuesday = 2
    Wednesday = 3
    Thursday = 4
    Friday = 5
    Saturday = 6
    Sunday = 7


class Season(_IntConstant):
    Spring = 1
    Summer = 2
    Fall = 3
    Winter = 4


class DayPart(_IntConstant):
    Morning = 1
    Afternoon = 2
    Evening = 3
    Night = 4
    Noon = 5
    Midnight = 6


class Ref(Enum):
    Past = "PAST_REF"
    Present = "PRESENT_REF"
    Future = "FUTURE_REF"


SEASON_CODES = {Season.Spring: "SP", Season.Summer: "SU", Season.Fall: "FA", Season.Winter: "WI"}
DAYPART_CODES = {DayPart.Morning: "MO", DayPart.Afternoon: "AF", DayPart.Evening: "EV", DayPart.Night: "NI"}
_SEASON_BY_CODE = {v: k for k, v in SEASON_CODES.items()}
_DAYPART_BY_CODE = {v: k for k, v in DAYPART_CODES.items()}

CONSTANTS = {
    m.name: m for enum_cls in (MonthName, Weekday, Season, DayPart) for m in enum_cls
}


def _field_named(name: str) -> TimeField:
    return FIELDS_BY_NAME[name]


def constant_unit(e) -> TimeUnit:
    """The unit whose field an enumerable constant modifies."""
    if isinstance(e, MonthName):
        return TimeUnit.MONTH
    if isinstance(e, Weekday):
        return TimeUnit.DAY
    if isinstance(e, Season):
        return TimeUnit.SEASON
    if isinstance(e, DayPart):
        return TimeUnit.HOUR if e > DayPart.Night else TimeUnit.DAYTIME
    raise TypeError(f"not an enumerable constant: {e!r}")


def month_season(month: int) -> int:
    if month in (12, 1, 2):
        return Season.Winter
    return (month - 3) // 3 + 1


# -- values -----------------------------------------------------------------

class ValueKind(Enum):
    INSTANT = "Instant"
    DURATION = "Duration"
    APPROX_REF = "ApproxRef"


_CHECKED = set()  # (fields, set_unit) pairs already validated


@dataclass(frozen=True)
class Instant:
    fields: tuple = ()
    set_unit: Optional[TimeUnit] = None

    kind = ValueKind.INSTANT

    def __post_init__(self):
        key = (self.fields, self.set_unit)
        if key not in _CHECKED:
            self._validate()
            if len(_CHECKED) < 1 << 17:
                _CHECKED.add(key)
        object.__setattr__(self, "_hash", hash(key))

    def _validate(self):
        chain = tuple(f for f, _ in self.fields)
        if self.set_unit is None:
            if chain not in VALID_CHAINS:
                raise UnsupportedValueForm(f"invalid field chain {chain}")
        elif (chain, self.set_unit) not in _SET_FORMS:
            raise UnsupportedValueForm(f"invalid set marker {self.set_unit.label} on {chain}")
        for f, v in self.fields:
            if type(v) is not int or not f.lo <= v <= f.hi:
                raise UnsupportedValueForm(f"{f.name}={v!r} out of bounds")
        if len(chain) > 2:
            vals = dict(self.fields)
            try:
                if DAY_OF_MONTH in vals:
                    date(vals[YEAR], vals[MONTH_OF_YEAR], vals[DAY_OF_MONTH])
                elif WEEK_OF_YEAR in vals:
                    date.fromisocalendar(vals[YEAR], vals[WEEK_OF_YEAR], vals.get(DAY_OF_WEEK, 1))
            except ValueError as exc:
                raise UnsupportedValueForm(str(exc)) from None
        elif len(chain) == 2 and chain[1] is WEEK_OF_YEAR:
            if self.fields[1][1] > last_iso_week(self.fields[0][1]):
                raise UnsupportedValueForm("no such ISO week")

    def __hash__(self):
        return self._hash

    def __repr__(self):
        text = self.__dict__.get("_text")
        if text is None:
            text = serialize_timex_value(self)
            object.__setattr__(self, "_text", text)
        return f"Instant({text!r})"

    @property
    def granularity(self) -> Optional[TimeField]:
        return self.fields[-1][0] if self.fields else None

    def get(self, field: TimeField, default=None):
        for f, v in self.fields:
            if f is field:
                return v
        return default

    def has(self, field: TimeField) -> bool:
        return any(f is field for f, _ in self.fields)

    @property
    def field_map(self) -> dict:
        return dict(self.fields)


@dataclass(frozen=True)
class Duration:
    parts: tuple = ()  # ((TimeUnit, count), ...) sorted coarse to fine

    kind = ValueKind.DURATION

    def __post_init__(self):
        for u, n in self.parts:
            if u not in DURATION_CODES or not isinstance(n, int) or n < 0:
                raise UnsupportedValueForm(f"bad duration part {u}={n}")

    def __repr__(self):
        return f"Duration({serialize_timex_value(self)!r})"

    @classmethod
    def of(cls, counts: dict) -> "Duration":
        return cls(tuple(sorted(((u, n) for u, n in counts.items() if n), key=lambda p: p[0])))

    @property
    def counts(self) -> dict:
        return dict(self.parts)


@dataclass(frozen=True)
class ApproxRef:
    ref: Ref

    kind = ValueKind.APPROX_REF

    def __repr__(self):
        return f"ApproxRef({self.ref.value!r})"


TemporalValue = Union[Instant, Duration, ApproxRef]

DURATION_CODES = {
    TimeUnit.YEAR: "Y",
    TimeUnit.MONTH: "M",
    TimeUnit.WEEK: "W",
    TimeUnit.DAY: "D",
    TimeUnit.HOUR: "H",
    TimeUnit.MINUTE: "M",
    TimeUnit.SECOND: "S",
}


# -- constructors -----------------------------------------------------------

def instant_from_date(d: date, tail: tuple = ()) -> Instant:
    return Instant(((YEAR, d.year), (MONTH_OF_YEAR, d.month), (DAY_OF_MONTH, d.day)) + tuple(tail))


def week_date_instant(d: date) -> Instant:
    iy, w, wd = d.isocalendar()
    return Instant(((YEAR, iy), (WEEK_OF_YEAR, w), (DAY_OF_WEEK, wd)))


def week_instant(iso_year: int, week: int) -> Instant:
    return Instant(((YEAR, iso_year), (WEEK_OF_YEAR, week)))


def date_of(v: Instant) -> Optional[date]:
    """The calendar day an instant pins down, or None above day granularity."""
    vals = v.field_map
    if DAY_OF_MONTH in vals:
        return date(vals[YEAR], vals[MONTH_OF_YEAR], vals[DAY_OF_MONTH])
    if DAY_OF_WEEK in vals:
        return date.fromisocalendar(vals[YEAR], vals[WEEK_OF_YEAR], vals[DAY_OF_WEEK])
    return None


def time_tail(v: Instant) -> tuple:
    """Fields finer than the day."""
    return tuple((f, x) for f, x in v.fields if f.unit > TimeUnit.DAY)


def last_iso_week(iso_year: int) -> int:
    return date(iso_year, 12, 28).isocalendar()[1]


def days_in_month(year: int, month: int) -> int:
    return calendar.monthrange(year, month)[1]


# -- truncation and comparison ----------------------------------------------

def _require_plain_instant(v) -> Instant:
    if not isinstance(v, Instant):
        raise WrongKind(f"expected an instant, got {v!r}")
    if v.set_unit is not None:
        raise WrongKind("set-marked values cannot be truncated")
    return v


def truncate(v: Instant, g: TimeField) -> Instant:
    """Re-express ``v`` at granularity ``g``, dropping every finer field.

    ``g`` may belong to a different field chain than ``v`` when the
    calendar allows the conversion (a date truncated to a week, a month
    truncated to its quarter).
    """
    out = _truncate_cached(v, g) if isinstance(v, Instant) else _truncate(v, g)
    if isinstance(out, TemporalError):
        raise out.with_traceback(None)
    return out


@lru_cache(maxsize=1 << 16)
def _truncate_cached(v, g):
    try:
        return _truncate(v, g)
    except TemporalError as exc:
        return _bare(exc)


def _truncate(v, g: TimeField) -> Instant:
    v = _require_plain_instant(v)
    for i, (f, _) in enumerate(v.fields):
        if f is g:
            return Instant(v.fields[: i + 1])
    vals = v.field_map
    d = date_of(v)
    year = vals.get(YEAR)
    if g is CENTURY:
        if year is not None:
            return Instant(((CENTURY, year // 100),))
        if DECADE in vals:
            return Instant(((CENTURY, vals[DECADE] // 10),))
    elif g is DECADE and year is not None:
        return Instant(((DECADE, year // 10),))
    elif g is YEAR and d is not None:
        return Instant(((YEAR, d.year),))
    elif g is QUARTER_OF_YEAR and MONTH_OF_YEAR in vals:
        return Instant(((YEAR, year), (QUARTER_OF_YEAR, (vals[MONTH_OF_YEAR] - 1) // 3 + 1)))
    elif g is SEASON_OF_YEAR and MONTH_OF_YEAR in vals:
        return Instant(((YEAR, year), (SEASON_OF_YEAR, month_season(vals[MONTH_OF_YEAR]))))
    elif g is MONTH_OF_YEAR and d is not None:
        return Instant(((YEAR, d.year), (MONTH_OF_YEAR, d.month)))
    elif g is WEEK_OF_YEAR and d is not None:
        iy, w, _ = d.isocalendar()
        return week_instant(iy, w)
    elif g is DAY_OF_MONTH and d is not None:
        return instant_from_date(d)
    elif g is DAY_OF_WEEK and d is not None:
        return week_date_instant(d)
    raise IncomparableRange(f"cannot truncate {serialize_timex_value(v)} to {g.name}")


def try_truncate(v, g: TimeField) -> Optional[Instant]:
    if isinstance(v, Instant):
        out = _truncate_cached(v, g)
        return None if isinstance(out, TemporalError) else out
    try:
        return truncate(v, g)
    except (IncomparableRange, WrongKind):
        return None


def own_field(v: Instant, unit: TimeUnit) -> TimeField:
    """The field with ``unit`` in ``v``'s own chain, else the canonical one."""
    for f, _ in v.fields:
        if f.unit is unit:
            return f
    return CANONICAL_FIELD[unit]


def ordinal(v: Instant) -> int:
    """Position of an instant on the axis of its granularity unit."""
    vals = v.field_map
    g = v.granularity
    if g is CENTURY:
        return vals[CENTURY]
    if g is DECADE:
        return vals[DECADE]
    if g is YEAR:
        return vals[YEAR]
    if g in (QUARTER_OF_YEAR, SEASON_OF_YEAR):
        return 4 * vals[YEAR] + vals[g] - 1
    if g is MONTH_OF_YEAR:
        return 12 * vals[YEAR] + vals[MONTH_OF_YEAR] - 1
    if g is WEEK_OF_YEAR:
        return date.fromisocalendar(vals[YEAR], vals[WEEK_OF_YEAR], 1).toordinal() // 7
    day = date_of(v).toordinal()
    if g in (DAY_OF_MONTH, DAY_OF_WEEK):
        return day
    if g is DAYTIME_OF_DAY:
        return 4 * day + vals[DAYTIME_OF_DAY] - 1
    n = 24 * day + vals[HOUR_OF_DAY]
    if g is HOUR_OF_DAY:
        return n
    n = 60 * n + vals[MINUTE_OF_HOUR]
    if g is MINUTE_OF_HOUR:
        return n
    return 60 * n + vals[SECOND_OF_MINUTE]


def field_diff(a: Instant, b: Instant, upper: TimeField, lower: TimeField) -> int:
    """Signed number of ``lower.unit`` steps from ``a`` to ``b``.

    Both values must agree above ``upper`` (on ``upper.bound``).
    """
    try:
        if upper.bound is not None:
            outer = CANONICAL_FIELD[upper.bound]
            if truncate(a, outer) != truncate(b, outer):
                raise IncomparableRange("values differ above the compared range")
        return ordinal(truncate(b, lower)) - ordinal(truncate(a, lower))
    except WrongKind:
        raise IncomparableRange("field_diff needs plain instants") from None


# -- codec ------------------------------------------------------------------

_DURATION_RE = re.compile(
    r"P(?:(\d+)Y)?(?:(\d+)M)?(?:(\d+)W)?(?:(\d+)D)?(?:T(?:(\d+)H)?(?:(\d+)M)?(?:(\d+)S)?)?"
)
_DURATION_UNITS = (
    TimeUnit.YEAR, TimeUnit.MONTH, TimeUnit.WEEK, TimeUnit.DAY,
    TimeUnit.HOUR, TimeUnit.MINUTE, TimeUnit.SECOND,
)
_DATE_FORMS = [
    (re.compile(r"(\d{2})"), lambda m: ((CENTURY, int(m[1])),)),
    (re.compile(r"(\d{3})"), lambda m: ((DECADE, int(m[1])),)),
    (re.compile(r"(\d{4})"), lambda m: ((YEAR, int(m[1])),)),
    (re.compile(r"(\d{4})-Q([1-4])"), lambda m: ((YEAR, int(m[1])), (QUARTER_OF_YEAR, int(m[2])))),
    (re.compile(r"(\d{4})-(SP|SU|FA|WI)"),
     lambda m: ((YEAR, int(m[1])), (SEASON_OF_YEAR, int(_SEASON_BY_CODE[m[2]])))),
    (re.compile(r"(\d{4})-(\d{2})"), lambda m: ((YEAR, int(m[1])), (MONTH_OF_YEAR, int(m[2])))),
    (re.compile(r"(\d{4})-(\d{2})-(\d{2})"),
     lambda m: ((YEAR, int(m[1])), (MONTH_OF_YEAR, int(m[2])), (DAY_OF_MONTH, int(m[3])))),
    (re.compile(r"(\d{4})-W(\d{2})"), lambda m: ((YEAR, int(m[1])), (WEEK_OF_YEAR, int(m[2])))),
    (re.compile(r"(\d{4})-W(\d{2})-([1-7])"),
     lambda m: ((YEAR, int(m[1])), (WEEK_OF_YEAR, int(m[2])), (DAY_OF_WEEK, int(m[3])))),
]
_SET_DATE_FORMS = [
    (re.compile(r"XXXX-WXX"), lambda m: ((), TimeUnit.WEEK)),
    (re.compile(r"(\d{4})-WXX"), lambda m: (((YEAR, int(m[1])),), TimeUnit.WEEK)),
    (re.compile(r"(\d{4})-XX"), lambda m: (((YEAR, int(m[1])),), TimeUnit.MONTH)),
    (re.compile(r"(\d{4})-XX-XX"), lambda m: (((YEAR, int(m[1])),), TimeUnit.DAY)),
    (re.compile(r"(\d{4})-(\d{2})-XX"),
     lambda m: (((YEAR, int(m[1])), (MONTH_OF_YEAR, int(m[2]))), TimeUnit.DAY)),
]
_TIME_RE = re.compile(r"(MO|AF|EV|NI)|(\d{2})(?::(\d{2})(?::(\d{2}))?)?")


def _parse_time(text: str) -> tuple:
    m = _TIME_RE.fullmatch(text)
    if not m:
        raise UnsupportedValueForm(f"unsupported time part {text!r}")
    if m[1]:
        return ((DAYTIME_OF_DAY, int(_DAYPART_BY_CODE[m[1]])),)
    tail = [(HOUR_OF_DAY, int(m[2]))]
    if m[3] is not None:
        tail.append((MINUTE_OF_HOUR, int(m[3])))
    if m[4] is not None:
        tail.append((SECOND_OF_MINUTE, int(m[4])))
    return tuple(tail)


def parse_timex_value(text: str) -> TemporalValue:
    """Parse a TIMEX3 value string.

    Raises UnsupportedValueForm for anything outside the supported grammar.

    >>> parse_timex_value("P2M")
    Duration('P2M')
    """
    text = text.strip()
    for ref in Ref:
        if text == ref.value:
            return ApproxRef(ref)
    if text.startswith("P"):
        m = _DURATION_RE.fullmatch(text)
        if not m or text in ("P", "PT") or text.endswith("T"):
            raise UnsupportedValueForm(f"unsupported duration {text!r}")
        counts = {u: int(g) for u, g in zip(_DURATION_UNITS, m.groups()) if g is not None}
        if not any(counts.values()):
            raise UnsupportedValueForm(f"zero duration {text!r}")
        return Duration.of(counts)
    date_part, sep, time_part = text.partition("T")
    for regex, build in _SET_DATE_FORMS:
        m = regex.fullmatch(date_part)
        if m:
            if sep:
                raise UnsupportedValueForm(f"time on a set value {text!r}")
            fields, unit = build(m)
            return Instant(fields, unit)
    for regex, build in _DATE_FORMS:
        m = regex.fullmatch(date_part)
        if m:
            fields = build(m)
            if sep:
                if len(fields) != 3 or fields[-1][0] is not DAY_OF_MONTH:
                    raise UnsupportedValueForm(f"time only allowed after a calendar date: {text!r}")
                fields = fields + _parse_time(time_part)
            return Instant(fields)
    raise UnsupportedValueForm(f"unsupported TIMEX3 value {text!r}")


def _serialize_instant(v: Instant) -> str:
    vals = v.field_map
    chain = tuple(f for f, _ in v.fields)
    if v.set_unit is not None:
        prefix = f"{vals[YEAR]:04d}" if YEAR in vals else "XXXX"
        if v.set_unit is TimeUnit.WEEK:
            return prefix + "-WXX"
        if v.set_unit is TimeUnit.MONTH:
            return prefix + "-XX"
        if MONTH_OF_YEAR in vals:
            return f"{prefix}-{vals[MONTH_OF_YEAR]:02d}-XX"
        return prefix + "-XX-XX"
    head = chain[0]
    if head is CENTURY:
        return f"{vals[CENTURY]:02d}"
    if head is DECADE:
        return f"{vals[DECADE]:03d}"
    out = f"{vals[YEAR]:04d}"
    if QUARTER_OF_YEAR in vals:
        return f"{out}-Q{vals[QUARTER_OF_YEAR]}"
    if SEASON_OF_YEAR in vals:
        return f"{out}-{SEASON_CODES[Season(vals[SEASON_OF_YEAR])]}"
    if WEEK_OF_YEAR in vals:
        out += f"-W{vals[WEEK_OF_YEAR]:02d}"
        if DAY_OF_WEEK in vals:
            out += f"-{vals[DAY_OF_WEEK]}"
        return out
    if MONTH_OF_YEAR in vals:
        out += f"-{vals[MONTH_OF_YEAR]:02d}"
    if DAY_OF_MONTH in vals:
        out += f"-{vals[DAY_OF_MONTH]:02d}"
    if DAYTIME_OF_DAY in vals:
        out += "T" + DAYPART_CODES[DayPart(vals[DAYTIME_OF_DAY])]
    elif HOUR_OF_DAY in vals:
        out += f"T{vals[HOUR_OF_DAY]:02d}"
        if MINUTE_OF_HOUR in vals:
            out += f":{vals[MINUTE_OF_HOUR]:02d}"
        if SECOND_OF_MINUTE in vals:
            out += f":{vals[SECOND_OF_MINUTE]:02d}"
    return out


def serialize_timex_value(v: TemporalValue) -> str:
    if isinstance(v, ApproxRef):
        return v.ref.value
    if isinstance(v, Duration):
        counts = v.counts
        date_part = "".join(
            f"{counts[u]}{DURATION_CODES[u]}"
            for u in (TimeUnit.YEAR, TimeUnit.MONTH, TimeUnit.WEEK, TimeUnit.DAY)
            if counts.get(u)
        )
        time_part = "".join(
            f"{counts[u]}{DURATION_CODES[u]}"
            for u in (TimeUnit.HOUR, TimeUnit.MINUTE, TimeUnit.SECOND)
            if counts.get(u)
        )
        return "P" + date_part + ("T" + time_part if time_part else "")
    return _serialize_instant(v)


def timex_type(v: TemporalValue) -> str:
    """TIMEX3 type attribute implied by a value."""
    if isinstance(v, Duration):
        return "DURATION"
    if isinstance(v, ApproxRef):
        return "DATE"
    if v.set_unit is not None:
        return "SET"
    if time_tail(v):
        return "TIME"
    return "DATE"


def canonical_value(text: str) -> str:
    """Canonical re-serialization of a TIMEX3 value string."""
    return serialize_timex_value(parse_timex_value(text))


def add_months(d: date, months: int) -> date:
    """Shift a date by whole months, clamping the day to the target month."""
    idx = d.year * 12 + d.month - 1 + months
    y, m = divmod(idx, 12)
    m += 1
    if not 1 <= y <= 9999:
        raise OverflowError("year out of range")
    return date(y, m, min(d.day, days_in_month(y, m)))


ONE_DAY = timedelta(days=1)
