"""The ten temporal operations, their canonical order, and the executor.

Operations are plain immutable records (name + parameter tuple).  The
textual syntax is ``Name[p1,p2,...]``; a sequence is written
``(op1, op2, ...)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from functools import lru_cache
from itertools import combinations
from typing import Iterable

from .errors import (
    FieldOverflow,
    IncomparableRange,
    KindMismatch,
    TemporalError,
    UnboundVariable,
    WrongKind,
    _bare,
)
from .temporal import (
    CANONICAL_FIELD,
    CENTURY,
    CONSTANTS,
    DAY_OF_MONTH,
    DAY_OF_WEEK,
    DAYTIME_OF_DAY,
    DECADE,
    DURATION_CODES,
    FIELDS_BY_NAME,
    HOUR_OF_DAY,
    MINUTE_OF_HOUR,
    MONTH_OF_QUARTER,
    MONTH_OF_YEAR,
    QUARTER_OF_YEAR,
    SEASON_OF_YEAR,
    SECOND_OF_MINUTE,
    WEEK_OF_YEAR,
    YEAR,
    ApproxRef,
    DayPart,
    Duration,
    Instant,
    MonthName,
    Ref,
    Season,
    TimeField,
    TimeUnit,
    Weekday,
    add_months,
    constant_unit,
    date_of,
    days_in_month,
    instant_from_date,
    last_iso_week,
    own_field,
    time_tail,
    try_truncate,
    truncate,
    week_date_instant,
    week_instant,
)


@dataclass(frozen=True, order=True)
class Var:
    """A variable slot ``$k`` inside a rule's operations."""

    index: int

    def __str__(self):
        return f"${self.index}"


# parameter kinds per operation
SIGNATURES = {
    "ModifyVal": ("int", "field"),
    "ModifyEnum": ("enum",),
    "CountEnum": ("int", "enum", "unit"),
    "Equal": ("field",),
    "ToBegin": ("field",),
    "ToEnd": ("field",),
    "Forward": ("int", "unit"),
    "Backward": ("int", "unit"),
    "ToNext": ("unit",),
    "ToLast": ("unit",),
    "MakeSet": ("unit",),
    "Add": ("int", "unit"),
    "ApproxRef": ("ref",),
}

# same-unit ordering: base-independent first, then a fixed class order
_CLASS_RANK = {
    "ModifyVal": 0, "ModifyEnum": 0,
    "ToBegin": 1, "ToEnd": 1,
    "ToNext": 2, "ToLast": 2,
    "Forward": 3, "Backward": 3,
    "CountEnum": 4,
    "Equal": 5,
    "Add": 0, "ApproxRef": 0, "MakeSet": 0,
}


def _format_param(p) -> str:
    if isinstance(p, TimeField):
        return p.name
    if isinstance(p, TimeUnit):
        return p.label
    if isinstance(p, (MonthName, Weekday, Season, DayPart, Ref)):
        return p.name
    return str(p)


@dataclass(frozen=True, eq=False)
class Operation:
    name: str
    params: tuple = ()

    def __post_init__(self):
        sig = SIGNATURES.get(self.name)
        if sig is None:
            raise ValueError(f"unknown operation {self.name!r}")
        if len(sig) != len(self.params):
            raise ValueError(f"{self.name} takes {len(sig)} parameters")
        # constants are IntEnums, so April == Thursday == 4; compare by type too
        key = (self.name, tuple((type(p).__name__, p) for p in self.params))
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))
        object.__setattr__(self, "is_bound", not any(isinstance(p, Var) for p in self.params))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Operation):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return self._hash

    def __str__(self):
        return f"{self.name}[{','.join(_format_param(p) for p in self.params)}]"

    def __repr__(self):
        return f"Operation({self})"

    @property
    def variables(self) -> list:
        return [p for p in self.params if isinstance(p, Var)]

    @property
    def numbers(self) -> list:
        """Integer parameters (the values drawn from the numeric pool)."""
        return [p for p, kind in zip(self.params, SIGNATURES[self.name])
                if kind == "int" and isinstance(p, int)]

    @property
    def unit(self):
        """The unit this operation acts on, or None while unresolved."""
        name, params = self.name, self.params
        if name in ("ModifyVal",):
            target = params[1]
        elif name in ("Equal", "ToBegin", "ToEnd"):
            target = params[0]
        elif name == "ModifyEnum":
            return None if isinstance(params[0], Var) else constant_unit(params[0])
        elif name == "CountEnum":
            return TimeUnit.DAY
        elif name in ("ToNext", "ToLast", "MakeSet"):
            target = params[0]
        elif name in ("Forward", "Backward", "Add"):
            target = params[1]
        else:
            return None
        if isinstance(target, Var):
            return None
        return target.unit if isinstance(target, TimeField) else target

    def resolve(self, binding: dict) -> "Operation":
        """Substitute bound variables; a unit bound into a field slot
        stands for that unit's canonical field."""
        out = []
        for p, kind in zip(self.params, SIGNATURES[self.name]):
            if isinstance(p, Var):
                if p.index not in binding:
                    raise UnboundVariable(f"{p} unbound in {self}")
                p = binding[p.index]
                if kind == "field" and isinstance(p, TimeUnit):
                    p = CANONICAL_FIELD[p]
                if not _kind_ok(kind, p):
                    raise KindMismatch(f"{p!r} cannot fill a {kind} slot of {self.name}")
            out.append(p)
        return Operation(self.name, tuple(out))


def _kind_ok(kind, p) -> bool:
    if kind == "int":
        return isinstance(p, int) and not isinstance(p, (MonthName, Weekday, Season, DayPart))
    if kind == "field":
        return isinstance(p, TimeField)
    if kind == "unit":
        return isinstance(p, TimeUnit)
    if kind == "enum":
        return isinstance(p, (MonthName, Weekday, Season, DayPart))
    return isinstance(p, Ref)


def op(name: str, *params) -> Operation:
    return Operation(name, tuple(params))


# -- textual syntax ---------------------------------------------------------

_OP_RE = re.compile(r"\s*([A-Za-z]+)\[([^\]]*)\]\s*")
_REFS = {r.name: r for r in Ref}


def _parse_param(text: str, kind: str):
    text = text.strip()
    if text.startswith("$"):
        return Var(int(text[1:]))
    if kind == "int":
        return int(text)
    if kind == "field":
        try:
            return FIELDS_BY_NAME[text]
        except KeyError:
            raise ValueError(f"unknown field {text!r}") from None
    if kind == "unit":
        return TimeUnit.from_label(text)
    if kind == "enum":
        try:
            return CONSTANTS[text]
        except KeyError:
            raise ValueError(f"unknown constant {text!r}") from None
    return _REFS[text]


def parse_operation(text: str) -> Operation:
    m = _OP_RE.fullmatch(text)
    if not m:
        raise ValueError(f"malformed operation {text!r}")
    name = m[1]
    sig = SIGNATURES.get(name)
    if sig is None:
        raise ValueError(f"unknown operation {name!r}")
    raw = [p for p in m[2].split(",")] if m[2].strip() else []
    if len(raw) != len(sig):
        raise ValueError(f"{name} takes {len(sig)} parameters: {text!r}")
    return Operation(name, tuple(_parse_param(p, k) for p, k in zip(raw, sig)))


def parse_sequence(text: str) -> tuple:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"sequence must be parenthesized: {text!r}")
    body = text[1:-1]
    return tuple(parse_operation(m.group(0)) for m in _OP_RE.finditer(body)
                 if m.group(0).strip())


def format_sequence(seq: Iterable[Operation], sep: str = ", ") -> str:
    return "(" + sep.join(str(o) for o in seq) + ")"


# -- ordering ---------------------------------------------------------------

def sort_key(o: Operation):
    if o.name == "MakeSet":
        rank = 100
    elif o.name == "ApproxRef":
        rank = -1
    else:
        unit = o.unit
        rank = 50 if unit is None else int(unit)
    return (rank, _CLASS_RANK[o.name], str(o))


def sort_sequence(ops: Iterable[Operation]) -> tuple:
    """Coarser units first; on the same unit, base-independent operations
    first, then a fixed class order; textual form breaks the last ties."""
    return tuple(sorted(ops, key=sort_key))


# -- execution --------------------------------------------------------------

def _plain(v) -> Instant:
    if not isinstance(v, Instant) or v.set_unit is not None:
        raise KindMismatch(f"operation needs a plain instant, got {v!r}")
    return v


def _year(v: Instant) -> int:
    y = v.get(YEAR)
    if y is None:
        raise KindMismatch(f"{v!r} has no year")
    return y


def _project(v: Instant, field: TimeField) -> Instant:
    try:
        return truncate(v, field)
    except (IncomparableRange, WrongKind):
        raise KindMismatch(f"{v!r} is not populated down to {field.name}") from None


def _date(v: Instant) -> date:
    d = date_of(v)
    if d is None:
        raise KindMismatch(f"{v!r} does not pin down a day")
    return d


def _modify_val(v, n: int, field: TimeField) -> Instant:
    if not field.lo <= n <= field.hi:
        raise FieldOverflow(f"{n} outside {field.name} [{field.lo},{field.hi}]")
    v = _plain(v)
    if field in (CENTURY, DECADE, YEAR):
        return Instant(((field, n),))
    if field in (QUARTER_OF_YEAR, SEASON_OF_YEAR, MONTH_OF_YEAR, WEEK_OF_YEAR):
        y = _year(v)
        if field is WEEK_OF_YEAR and n > last_iso_week(y):
            raise FieldOverflow(f"week {n} does not exist in {y}")
        return Instant(((YEAR, y), (field, n)))
    if field is MONTH_OF_QUARTER:
        q = _project(v, QUARTER_OF_YEAR)
        return Instant(((YEAR, q.get(YEAR)), (MONTH_OF_YEAR, 3 * (q.get(QUARTER_OF_YEAR) - 1) + n)))
    if field is DAY_OF_MONTH:
        m = _project(v, MONTH_OF_YEAR)
        y, mo = m.get(YEAR), m.get(MONTH_OF_YEAR)
        if n > days_in_month(y, mo):
            raise FieldOverflow(f"day {n} does not exist in {y}-{mo:02d}")
        return instant_from_date(date(y, mo, n))
    if field is DAY_OF_WEEK:
        w = _project(v, WEEK_OF_YEAR)
        return instant_from_date(date.fromisocalendar(w.get(YEAR), w.get(WEEK_OF_YEAR), n))
    if field in (DAYTIME_OF_DAY, HOUR_OF_DAY):
        return instant_from_date(_date(v), ((field, n),))
    if field is MINUTE_OF_HOUR:
        if not v.has(HOUR_OF_DAY):
            raise KindMismatch(f"{v!r} has no hour")
        return instant_from_date(_date(v), ((HOUR_OF_DAY, v.get(HOUR_OF_DAY)), (field, n)))
    if field is SECOND_OF_MINUTE:
        if not v.has(MINUTE_OF_HOUR):
            raise KindMismatch(f"{v!r} has no minute")
        return instant_from_date(
            _date(v),
            ((HOUR_OF_DAY, v.get(HOUR_OF_DAY)), (MINUTE_OF_HOUR, v.get(MINUTE_OF_HOUR)), (field, n)),
        )
    raise KindMismatch(f"ModifyVal does not support {field.name}")


def _modify_enum(v, e) -> Instant:
    if isinstance(e, MonthName):
        return _modify_val(v, int(e), MONTH_OF_YEAR)
    if isinstance(e, Weekday):
        return _modify_val(v, int(e), DAY_OF_WEEK)
    if isinstance(e, Season):
        return _modify_val(v, int(e), SEASON_OF_YEAR)
    # noon and midnight are clock times, not spans
    if e is DayPart.Noon:
        return _modify_val(_modify_val(v, 12, HOUR_OF_DAY), 0, MINUTE_OF_HOUR)
    if e is DayPart.Midnight:
        return _modify_val(_modify_val(v, 0, HOUR_OF_DAY), 0, MINUTE_OF_HOUR)
    return _modify_val(v, int(e), DAYTIME_OF_DAY)


def _count_enum(v, n: int, e, scope: TimeUnit) -> Instant:
    v = _plain(v)
    if not isinstance(e, Weekday):
        raise KindMismatch(f"CountEnum counts weekdays, not {e!r}")
    if n < 1:
        raise FieldOverflow("CountEnum index must be positive")
    if scope is TimeUnit.MONTH:
        m = _project(v, MONTH_OF_YEAR)
        first = date(m.get(YEAR), m.get(MONTH_OF_YEAR), 1)
    elif scope is TimeUnit.YEAR:
        first = date(_year(v), 1, 1)
    elif scope is TimeUnit.WEEK:
        if n != 1:
            raise FieldOverflow("a week holds each weekday once")
        return _modify_val(v, int(e), DAY_OF_WEEK)
    else:
        raise KindMismatch(f"CountEnum scope {scope.label} unsupported")
    day = first + timedelta(days=(int(e) - first.isoweekday()) % 7 + 7 * (n - 1))
    if (scope is TimeUnit.MONTH and day.month != first.month) or day.year != first.year:
        raise FieldOverflow(f"no {n}th {e.name} in scope")
    return instant_from_date(day)


def _to_bound(v, field: TimeField, end: bool) -> Instant:
    v = _plain(v)
    if field is MONTH_OF_YEAR:
        return Instant(((YEAR, _year(v)), (MONTH_OF_YEAR, 12 if end else 1)))
    if field is MONTH_OF_QUARTER:
        q = _project(v, QUARTER_OF_YEAR)
        month = 3 * (q.get(QUARTER_OF_YEAR) - 1) + (3 if end else 1)
        return Instant(((YEAR, q.get(YEAR)), (MONTH_OF_YEAR, month)))
    if field is QUARTER_OF_YEAR:
        return Instant(((YEAR, _year(v)), (QUARTER_OF_YEAR, 4 if end else 1)))
    if field is SEASON_OF_YEAR:
        return Instant(((YEAR, _year(v)), (SEASON_OF_YEAR, int(Season.Winter if end else Season.Spring))))
    if field is WEEK_OF_YEAR:
        y = _year(v)
        return week_instant(y, last_iso_week(y) if end else 1)
    if field is DAY_OF_MONTH:
        m = _project(v, MONTH_OF_YEAR)
        y, mo = m.get(YEAR), m.get(MONTH_OF_YEAR)
        return instant_from_date(date(y, mo, days_in_month(y, mo) if end else 1))
    if field is DAY_OF_WEEK:
        w = _project(v, WEEK_OF_YEAR)
        return instant_from_date(date.fromisocalendar(w.get(YEAR), w.get(WEEK_OF_YEAR), 7 if end else 1))
    if field is HOUR_OF_DAY:
        return instant_from_date(_date(v), ((HOUR_OF_DAY, 23 if end else 0),))
    raise KindMismatch(f"ToBegin/ToEnd does not support {field.name}")


_MONTH_STEPS = {
    TimeUnit.CENTURY: 1200, TimeUnit.DECADE: 120, TimeUnit.YEAR: 12,
    TimeUnit.QUARTER: 3, TimeUnit.SEASON: 3, TimeUnit.MONTH: 1,
}
_DAY_STEPS = {TimeUnit.WEEK: 7, TimeUnit.DAY: 1}
_SECOND_STEPS = {TimeUnit.HOUR: 3600, TimeUnit.MINUTE: 60, TimeUnit.SECOND: 1}
_TAIL_FIELDS = {TimeUnit.HOUR: HOUR_OF_DAY, TimeUnit.MINUTE: MINUTE_OF_HOUR, TimeUnit.SECOND: SECOND_OF_MINUTE}


def _count(n: int) -> int:
    if n < 1:
        raise FieldOverflow("shift count must be positive")
    return n


def _check_year(y: int) -> int:
    if not 1 <= y <= 9999:
        raise FieldOverflow(f"year {y} out of range")
    return y


def shift(v, k: int, unit: TimeUnit) -> Instant:
    """Move ``v`` by ``k`` units while keeping its granularity and chain."""
    v = _plain(v)
    g = v.granularity
    if g is None or unit is TimeUnit.DAYTIME:
        raise KindMismatch(f"cannot shift {v!r} by {unit.label}")
    vals = v.field_map
    if g is CENTURY:
        if unit is not TimeUnit.CENTURY:
            raise KindMismatch("a century value only shifts by centuries")
        n = vals[CENTURY] + k
        if not 0 <= n <= 99:
            raise FieldOverflow("century out of range")
        return Instant(((CENTURY, n),))
    if g is DECADE:
        if unit not in (TimeUnit.CENTURY, TimeUnit.DECADE):
            raise KindMismatch("a decade value only shifts by decades or centuries")
        n = vals[DECADE] + k * (10 if unit is TimeUnit.CENTURY else 1)
        if not 0 <= n <= 999:
            raise FieldOverflow("decade out of range")
        return Instant(((DECADE, n),))
    if unit in _MONTH_STEPS:
        months = k * _MONTH_STEPS[unit]
        y = vals[YEAR]
        if g is YEAR:
            if unit > TimeUnit.YEAR:
                raise KindMismatch(f"year value not populated to {unit.label}")
            return Instant(((YEAR, _check_year(y + months // 12)),))
        if g in (QUARTER_OF_YEAR, SEASON_OF_YEAR):
            if unit > TimeUnit.YEAR and unit is not g.unit:
                raise KindMismatch(f"{g.name} value cannot shift by {unit.label}")
            y2, idx = divmod(4 * y + vals[g] - 1 + months // 3, 4)
            return Instant(((YEAR, _check_year(y2)), (g, idx + 1)))
        if g is MONTH_OF_YEAR:
            y2, m = divmod(12 * y + vals[MONTH_OF_YEAR] - 1 + months, 12)
            return Instant(((YEAR, _check_year(y2)), (MONTH_OF_YEAR, m + 1)))
        if v.has(WEEK_OF_YEAR):
            if unit > TimeUnit.YEAR:
                raise KindMismatch(f"week-based value cannot shift by {unit.label}")
            y2 = _check_year(y + months // 12)
            week = min(vals[WEEK_OF_YEAR], last_iso_week(y2))
            return Instant(((YEAR, y2), (WEEK_OF_YEAR, week)) + v.fields[2:])
        try:
            return instant_from_date(add_months(_date(v), months), time_tail(v))
        except OverflowError:
            raise FieldOverflow("year out of range") from None
    if unit in _DAY_STEPS:
        days = k * _DAY_STEPS[unit]
        if g is WEEK_OF_YEAR:
            if unit is not TimeUnit.WEEK:
                raise KindMismatch("a week value only shifts by weeks")
            monday = date.fromisocalendar(vals[YEAR], vals[WEEK_OF_YEAR], 1)
            iy, w, _ = _add_days(monday, days).isocalendar()
            return week_instant(iy, w)
        moved = _add_days(_date(v), days)
        if g is DAY_OF_WEEK:
            return week_date_instant(moved)
        return instant_from_date(moved, time_tail(v))
    # sub-day units
    if not v.has(_TAIL_FIELDS[unit]):
        raise KindMismatch(f"{v!r} is not populated to {unit.label}")
    d = _date(v)
    moment = datetime(d.year, d.month, d.day, vals[HOUR_OF_DAY],
                      vals.get(MINUTE_OF_HOUR, 0), vals.get(SECOND_OF_MINUTE, 0))
    try:
        moment += timedelta(seconds=k * _SECOND_STEPS[unit])
    except OverflowError:
        raise FieldOverflow("year out of range") from None
    tail = [(HOUR_OF_DAY, moment.hour)]
    if v.has(MINUTE_OF_HOUR):
        tail.append((MINUTE_OF_HOUR, moment.minute))
    if v.has(SECOND_OF_MINUTE):
        tail.append((SECOND_OF_MINUTE, moment.second))
    return instant_from_date(moment.date(), tuple(tail))


def _add_days(d: date, days: int) -> date:
    try:
        return d + timedelta(days=days)
    except OverflowError:
        raise FieldOverflow("year out of range") from None


def _step(v, unit: TimeUnit, k: int) -> Instant:
    moved = shift(v, k, unit)
    return _project(moved, own_field(moved, unit))


def _make_set(v, unit: TimeUnit) -> Instant:
    v = _plain(v)
    try:
        return Instant(v.fields, unit)
    except TemporalError:
        raise KindMismatch(f"cannot mark {unit.label} as a set on {v!r}") from None


def _add(v, n: int, unit: TimeUnit) -> Duration:
    if not isinstance(v, Duration):
        raise KindMismatch("Add only works on durations")
    if unit not in DURATION_CODES:
        raise KindMismatch(f"durations cannot count {unit.label}")
    if n < 1:
        raise FieldOverflow("Add needs a positive count")
    counts = v.counts
    counts[unit] = counts.get(unit, 0) + n
    return Duration.of(counts)


def _equal(v, field: TimeField) -> Instant:
    return _project(_plain(v), field)


_DISPATCH = {
    "ModifyVal": lambda v, n, f: _modify_val(v, n, f),
    "ModifyEnum": _modify_enum,
    "CountEnum": _count_enum,
    "Equal": _equal,
    "ToBegin": lambda v, f: _to_bound(v, f, end=False),
    "ToEnd": lambda v, f: _to_bound(v, f, end=True),
    "Forward": lambda v, n, u: shift(v, _count(n), u),
    "Backward": lambda v, n, u: shift(v, -_count(n), u),
    "ToNext": lambda v, u: _step(v, u, 1),
    "ToLast": lambda v, u: _step(v, u, -1),
    "MakeSet": _make_set,
    "Add": _add,
    "ApproxRef": lambda v, r: ApproxRef(r),
}


@lru_cache(maxsize=1 << 16)
def _apply_cached(o: Operation, value):
    # failures are cached too, as the exception instance
    try:
        return _DISPATCH[o.name](value, *o.params)
    except TemporalError as exc:
        return _bare(exc)


def apply_operation(o: Operation, value):
    if not o.is_bound:
        raise UnboundVariable(f"{o} has unresolved variables")
    out = _apply_cached(o, value)
    if isinstance(out, TemporalError):
        raise out.with_traceback(None)
    return out


def try_apply(o: Operation, value):
    """Like apply_operation, but None instead of a TemporalError."""
    if not o.is_bound:
        return None
    out = _apply_cached(o, value)
    return None if isinstance(out, TemporalError) else out


def execute(seq: Iterable[Operation], base):
    """Apply ``seq`` left to right to ``base``.

    A sequence made only of Add operations builds a duration; it starts
    from ``base`` when that is already a duration and from an empty
    duration otherwise.
    """
    seq = tuple(seq)
    value = base
    if seq and all(o.name == "Add" for o in seq) and not isinstance(base, Duration):
        value = Duration(())
    for o in seq:
        value = apply_operation(o, value)
    return value


def try_execute(seq, base):
    try:
        return execute(seq, base)
    except TemporalError:
        return None


def is_redundant(seq, base) -> bool:
    """True if dropping some (but not all) operations gives the same result.

    The empty subsequence is not considered, so a single operation is
    never redundant.
    """
    seq = tuple(seq)
    result = execute(seq, base)
    n = len(seq)
    for size in range(n - 1, 0, -1):
        for keep in combinations(range(n), size):
            if try_execute([seq[i] for i in keep], base) == result:
                return True
    return False


def overridden(seq, base) -> list:
    """Operations whose effect on their own unit does not survive to the end.

    ``ToNext[month]`` followed by ``ModifyEnum[May]`` is the typical case:
    the month the first operation produced is gone from the final value.
    """
    seq = tuple(seq)
    values = []
    value = base
    if seq and all(o.name == "Add" for o in seq) and not isinstance(base, Duration):
        value = Duration(())
    for o in seq:
        value = apply_operation(o, value)
        values.append(value)
    final = value
    if isinstance(final, Instant) and final.set_unit is not None:
        final = Instant(final.fields)
    lost = []
    for o, after in zip(seq, values):
        unit = o.unit
        if unit is None or o.name in ("Add", "MakeSet") or not isinstance(after, Instant):
            continue
        f = own_field(after, unit)
        here = try_truncate(after, f)
        if here is None or here != try_truncate(final, f):
            lost.append(o)
    return lost


def is_low_redundancy(seq, base) -> bool:
    """Neither a dropped subsequence nor an override makes an operation moot."""
    seq = tuple(seq)
    return len(seq) < 2 or not (overridden(seq, base) or is_redundant(seq, base))
