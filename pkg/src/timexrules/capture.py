"""Reverse-engineer operation sequences that turn a base value into a gold value.

Values are vertices and operations are edges.  The search walks the time
units of the target from coarse to fine; at each unit it applies a small
group of operations on that unit and keeps the branch only when the
running value now agrees with the target down to that unit.  Integer
parameters are drawn from the numbers that occur in the expression.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .errors import NoSequenceFound, TemporalError
from .lexicon import num_vals
from .operations import (
    Operation,
    execute,
    format_sequence,
    is_low_redundancy,
    op,
    sort_key,
    try_apply,
)
from .temporal import (
    CANONICAL_FIELD,
    CENTURY,
    CONSTANTS,
    DAY_OF_MONTH,
    DAY_OF_WEEK,
    DAYTIME_OF_DAY,
    DECADE,
    HOUR_OF_DAY,
    MINUTE_OF_HOUR,
    MONTH_OF_QUARTER,
    MONTH_OF_YEAR,
    QUARTER_OF_YEAR,
    SECOND_OF_MINUTE,
    SEASON_OF_YEAR,
    WEEK_OF_YEAR,
    YEAR,
    ApproxRef,
    Duration,
    Instant,
    TimeUnit,
    Weekday,
    constant_unit,
    own_field,
    try_truncate,
)

log = logging.getLogger(__name__)

INSTANT_OPERATIONS = frozenset(
    ["ModifyVal", "ModifyEnum", "CountEnum", "Equal", "ToBegin", "ToEnd",
     "Forward", "Backward", "ToNext", "ToLast"]
)
_VALUE_FIELDS = (
    CENTURY, DECADE, YEAR, QUARTER_OF_YEAR, MONTH_OF_YEAR, MONTH_OF_QUARTER,
    WEEK_OF_YEAR, DAY_OF_MONTH, DAY_OF_WEEK, HOUR_OF_DAY, MINUTE_OF_HOUR, SECOND_OF_MINUTE,
)
_BOUNDABLE_FIELDS = (
    MONTH_OF_YEAR, MONTH_OF_QUARTER, QUARTER_OF_YEAR, SEASON_OF_YEAR,
    WEEK_OF_YEAR, DAY_OF_MONTH, DAY_OF_WEEK, HOUR_OF_DAY,
)
_GRANULARITY_FIELDS = tuple(CANONICAL_FIELD.values()) + (DAY_OF_WEEK,)
_COUNT_SCOPES = (TimeUnit.WEEK, TimeUnit.MONTH, TimeUnit.YEAR)


@dataclass(frozen=True)
class OperationSpace:
    """Which units are searched and which operation kinds may appear."""

    units: tuple = tuple(TimeUnit)
    kinds: frozenset = INSTANT_OPERATIONS
    max_group: int = 2

    def operations_on(self, unit: TimeUnit, numbers) -> list:
        """Every candidate operation acting on ``unit``, canonically sorted."""
        numbers = sorted(set(numbers))
        kinds = self.kinds
        ops = []
        if "ModifyVal" in kinds:
            for f in _VALUE_FIELDS:
                if f.unit is unit:
                    ops += [op("ModifyVal", n, f) for n in numbers if f.lo <= n <= f.hi]
        if "ModifyEnum" in kinds:
            ops += [op("ModifyEnum", e) for e in CONSTANTS.values() if constant_unit(e) is unit]
        if "ToBegin" in kinds or "ToEnd" in kinds:
            for f in _BOUNDABLE_FIELDS:
                if f.unit is unit:
                    ops += [op(name, f) for name in ("ToBegin", "ToEnd") if name in kinds]
        if unit is not TimeUnit.DAYTIME:
            ops += [op(name, unit) for name in ("ToNext", "ToLast") if name in kinds]
            for name in ("Forward", "Backward"):
                if name in kinds:
                    ops += [op(name, n, unit) for n in numbers if n >= 1]
        if unit is TimeUnit.DAY and "CountEnum" in kinds:
            ops += [op("CountEnum", n, e, scope)
                    for n in numbers if 1 <= n <= 53
                    for e in Weekday for scope in _COUNT_SCOPES]
        if "Equal" in kinds:
            ops += [op("Equal", f) for f in _GRANULARITY_FIELDS if f.unit is unit]
        return sorted(ops, key=sort_key)


DEFAULT_SPACE = OperationSpace()
DEFAULT_BUDGET = 10_000


@dataclass(frozen=True)
class CaptureTask:
    base: object
    target: object
    numeric_pool: tuple = ()

    @classmethod
    def from_tokens(cls, base, target, tokens) -> "CaptureTask":
        return cls(base, target, tuple(num_vals(tokens)))


@dataclass
class CaptureResult:
    sequences: list = field(default_factory=list)
    truncated: bool = False
    nodes: int = 0

    @property
    def items(self) -> list:
        """Each sequence paired with the pool values it consumed."""
        return [(s, tuple(sorted(n for o in s for n in o.numbers))) for s in self.sequences]

    def __len__(self):
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)


def _within(numbers, pool: Counter) -> bool:
    need = Counter(numbers)
    return all(pool[n] >= c for n, c in need.items())


class _Search:
    def __init__(self, base: Instant, target: Instant, pool, space: OperationSpace, budget: int):
        self.target = target
        self.space = space
        self.budget = budget
        self.nodes = 0
        self.truncated = False
        self.levels = []
        self.goal = {}
        for unit in space.units:
            f = own_field(target, unit)
            projected = try_truncate(target, f)
            if projected is not None:
                self.levels.append((unit, f))
                self.goal[unit] = projected
        self.pool = Counter(pool)
        self._ops = {unit: space.operations_on(unit, self.pool) for unit, _ in self.levels}
        self._memo = {}

    def agrees(self, value, unit, f) -> bool:
        return try_truncate(value, f) == self.goal[unit]

    def groups(self, value, unit, f):
        """Operation subsets on ``unit`` whose every member leaves the
        value agreeing with the target on that unit; a member that does
        not would be overridden by a later one in the same group."""
        ops = self._ops[unit]
        good = []
        for o in ops:
            res = try_apply(o, value)
            if res is not None and self.agrees(res, unit, f):
                good.append((o, res))
        frontier = [((o,), res) for o, res in good]
        for size in range(1, self.space.max_group + 1):
            yield from frontier
            if size == self.space.max_group:
                break
            grown = []
            for group, res in frontier:
                for o in ops:
                    if sort_key(o) <= sort_key(group[-1]):
                        continue
                    nxt = try_apply(o, res)
                    if nxt is not None and self.agrees(nxt, unit, f):
                        grown.append((group + (o,), nxt))
            frontier = grown

    def run(self, value, start: int, pool: Counter) -> frozenset:
        key = (value, start, tuple(sorted(pool.elements())))
        if key in self._memo:
            return self._memo[key]
        self.nodes += 1
        found = set()
        if value == self.target:
            found.add(())
        if self.nodes > self.budget:
            self.truncated = True
        else:
            for i in range(start, len(self.levels)):
                unit, f = self.levels[i]
                for group, res in self.groups(value, unit, f):
                    used = [n for o in group for n in o.numbers]
                    if not _within(used, pool):
                        continue
                    rest = pool - Counter(used)
                    for tail in self.run(res, i + 1, rest):
                        found.add(group + tail)
        result = frozenset(found)
        self._memo[key] = result
        return result


def _instant_sequences(base, target, pool, space, budget):
    search = _Search(base, target, pool, space, budget)
    found = search.run(base, 0, Counter(pool))
    return found, search.truncated, search.nodes


def capture(task: CaptureTask, space: OperationSpace = DEFAULT_SPACE,
            budget: int = DEFAULT_BUDGET) -> CaptureResult:
    """All non-redundant operation sequences from ``task.base`` to ``task.target``.

    Raises NoSequenceFound when nothing connects the two values.
    """
    base, target, pool = task.base, task.target, tuple(task.numeric_pool)
    truncated = False
    nodes = 0
    if isinstance(target, ApproxRef):
        found = {(op("ApproxRef", target.ref),)}
    elif isinstance(target, Duration):
        seq = tuple(op("Add", n, u) for u, n in target.parts)
        found = {seq} if _within([n for _, n in target.parts], Counter(pool)) else set()
    elif not isinstance(base, Instant):
        raise NoSequenceFound("instant targets need an instant base")
    elif target.set_unit is not None:
        if not target.fields:
            raise NoSequenceFound(f"no anchored part in {target!r}")
        plain = Instant(target.fields)
        inner, truncated, nodes = _instant_sequences(base, plain, pool, space, budget)
        found = {s + (op("MakeSet", target.set_unit),) for s in inner}
    else:
        found, truncated, nodes = _instant_sequences(base, target, pool, space, budget)

    sequences = []
    for seq in found:
        if execute(seq, base) != target:  # soundness guard
            raise AssertionError(f"unsound capture {format_sequence(seq)}")
        if not is_low_redundancy(seq, base):
            continue
        sequences.append(seq)
    if not sequences:
        raise NoSequenceFound(f"no sequence from {base!r} to {target!r}")
    sequences.sort(key=format_sequence)
    if truncated:
        log.debug("capture budget exhausted after %d nodes", nodes)
    return CaptureResult(sequences, truncated, nodes)


def capture_values(base, target, pool=(), **kwargs) -> Optional[CaptureResult]:
    """Convenience wrapper returning None instead of raising."""
    try:
        return capture(CaptureTask(base, target, tuple(pool)), **kwargs)
    except NoSequenceFound:
        return None
