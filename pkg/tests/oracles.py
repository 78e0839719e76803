"""Brute-force reference implementations used by the tests.

Each oracle solves its problem by plain enumeration, with no shared
search code, so agreement with the package is meaningful.
"""

from __future__ import annotations

import random
from collections import Counter
from datetime import date, timedelta
from itertools import product

from timexrules.operations import SIGNATURES, Operation, is_low_redundancy, sort_key, try_apply
from timexrules.temporal import (
    ALL_FIELDS,
    CONSTANTS,
    DAY_OF_MONTH,
    MONTH_OF_YEAR,
    WEEK_OF_YEAR,
    YEAR,
    TimeUnit,
    instant_from_date,
    parse_timex_value,
    truncate,
)

ORACLE_UNITS = (TimeUnit.YEAR, TimeUnit.MONTH, TimeUnit.WEEK, TimeUnit.DAY)
INSTANT_KINDS = ("ModifyVal", "ModifyEnum", "CountEnum", "Equal", "ToBegin", "ToEnd",
                 "ToNext", "ToLast", "Forward", "Backward")
NUMBER_RANGE = tuple(range(1, 13))
# values of every granularity in the universe, including a 53-week year and
# a leap day; an operation that fails on all of them is dead weight
PROBES = ("2021-05-17", "2021-05", "2021-W20", "2021-W20-1", "2021", "2020-12-31",
          "2020-W53", "2020-02-29", "2015-01-31")


def _param_choices(kind, numbers):
    if kind == "int":
        return numbers
    if kind == "field":
        return ALL_FIELDS
    if kind == "unit":
        return tuple(TimeUnit)
    if kind == "enum":
        return tuple(CONSTANTS.values())
    return ()


def all_operations(units, numbers) -> list:
    """Every instant operation the signatures admit whose unit is in
    ``units`` and that executes on at least one probe value."""
    probes = [parse_timex_value(p) for p in PROBES]
    out = set()
    for name in INSTANT_KINDS:
        for params in product(*(_param_choices(k, numbers) for k in SIGNATURES[name])):
            o = Operation(name, params)
            if o.unit in units and any(try_apply(o, p) is not None for p in probes):
                out.add(o)
    return sorted(out, key=sort_key)


def capture_oracle(base, target, pool, units=ORACLE_UNITS, max_len=3) -> set:
    """All sorted, pool-respecting, low-redundancy sequences of length
    <= max_len that execute from base to target.

    Enumerates every sorted combination; suffixes reaching the target are
    memoized on (position, value, remaining length, remaining pool).
    """
    have = Counter(pool)
    numbers = tuple(n for n in sorted(set(NUMBER_RANGE) | set(pool)) if have[n])
    ops = all_operations(units, numbers)
    memo = {}

    def suffixes(start, value, left, rest):
        key = (start, value, left, rest)
        if key in memo:
            return memo[key]
        out = []
        for i in range(start, len(ops)):
            o = ops[i]
            remaining = list(rest)
            try:
                for n in o.numbers:
                    remaining.remove(n)
            except ValueError:
                continue  # pool exhausted
            v = try_apply(o, value)
            if v is None:
                continue
            if v == target:
                out.append((o,))
            if left > 1:
                out += [(o,) + tail for tail in suffixes(i + 1, v, left - 1, tuple(remaining))]
        memo[key] = out
        return out

    found = {()} if base == target else set()
    found.update(s for s in suffixes(0, base, max_len, tuple(sorted(pool)))
                 if is_low_redundancy(s, base))
    return found


def random_capture_pairs(n, seed=7):
    """(base, target, pool) triples over year/month/week/day targets."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        b = date(2010, 1, 1) + timedelta(days=rng.randrange(6000))
        t = b + timedelta(days=rng.randint(-400, 400))
        g = rng.choice([YEAR, MONTH_OF_YEAR, WEEK_OF_YEAR, DAY_OF_MONTH])
        nums = [t.year, t.month, t.day, t.isocalendar()[1], abs((t - b).days) % 10 + 1,
                rng.randint(1, 12)]
        pool = tuple(sorted(rng.sample(nums, rng.randint(0, 2))))
        out.append((instant_from_date(b), truncate(instant_from_date(t), g), pool))
    return out


def min_cover_size(tokens, rules, is_stop, cache=None):
    """Fewest rule spans in any left-to-right tiling of ``tokens`` by rule
    matches and single stop-word tokens; None when no tiling exists.

    Enumerates every tiling of the token list.  ``cache`` may hold
    span match results keyed by surface tuple across calls.
    """
    cache = {} if cache is None else cache

    def covered(piece):
        key = tuple(t.surface for t in piece)
        if key not in cache:
            cache[key] = any(r.bind(piece) is not None for r in rules)
        return cache[key]

    n = len(tokens)
    if n == 0:
        return None
    sizes = []

    def tile(start, size):
        # every composition, abandoned at its first uncoverable piece
        if start == n:
            sizes.append(size)
            return
        for end in range(start + 1, n + 1):
            piece = tokens[start:end]
            if end - start == 1 and is_stop(piece[0]):
                tile(end, size)
            if covered(piece):
                tile(end, size + 1)

    tile(0, 0)
    return min(sizes) if sizes else None
