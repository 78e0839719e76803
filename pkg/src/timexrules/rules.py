"""Rules: surface pattern + operation sequence, learned by frequency.

A captured sequence becomes a rule by replacing every parameter whose
value also shows up in the expression with a variable, and the matching
token with a typed slot.  Identical rules from different expressions are
counted, and each pattern keeps its most supported operation sequence.
"""

from __future__ import annotations

import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from functools import cached_property
from itertools import product
from pathlib import Path
from typing import Iterable, Optional

from .capture import DEFAULT_BUDGET, DEFAULT_SPACE, CaptureTask, OperationSpace, capture
from .errors import EmptyCorpus, NoSequenceFound, TemporalError
from .lexicon import (
    DAY_TIME,
    MONTH,
    NUM,
    SEASON,
    TIME_UNIT,
    WEEK,
    Pattern,
    Slot,
    Token,
    match,
    num_vals,
)
from .operations import (
    SIGNATURES,
    Operation,
    Var,
    execute,
    format_sequence,
    op,
    parse_sequence,
    sort_sequence,
)
from .temporal import (
    CANONICAL_FIELD,
    ApproxRef,
    DayPart,
    Duration,
    Instant,
    MonthName,
    Season,
    TimeField,
    TimeUnit,
    ValueKind,
    Weekday,
    parse_timex_value,
)

log = logging.getLogger(__name__)

_ENUM_TYPES = ((MonthName, MONTH), (Weekday, WEEK), (Season, SEASON), (DayPart, DAY_TIME))


@dataclass(frozen=True)
class Rule:
    pattern: Pattern
    value_type: str  # Instant | Duration | ApproxRef
    operations: tuple
    support: int = 0
    pattern_support: int = 0

    def __post_init__(self):
        used = {v.index for o in self.operations for v in o.variables}
        if used != set(self.pattern.variables):
            raise ValueError(f"slots of {self.pattern} do not match {self.ops_text}")

    @cached_property
    def key(self) -> tuple:
        """Identity of a rule regardless of its counts."""
        return (str(self.pattern), self.value_type, self.ops_text)

    @cached_property
    def ops_text(self) -> str:
        return format_sequence(self.operations, sep=",")

    def bind(self, tokens) -> Optional[dict]:
        return match(self.pattern, tokens)

    def resolve(self, binding: dict) -> tuple:
        return tuple(o.resolve(binding) for o in self.operations)

    def apply(self, tokens, base):
        """Execute the rule on ``tokens``; None if the pattern does not match."""
        binding = self.bind(tokens)
        if binding is None:
            return None
        return execute(self.resolve(binding), base)

    def to_line(self) -> str:
        return "\t".join([str(self.pattern), self.value_type, self.ops_text,
                          str(self.support), str(self.pattern_support)])

    @classmethod
    def from_line(cls, line: str) -> "Rule":
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 5:
            raise ValueError(f"expected 5 tab-separated fields, got {len(parts)}")
        pattern, vtype, ops, support, psupport = parts
        if vtype not in {k.value for k in ValueKind}:
            raise ValueError(f"unknown value type {vtype!r}")
        return cls(Pattern.parse(pattern), vtype, parse_sequence(ops), int(support), int(psupport))

    def __str__(self):
        return f"{self.pattern} -> {format_sequence(self.operations)}"


def rank_key(rule: Rule) -> tuple:
    return (-rule.support, -rule.pattern_support, str(rule.pattern), rule.value_type, rule.ops_text)


class RuleStore:
    """Rules in rank order, indexed by the first pattern element."""

    def __init__(self, rules: Iterable[Rule] = ()):
        self.rules = sorted(rules, key=rank_key)
        self._rank = {r.key: i for i, r in enumerate(self.rules)}
        self._index = defaultdict(list)
        self.max_length = max((len(r.pattern) for r in self.rules), default=0)
        for r in self.rules:
            self._index[r.pattern.first_key].append(r)

    def __len__(self):
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def rank(self, rule: Rule) -> int:
        return self._rank[rule.key]

    def by_pattern(self, pattern) -> Optional[Rule]:
        text = str(pattern)
        for r in self._index.get(Pattern.parse(text).first_key, ()):
            if str(r.pattern) == text:
                return r
        return None

    def _candidates(self, first: Token) -> list:
        keys = [first.surface, *first.type_tags]
        if first.number is not None:
            keys.append(NUM)
        found = [r for k in dict.fromkeys(keys) for r in self._index.get(k, ())]
        return sorted(found, key=self.rank)

    def matching(self, tokens) -> list:
        """(rule, binding) for every rule matching all of ``tokens``, best first."""
        tokens = list(tokens)
        if not tokens:
            return []
        out = []
        for r in self._candidates(tokens[0]):
            binding = r.bind(tokens)
            if binding is not None:
                out.append((r, binding))
        return out

    def save(self, path) -> None:
        Path(path).write_text("".join(r.to_line() + "\n" for r in self.rules), encoding="utf-8")

    def dumps(self) -> str:
        return "".join(r.to_line() + "\n" for r in self.rules)

    @classmethod
    def load(cls, path) -> "RuleStore":
        rules = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                if not line.strip():
                    continue
                try:
                    rules.append(Rule.from_line(line))
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: {exc}") from None
        return cls(rules)


# -- abstraction ------------------------------------------------------------

def value_kind(v) -> str:
    if isinstance(v, Duration):
        return ValueKind.DURATION.value
    if isinstance(v, ApproxRef):
        return ValueKind.APPROX_REF.value
    return ValueKind.INSTANT.value


def _surfacing_tokens(param, kind: str, tokens) -> list:
    """(token index, slot type) pairs whose token denotes ``param``."""
    hits = []
    if kind == "int" and type(param) is int:
        hits = [(i, NUM) for i, t in enumerate(tokens) if t.number == param]
    elif kind == "enum":
        slot = next(s for cls, s in _ENUM_TYPES if isinstance(param, cls))
        hits = [(i, slot) for i, t in enumerate(tokens) if t.value_of(slot) is param]
    elif kind == "unit" and isinstance(param, TimeUnit):
        hits = [(i, TIME_UNIT) for i, t in enumerate(tokens) if t.value_of(TIME_UNIT) is param]
    elif kind == "field" and isinstance(param, TimeField):
        # only the unit's canonical field survives the round trip through a unit slot
        if CANONICAL_FIELD.get(param.unit) is param:
            hits = [(i, TIME_UNIT) for i, t in enumerate(tokens)
                    if t.value_of(TIME_UNIT) is param.unit]
    return hits


_MAX_ASSIGNMENTS = 64


def abstract_sequence(tokens, seq, value_type: str) -> list:
    """Candidate rules for one captured sequence, one per consistent
    assignment of surfacing parameters to tokens."""
    tokens = list(tokens)
    sites = []  # (op index, param index, choices)
    for oi, o in enumerate(seq):
        for pi, (p, kind) in enumerate(zip(o.params, SIGNATURES[o.name])):
            hits = _surfacing_tokens(p, kind, tokens)
            if hits:
                sites.append((oi, pi, hits))
    rules = []
    for n, choice in enumerate(product(*(h for _, _, h in sites))):
        if n >= _MAX_ASSIGNMENTS:
            log.debug("abstraction of %s capped at %d assignments", format_sequence(seq), n)
            break
        slot_of = {}
        ok = True
        for tok_index, slot_type in choice:
            if slot_of.setdefault(tok_index, slot_type) != slot_type:
                ok = False  # one token cannot fill two slot types
                break
        if not ok:
            continue
        var_of = {}
        elements = []
        for i, t in enumerate(tokens):
            if i in slot_of:
                var_of[i] = len(var_of) + 1
                elements.append(Slot(slot_of[i], var_of[i]))
            else:
                elements.append(t.surface)
        ops = [list(o.params) for o in seq]
        for (oi, pi, _), (tok_index, _) in zip(sites, choice):
            ops[oi][pi] = Var(var_of[tok_index])
        operations = tuple(Operation(o.name, tuple(params)) for o, params in zip(seq, ops))
        rules.append(Rule(Pattern(tuple(elements)), value_type, operations))
    return rules


def abstract_candidates(tokens, sequences, value_type: str) -> list:
    """Distinct candidate rules for all captured sequences of one expression."""
    seen = {}
    for seq in sequences:
        for r in abstract_sequence(tokens, seq, value_type):
            seen.setdefault(r.key, r)
    return list(seen.values())


# -- learning ---------------------------------------------------------------

def _as_value(v):
    return parse_timex_value(v) if isinstance(v, str) else v


def equal_for_identity(seq, target) -> tuple:
    """An empty capture means the gold value is the base truncated to its own
    granularity; spell that out as Equal so the rule says so."""
    if seq or not isinstance(target, Instant) or not target.fields:
        return seq
    return (op("Equal", target.granularity),)


@dataclass
class LearnStats:
    expressions: int = 0
    captured: int = 0
    no_sequence: int = 0
    bad_value: int = 0
    truncated: int = 0
    candidates: int = 0

    @property
    def mean_candidates(self) -> float:
        return self.candidates / self.captured if self.captured else 0.0


def expression_candidates(expr, space: OperationSpace = DEFAULT_SPACE,
                          budget: int = DEFAULT_BUDGET, stats: LearnStats = None) -> list:
    """Candidate rules contributed by one annotated expression."""
    stats = stats if stats is not None else LearnStats()
    try:
        target = _as_value(expr.gold_value)
        base = _as_value(expr.dct)
    except TemporalError as exc:
        stats.bad_value += 1
        log.debug("skipping %r: %s", getattr(expr, "surface", expr), exc)
        return []
    tokens = list(expr.tokens)
    try:
        result = capture(CaptureTask(base, target, tuple(num_vals(tokens))), space, budget)
    except NoSequenceFound:
        stats.no_sequence += 1
        log.debug("no sequence for %r -> %s", getattr(expr, "surface", tokens), expr.gold_value)
        return []
    stats.captured += 1
    stats.truncated += result.truncated
    seqs = dict.fromkeys(equal_for_identity(s, target) for s in result.sequences)
    cands = abstract_candidates(tokens, seqs, value_kind(target))
    stats.candidates += len(cands)
    return cands


def _pattern_supports(patterns, token_lists) -> dict:
    """How many token lists each pattern matches.

    Patterns are grouped by their slot layout so each expression is keyed
    once per layout instead of being matched against every pattern.
    """
    shapes = defaultdict(dict)
    for p in patterns:
        layout = tuple(e.type if isinstance(e, Slot) else None for e in p.elements)
        literals = tuple(e for e in p.elements if not isinstance(e, Slot))
        shapes[layout][literals] = p
    counts = Counter()
    for tokens in token_lists:
        for layout, table in shapes.items():
            if len(layout) != len(tokens):
                continue
            literals = []
            for slot_type, t in zip(layout, tokens):
                if slot_type is None:
                    literals.append(t.surface)
                elif (t.number is None) if slot_type == NUM else (slot_type not in t.type_tags):
                    break
            else:
                p = table.get(tuple(literals))
                if p is not None:
                    counts[p] += 1
    return counts


def _selection_key(rule: Rule) -> tuple:
    return (-rule.support, len(rule.operations), rule.ops_text, rule.value_type)


def learn(corpus, space: OperationSpace = DEFAULT_SPACE, budget: int = DEFAULT_BUDGET,
          stats: LearnStats = None) -> RuleStore:
    """Learn one rule per surface pattern from annotated expressions."""
    corpus = list(corpus)
    if not corpus:
        raise EmptyCorpus("no training expressions")
    stats = stats if stats is not None else LearnStats()
    support = Counter()
    first_seen = {}
    for expr in corpus:
        stats.expressions += 1
        for r in expression_candidates(expr, space, budget, stats):
            support[r.key] += 1
            first_seen.setdefault(r.key, r)
    patterns = {r.pattern for r in first_seen.values()}
    psupport = _pattern_supports(patterns, [list(e.tokens) for e in corpus])
    best = {}
    for key, r in first_seen.items():
        r = replace(r, support=support[key], pattern_support=psupport[r.pattern])
        cur = best.get(r.pattern)
        if cur is None or _selection_key(r) < _selection_key(cur):
            best[r.pattern] = r
    log.info("learned %d rules from %d expressions (%d captured)",
             len(best), stats.expressions, stats.captured)
    return RuleStore(best.values())
