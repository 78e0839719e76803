"""Apply a rule store to new expressions.

A rule whose pattern matches the whole expression wins outright.  Failing
that, the expression is covered by the fewest rule-matched spans, with
stop words allowed to fill the gaps, and the operations of the chosen
rules are merged and executed together.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import KindConflict, TemporalError, Unnormalizable
from .lexicon import DEFAULT_LEXICON, Lexicon
from .operations import execute, format_sequence, sort_sequence
from .rules import Rule, RuleStore
from .temporal import Instant, date_of, parse_timex_value, serialize_timex_value, timex_type

DIRECT = "direct"
SEGMENTED = "segmented"
FAILED = "failed"

# covers kept per prefix; the best one drives the result, the rest are
# fallbacks when merging or executing the best one fails
DEFAULT_BEAM = 8
# covers kept per prefix when every beam cover failed; wide enough to be
# exhaustive for expressions of ordinary length
FALLBACK_BEAM = 4096


@dataclass
class NormalizationResult:
    timex_type: Optional[str]
    value: Optional[str]
    rules_used: list = field(default_factory=list)
    via: str = FAILED
    cause: Optional[str] = None  # why a failed result failed

    @property
    def ok(self) -> bool:
        return self.via != FAILED


@dataclass(frozen=True)
class Segment:
    rule: Rule
    start: int
    end: int
    binding: tuple  # sorted (var, value) pairs

    @property
    def bindings(self) -> dict:
        return dict(self.binding)


@dataclass(frozen=True)
class Cover:
    segments: tuple = ()

    def __len__(self):
        return len(self.segments)

    @property
    def rules(self) -> list:
        return [s.rule for s in self.segments]

    def extend(self, seg: Segment) -> "Cover":
        return Cover(self.segments + (seg,))


def cover_key(cover: Cover, store: RuleStore = None) -> tuple:
    """Fewest rules, then the most frequent rules, then the earliest split."""
    supports = sorted((s.rule.support for s in cover.segments), reverse=True)
    ranks = tuple(store.rank(s.rule) for s in cover.segments) if store is not None else ()
    return (len(cover), tuple(-n for n in supports), tuple(s.start for s in cover.segments), ranks)


def _as_tokens(expr, lexicon: Lexicon):
    return lexicon.tokenize(expr) if isinstance(expr, str) else list(expr)


def is_reference_time(v) -> bool:
    """A usable base: a plain instant that pins down a calendar day."""
    return isinstance(v, Instant) and v.set_unit is None and date_of(v) is not None


def _as_base(dct):
    base = parse_timex_value(dct) if isinstance(dct, str) else dct
    if not is_reference_time(base):
        raise ValueError(f"reference time must be a full date, got {dct!r}")
    return base


def span_matches(store: RuleStore, tokens, start: int, end: int, limit: int = None) -> list:
    found = store.matching(tokens[start:end])
    return found[:limit] if limit else found


def segment_covers(tokens, store: RuleStore, lexicon: Lexicon = DEFAULT_LEXICON,
                   beam: int = DEFAULT_BEAM) -> list:
    """Best covers of the whole token list, best first.

    F[i] holds the best covers of the first i tokens.  A stop word extends
    a prefix only when that prefix is itself coverable.
    """
    tokens = list(tokens)
    n = len(tokens)
    if n == 0:
        return []
    key = lambda c: cover_key(c, store)
    F = [[] for _ in range(n + 1)]
    F[0] = [Cover()]
    for i in range(1, n + 1):
        cands = {}
        if lexicon.is_stopword(tokens[i - 1]):
            for c in F[i - 1]:
                cands[c] = None
        for j in range(max(0, i - store.max_length), i):
            if not F[j]:
                continue
            for rule, binding in span_matches(store, tokens, j, i, beam):
                seg = Segment(rule, j, i, tuple(sorted(binding.items())))
                for c in F[j]:
                    cands[c.extend(seg)] = None
        F[i] = sorted(cands, key=key)[:beam]
    return F[n]


def segment(tokens, store: RuleStore, lexicon: Lexicon = DEFAULT_LEXICON) -> list:
    """The best cover's rules, or an empty list when nothing covers ``tokens``."""
    covers = segment_covers(tokens, store, lexicon, beam=1)
    return covers[0].rules if covers and covers[0].segments else []


def merge(rules_used, bindings) -> tuple:
    """Union of the rules' resolved operations in canonical order."""
    kinds = {r.value_type for r in rules_used}
    if len(kinds) > 1:
        raise KindConflict(f"cannot merge {' and '.join(sorted(kinds))} rules")
    ops = []
    for rule, binding in zip(rules_used, bindings):
        ops.extend(rule.resolve(binding))
    return sort_sequence(dict.fromkeys(ops))


def _result(value, rules, via) -> NormalizationResult:
    return NormalizationResult(timex_type(value), serialize_timex_value(value), list(rules), via)


def normalize(expr, dct, store: RuleStore, lexicon: Lexicon = DEFAULT_LEXICON,
              beam: int = DEFAULT_BEAM) -> NormalizationResult:
    """Normalize ``expr`` (text or tokens) against reference time ``dct``.

    Raises Unnormalizable; its ``result`` attribute carries the failed
    NormalizationResult with a cause of unseen_pattern or exec_error.
    """
    tokens = _as_tokens(expr, lexicon)
    base = _as_base(dct)
    matched = False
    for rule, binding in store.matching(tokens):
        matched = True
        try:
            return _result(execute(rule.resolve(binding), base), [rule], DIRECT)
        except TemporalError:
            continue  # a bad binding; the next-ranked rule may do better
    tried = set()
    for width in dict.fromkeys((beam, max(beam, FALLBACK_BEAM))):
        for cover in segment_covers(tokens, store, lexicon, width):
            if not cover.segments or cover in tried:
                continue  # stop words alone say nothing
            tried.add(cover)
            matched = True
            try:
                ops = merge(cover.rules, [s.bindings for s in cover.segments])
                return _result(execute(ops, base), cover.rules, SEGMENTED)
            except TemporalError:
                continue
    cause = "exec_error" if matched else "unseen_pattern"
    err = Unnormalizable(f"cannot normalize {' '.join(t.surface for t in tokens)!r} ({cause})")
    err.result = NormalizationResult(None, None, [], FAILED, cause)
    raise err


def try_normalize(expr, dct, store: RuleStore, lexicon: Lexicon = DEFAULT_LEXICON,
                  beam: int = DEFAULT_BEAM) -> NormalizationResult:
    """normalize, but a failed result instead of Unnormalizable."""
    try:
        return normalize(expr, dct, store, lexicon, beam)
    except Unnormalizable as exc:
        return exc.result


def explain(result: NormalizationResult) -> str:
    rules = "; ".join(f"{r.pattern} -> {format_sequence(r.operations)}" for r in result.rules_used)
    return f"{result.timex_type}\t{result.value}\tvia={result.via}\t{rules}"
