"""Corpus ingestion (TimeML and TSV) and accuracy evaluation."""

from __future__ import annotations

import json
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Optional

from .errors import BadLine, CorpusError, MalformedXml, MissingDct, TemporalError, Unnormalizable
from .lexicon import DEFAULT_LEXICON, Lexicon
from .normalizer import DIRECT, is_reference_time, normalize
from .rules import RuleStore
from .temporal import Instant, parse_timex_value, serialize_timex_value

log = logging.getLogger(__name__)

TIMEML_SUFFIXES = (".tml", ".xml", ".timeml")


@dataclass
class AnnotatedExpression:
    doc_id: str
    surface: str
    tokens: list
    gold_type: str
    gold_value: str
    dct: Instant

    @cached_property
    def gold(self):
        """Parsed gold value, or None when outside the supported grammar."""
        try:
            return parse_timex_value(self.gold_value)
        except TemporalError:
            return None

    @property
    def skipped(self) -> bool:
        return self.gold is None


@dataclass
class IngestStats:
    files: int = 0
    documents: int = 0
    expressions: int = 0
    unsupported_values: int = 0
    malformed_files: list = field(default_factory=list)
    missing_dct: list = field(default_factory=list)


def _anchored(value: str) -> Optional[Instant]:
    try:
        v = parse_timex_value(value)
    except TemporalError:
        return None
    return v if is_reference_time(v) else None


def _text(el) -> str:
    return " ".join("".join(el.itertext()).split())


def _expression(doc_id, surface, gold_type, gold_value, dct, lexicon, stats) -> AnnotatedExpression:
    expr = AnnotatedExpression(doc_id, surface, lexicon.tokenize(surface),
                               gold_type.upper(), gold_value, dct)
    stats.expressions += 1
    if expr.skipped:
        stats.unsupported_values += 1
    return expr


def parse_timeml(text: str, doc_id: str, lexicon: Lexicon = DEFAULT_LEXICON,
                 stats: IngestStats = None) -> list:
    """Expressions of one TimeML document.

    Raises MalformedXml or MissingDct.
    """
    stats = stats if stats is not None else IngestStats()
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise MalformedXml(f"{doc_id}: {exc}") from None
    timexes = list(root.iter("TIMEX3"))
    dct_el, dct = find_dct(root, timexes)
    if dct is None:
        raise MissingDct(f"{doc_id}: no usable document creation time")
    stats.documents += 1
    out = []
    for t in timexes:
        if t is dct_el:
            continue
        out.append(_expression(doc_id, _text(t), t.get("type", ""), t.get("value", ""),
                               dct, lexicon, stats))
    return out


def find_dct(root, timexes) -> tuple:
    """(TIMEX3 element or None, creation time or None) of a document.

    A TIMEX3 marked CREATION_TIME wins, then a TIMEX3 inside DCT, then
    the bare text of DCT.
    """
    for t in timexes:
        if t.get("functionInDocument") == "CREATION_TIME":
            return t, _anchored(t.get("value", ""))
    holder = next(root.iter("DCT"), None)
    if holder is None:
        return None, None
    inner = next(holder.iter("TIMEX3"), None)
    if inner is not None:
        return inner, _anchored(inner.get("value", ""))
    return None, _anchored(_text(holder))


def corpus_files(path) -> list:
    path = Path(path)
    if path.is_dir():
        return sorted(p for p in path.rglob("*") if p.is_file() and p.suffix.lower() in TIMEML_SUFFIXES)
    if path.is_file():
        return [path]
    raise CorpusError(f"{path}: no such file or directory")


def ingest_timeml(path, lexicon: Lexicon = DEFAULT_LEXICON, stats: IngestStats = None) -> list:
    """Expressions from a TimeML file or a directory of them, in path order.

    Malformed files and documents without a creation time are skipped with
    a warning and recorded in ``stats``.
    """
    stats = stats if stats is not None else IngestStats()
    out = []
    for f in corpus_files(path):
        stats.files += 1
        try:
            text = f.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            log.warning("skipping unreadable %s: %s", f, exc)
            stats.malformed_files.append(str(f))
            continue
        try:
            out += parse_timeml(text, str(f), lexicon, stats)
        except MalformedXml as exc:
            log.warning("skipping malformed %s", exc)
            stats.malformed_files.append(str(f))
        except MissingDct as exc:
            log.warning("skipping %s", exc)
            stats.missing_dct.append(str(f))
    return out


def ingest_tsv(path, lexicon: Lexicon = DEFAULT_LEXICON, stats: IngestStats = None) -> list:
    """Lines of ``surface<TAB>type<TAB>value<TAB>dct``; ``#`` starts a comment.

    Raises BadLine on a wrong column count or an unusable dct.
    """
    stats = stats if stats is not None else IngestStats()
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"{path}: no such file")
    stats.files += 1
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise BadLine(lineno, f"expected 4 tab-separated columns, got {len(cols)}")
            surface, gold_type, gold_value, dct_text = cols
            dct = _anchored(dct_text.strip())
            if dct is None:
                raise BadLine(lineno, f"unusable dct {dct_text!r}")
            out.append(_expression(str(path), surface.strip(), gold_type.strip(),
                                   gold_value.strip(), dct, lexicon, stats))
    stats.documents += 1
    return out


def ingest(paths, fmt: str, lexicon: Lexicon = DEFAULT_LEXICON, stats: IngestStats = None) -> list:
    if isinstance(paths, (str, Path)):
        paths = [paths]
    stats = stats if stats is not None else IngestStats()
    reader = {"timeml": ingest_timeml, "tsv": ingest_tsv}.get(fmt)
    if reader is None:
        raise ValueError(f"unknown corpus format {fmt!r}")
    out = []
    for p in paths:
        out += reader(p, lexicon, stats)
    return out


# -- evaluation -------------------------------------------------------------

ERROR_CAUSES = ("unseen_pattern", "bad_rule", "exec_error", "other")


@dataclass
class EvalReport:
    total: int = 0
    skipped: int = 0
    type_correct: int = 0
    value_correct: int = 0
    errors: dict = field(default_factory=lambda: dict.fromkeys(ERROR_CAUSES, 0))

    @property
    def scored(self) -> int:
        return self.total - self.skipped

    @property
    def type_accuracy(self) -> float:
        return self.type_correct / self.scored if self.scored else 0.0

    @property
    def value_accuracy(self) -> float:
        return self.value_correct / self.scored if self.scored else 0.0

    def as_dict(self) -> dict:
        return {
            "total": self.total,
            "skipped": self.skipped,
            "type_accuracy": round(self.type_accuracy, 6),
            "value_accuracy": round(self.value_accuracy, 6),
            "errors": {k: self.errors[k] for k in ERROR_CAUSES},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [
            f"total\t{self.total}",
            f"skipped\t{self.skipped}",
            f"type_accuracy\t{self.type_accuracy:.4f}",
            f"value_accuracy\t{self.value_accuracy:.4f}",
        ]
        lines += [f"errors.{k}\t{self.errors[k]}" for k in ERROR_CAUSES]
        return "\n".join(lines) + "\n"


@dataclass
class Prediction:
    expression: AnnotatedExpression
    timex_type: Optional[str]
    value: Optional[str]
    via: str
    type_ok: bool
    value_ok: bool
    cause: Optional[str] = None


def judge(expr: AnnotatedExpression, store: RuleStore, lexicon: Lexicon = DEFAULT_LEXICON) -> Prediction:
    """Normalize one gold mention and compare with its annotation."""
    try:
        res = normalize(expr.tokens, expr.dct, store, lexicon)
    except Unnormalizable as exc:
        return Prediction(expr, None, None, exc.result.via, False, False, exc.result.cause)
    gold = expr.gold
    value_ok = gold is not None and res.value == serialize_timex_value(gold)
    type_ok = res.timex_type == expr.gold_type
    cause = None
    if not value_ok:
        cause = "bad_rule" if res.via == DIRECT else "other"
    return Prediction(expr, res.timex_type, res.value, res.via, type_ok, value_ok, cause)


def evaluate(store: RuleStore, test, lexicon: Lexicon = DEFAULT_LEXICON,
             predictions: list = None) -> EvalReport:
    """Type and value accuracy on gold mentions; unsupported gold values are
    counted in ``skipped`` and left out of both accuracies."""
    report = EvalReport()
    for expr in test:
        report.total += 1
        if expr.skipped:
            report.skipped += 1
            continue
        p = judge(expr, store, lexicon)
        if predictions is not None:
            predictions.append(p)
        report.type_correct += p.type_ok
        report.value_correct += p.value_ok
        if not p.value_ok:
            report.errors[p.cause] += 1
    return report

