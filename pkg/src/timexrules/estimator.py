"""scikit-learn style front end: fit learns a rule store, predict normalizes."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .capture import DEFAULT_BUDGET, INSTANT_OPERATIONS, OperationSpace
from .corpus import AnnotatedExpression, EvalReport, evaluate
from .errors import EmptyCorpus, TemporalError
from .lexicon import Lexicon
from .normalizer import DEFAULT_BEAM, _as_base, try_normalize
from .rules import LearnStats, learn
from .temporal import parse_timex_value, timex_type


def check_expressions(X, y=None, lexicon: Lexicon = None) -> list:
    """Coerce X (and optional gold values y) into AnnotatedExpression items.

    X holds AnnotatedExpression objects or (text, dct) pairs; with pairs, y
    gives the gold value strings.
    """
    lexicon = lexicon or Lexicon()
    X = list(X)
    if y is not None:
        y = list(y)
        if len(y) != len(X):
            raise ValueError(f"X has {len(X)} items but y has {len(y)}")
    out = []
    for i, item in enumerate(X):
        if isinstance(item, AnnotatedExpression):
            out.append(item)
            continue
        try:
            text, dct = item
        except (TypeError, ValueError):
            raise ValueError(f"X[{i}] is neither an AnnotatedExpression nor a (text, dct) pair") from None
        if not isinstance(text, str):
            raise ValueError(f"X[{i}]: expression text must be a string")
        try:
            base = _as_base(dct)
        except (TemporalError, ValueError) as exc:
            raise ValueError(f"X[{i}]: {exc}") from None
        gold = "" if y is None else str(y[i])
        try:
            gold_type = timex_type(parse_timex_value(gold)) if gold else ""
        except TemporalError:
            gold_type = ""
        out.append(AnnotatedExpression("", text, lexicon.tokenize(text), gold_type, gold, base))
    return out


class TimexNormalizer(BaseEstimator):
    """Learns normalization rules from gold (expression, value) pairs."""

    def __init__(self, max_group=2, budget=DEFAULT_BUDGET, beam=DEFAULT_BEAM,
                 lexicon_path=None, stopwords_path=None):
        self.max_group = max_group
        self.budget = budget
        self.beam = beam
        self.lexicon_path = lexicon_path
        self.stopwords_path = stopwords_path

    def _lexicon(self) -> Lexicon:
        return Lexicon.load(self.lexicon_path, self.stopwords_path)

    def fit(self, X, y=None):
        if self.max_group < 1 or self.budget < 1 or self.beam < 1:
            raise ValueError("max_group, budget and beam must be positive")
        self.lexicon_ = self._lexicon()
        exprs = check_expressions(X, y, self.lexicon_)
        if not exprs:
            raise EmptyCorpus("no training expressions")
        space = OperationSpace(kinds=INSTANT_OPERATIONS, max_group=self.max_group)
        self.learn_stats_ = LearnStats()
        self.store_ = learn(exprs, space, self.budget, self.learn_stats_)
        return self

    def transform(self, X) -> list:
        """NormalizationResult per expression."""
        check_is_fitted(self, "store_")
        exprs = check_expressions(X, lexicon=self.lexicon_)
        return [try_normalize(e.tokens, e.dct, self.store_, self.lexicon_, self.beam) for e in exprs]

    def predict(self, X) -> np.ndarray:
        """Normalized value strings; None where nothing applied."""
        return np.array([r.value for r in self.transform(X)], dtype=object)

    def report(self, X, y=None) -> EvalReport:
        check_is_fitted(self, "store_")
        return evaluate(self.store_, check_expressions(X, y, self.lexicon_), self.lexicon_)

    def score(self, X, y=None) -> float:
        """Value accuracy on gold mentions."""
        return self.report(X, y).value_accuracy
