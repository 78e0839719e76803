import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from synth import synthesize
from timexrules.errors import EmptyCorpus
from timexrules.estimator import TimexNormalizer, check_expressions

X = [("last october", "2021-05-17"), ("last november", "2021-02-10"), ("last june", "2019-08-01")]
y = ["2020-10", "2020-11", "2018-06"]


def test_params_and_clone():
    est = TimexNormalizer(beam=4)
    assert est.get_params()["beam"] == 4
    est.set_params(max_group=3)
    copy = clone(est)
    assert copy.get_params() == est.get_params() and copy is not est


def test_fit_predict_score_on_pairs():
    est = TimexNormalizer().fit(X, y)
    assert est.store_.by_pattern("last MONTH:$1").ops_text == "(ToLast[year],ModifyEnum[$1])"
    pred = est.predict([("last may", "2021-05-17"), ("zzz", "2021-05-17")])
    assert isinstance(pred, np.ndarray) and list(pred) == ["2020-05", None]
    assert est.score([("last may", "2021-05-17")], ["2020-05"]) == 1.0
    [res] = est.transform([("last may", "2021-05-17")])
    assert res.timex_type == "DATE" and res.via == "direct"


def test_fit_on_annotated_expressions():
    data = synthesize(200, seed=4)
    est = TimexNormalizer().fit(data[:150])
    assert est.score(data[150:]) == 1.0
    assert est.report(data[150:]).total == 50
    assert est.learn_stats_.expressions == 150


def test_not_fitted():
    with pytest.raises(NotFittedError):
        TimexNormalizer().predict(X)


def test_validation_errors():
    with pytest.raises(ValueError):
        TimexNormalizer().fit(X, y[:2])
    with pytest.raises(ValueError):
        TimexNormalizer().fit([("last may", "2021-05")], ["2020-05"])
    with pytest.raises(ValueError):
        TimexNormalizer().fit(["last may"], ["2020-05"])
    with pytest.raises(ValueError):
        TimexNormalizer(beam=0).fit(X, y)
    with pytest.raises(EmptyCorpus):
        TimexNormalizer().fit([], [])


def test_check_expressions_types_gold_values():
    exprs = check_expressions([("for two months", "2021-05-17"), ("x", "2021-05-17")],
                              ["P2M", "XXXX-XX"])
    assert exprs[0].gold_type == "DURATION"
    assert exprs[1].skipped and exprs[1].gold_type == ""
