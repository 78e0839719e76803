import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timexrules.errors import KindConflict, Unnormalizable
from timexrules.lexicon import tokenize
from timexrules.normalizer import (
    DIRECT,
    FAILED,
    SEGMENTED,
    explain,
    merge,
    normalize,
    segment,
    segment_covers,
    try_normalize,
)
from timexrules.operations import execute, format_sequence
from timexrules.rules import Rule, RuleStore
from timexrules.temporal import Duration, parse_timex_value

P = parse_timex_value
DCT = "2021-05-17"


def rule(line):
    return Rule.from_line(line)


def store(*lines):
    return RuleStore(rule(line) for line in lines)


LAST_MONTH = "last MONTH:$1\tInstant\t(ToLast[year],ModifyEnum[$1])\t3\t3"
THIS_UNIT = "this TIME_UNIT:$1\tInstant\t(Equal[$1])\t5\t5"
MONTH = "MONTH:$1\tInstant\t(ModifyEnum[$1])\t9\t9"
YEAR_NUM = "NUM:$1\tInstant\t(ModifyVal[$1,year])\t4\t4"
MONTH_NUM = "MONTH:$1 NUM:$2\tInstant\t(ModifyVal[$2,year],ModifyEnum[$1])\t2\t2"


def test_direct_rule():
    res = normalize("last october", DCT, store(LAST_MONTH))
    assert (res.timex_type, res.value, res.via) == ("DATE", "2020-10", DIRECT)
    assert [str(r.pattern) for r in res.rules_used] == ["last MONTH:$1"]


def test_this_month():
    res = normalize("this month", DCT, store(THIS_UNIT))
    assert (res.timex_type, res.value) == ("DATE", "2021-05")


def test_unseen_pattern():
    with pytest.raises(Unnormalizable) as info:
        normalize("zzz unknown", DCT, store(LAST_MONTH))
    assert info.value.result.cause == "unseen_pattern"
    assert try_normalize("zzz unknown", DCT, store(LAST_MONTH)).via == FAILED


def test_reference_time_must_be_a_full_date():
    with pytest.raises(ValueError):
        normalize("last october", "2021-05", store(LAST_MONTH))


# -- segmentation -----------------------------------------------------------

def test_segment_in_october_2014():
    s = store(MONTH, YEAR_NUM)
    used = segment(tokenize("in october 2014"), s)
    assert [str(r.pattern) for r in used] == ["MONTH:$1", "NUM:$1"]
    res = normalize("in october 2014", DCT, s)
    assert (res.value, res.via) == ("2014-10", SEGMENTED)


def test_full_match_is_a_singleton_cover():
    s = store(MONTH, YEAR_NUM, MONTH_NUM)
    assert [str(r.pattern) for r in segment(tokenize("october 2014"), s)] == ["MONTH:$1 NUM:$2"]


def test_stop_word_fills_a_gap():
    assert [str(r.pattern) for r in segment(tokenize("october -"), store(MONTH))] == ["MONTH:$1"]


def test_stop_words_alone_are_not_a_cover():
    assert segment(tokenize("of the"), store(MONTH)) == []
    with pytest.raises(Unnormalizable):
        normalize("of the", DCT, store(MONTH))


def test_uncovered_token_means_no_cover():
    assert segment(tokenize("october zzz"), store(MONTH)) == []
    assert segment_covers([], store(MONTH)) == []


# -- merge ------------------------------------------------------------------

def test_merge_sorts_the_union():
    month, year = rule(MONTH), rule(YEAR_NUM)
    ops = merge([month, year], [{1: tokenize("october")[0].value_of("MONTH")}, {1: 2014}])
    assert format_sequence(ops) == "(ModifyVal[2014,year], ModifyEnum[October])"
    assert execute(ops, P(DCT)) == P("2014-10")


def test_merge_single_rule_is_unchanged():
    r = rule("today\tInstant\t(Equal[dayOfMonth])\t1\t1")
    assert merge([r], [{}]) == r.operations


def test_merge_durations():
    a = rule("a year\tDuration\t(Add[1,year])\t1\t1")
    b = rule("two months\tDuration\t(Add[2,month])\t1\t1")
    assert execute(merge([b, a], [{}, {}]), P(DCT)) == P("P1Y2M")


def test_merge_refuses_mixed_kinds():
    a = rule("a year\tDuration\t(Add[1,year])\t1\t1")
    with pytest.raises(KindConflict):
        merge([a, rule(MONTH)], [{}, {1: tokenize("may")[0].value_of("MONTH")}])


# -- fall-through -----------------------------------------------------------

def test_falls_through_to_next_direct_rule():
    # the day reading is ranked first but 2014 is no day of the month
    s = store("NUM:$1\tInstant\t(ModifyVal[$1,dayOfMonth])\t8\t8", YEAR_NUM)
    res = normalize("2014", DCT, s)
    assert (res.value, res.via) == ("2014", DIRECT)
    assert res.rules_used[0].ops_text == "(ModifyVal[$1,year])"


def test_conflicting_cover_gives_way_to_the_next():
    s = store("october\tDuration\t(Add[1,month])\t20\t20", MONTH, YEAR_NUM)
    res = normalize("october 2014", DCT, s)
    assert (res.value, res.via) == ("2014-10", SEGMENTED)


def test_exec_error_cause():
    s = store("NUM:$1\tInstant\t(ModifyVal[$1,dayOfMonth])\t8\t8")
    with pytest.raises(Unnormalizable) as info:
        normalize("2014", DCT, s)
    assert info.value.result.cause == "exec_error"


def test_explain():
    res = normalize("last october", DCT, store(LAST_MONTH))
    assert explain(res) == ("DATE\t2020-10\tvia=direct\t"
                            "last MONTH:$1 -> (ToLast[year], ModifyEnum[$1])")


# -- invariants -------------------------------------------------------------

POOL = [
    MONTH,
    YEAR_NUM,
    LAST_MONTH,
    MONTH_NUM,
    "in NUM:$1\tInstant\t(ModifyVal[$1,year])\t1\t1",
    "last\tApproxRef\t(ApproxRef[Past])\t1\t1",
    "NUM:$1 years\tDuration\t(Add[$1,year])\t5\t5",
    "NUM:$1\tInstant\t(ModifyVal[$1,dayOfMonth])\t6\t6",
    "october 2014\tInstant\t(ModifyVal[1999,year])\t1\t1",
    "october\tDuration\t(Add[1,month])\t7\t7",
    "years\tInstant\t(Equal[year],MakeSet[year])\t2\t2",
]
WORDS = ["in", "october", "2014", "last", "5", "years", "of"]

subsets = st.sets(st.integers(0, len(POOL) - 1))
phrases = st.lists(st.sampled_from(WORDS), min_size=1, max_size=5).map(" ".join)


@settings(max_examples=300, deadline=None)
@given(subsets, st.integers(0, len(POOL) - 1), phrases)
def test_adding_a_rule_never_breaks_normalization(chosen, extra, text):
    before = RuleStore(rule(POOL[i]) for i in chosen)
    after = RuleStore(rule(POOL[i]) for i in chosen | {extra})
    if try_normalize(text, DCT, before).ok:
        assert try_normalize(text, DCT, after).ok


@settings(max_examples=200, deadline=None)
@given(subsets, phrases)
def test_direct_match_uses_one_rule_and_types_are_coherent(chosen, text):
    s = RuleStore(rule(POOL[i]) for i in chosen)
    res = try_normalize(text, DCT, s)
    if not res.ok:
        return
    if res.via == DIRECT:
        assert len(res.rules_used) == 1
    else:
        assert not any(r.bind(tokenize(text)) is not None and
                       _runs(r, text) for r in s)
    value = P(res.value)
    assert (res.timex_type == "SET") == (getattr(value, "set_unit", None) is not None)
    assert (res.timex_type == "DURATION") == isinstance(value, Duration)


def _runs(r, text):
    try:
        execute(r.resolve(r.bind(tokenize(text))), P(DCT))
        return True
    except ValueError:
        return False
