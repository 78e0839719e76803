import random
from collections import Counter

import pytest

from oracles import ORACLE_UNITS, capture_oracle, random_capture_pairs
from timexrules.capture import CaptureTask, OperationSpace, capture, capture_values
from timexrules.errors import NoSequenceFound
from timexrules.lexicon import tokenize
from timexrules.operations import (
    execute,
    format_sequence,
    is_low_redundancy,
    parse_sequence,
    sort_sequence,
)
from timexrules.temporal import parse_timex_value

P = parse_timex_value


def found(base, target, pool=()):
    return {format_sequence(s) for s in capture(CaptureTask(P(base), P(target), tuple(pool))).sequences}


def test_example_last_october():
    got = found("2021-05-17", "2020-10")
    assert "(ToLast[year], ModifyEnum[October])" in got


def test_today_contains_equal_day_and_empty():
    got = found("2021-05-17", "2021-05-17")
    assert "(Equal[dayOfMonth])" in got
    assert "()" in got


def test_duration_target():
    assert found("2021-05-17", "P2M", [2]) == {"(Add[2,month])"}
    assert found("2021-05-17", "P1Y2M", [2, 1]) == {"(Add[1,year], Add[2,month])"}
    with pytest.raises(NoSequenceFound):
        found("2021-05-17", "P2M", [3])


def test_pool_decides_numeric_operations():
    # with no numbers only the weekday route exists; a 5 or a 4 in the
    # expression opens the matching numeric route and nothing else
    assert found("2021-05-17", "2021-05-21") == {"(ModifyEnum[Friday])"}
    with5 = found("2021-05-17", "2021-05-21", [5])
    assert "(ModifyVal[5,dayOfWeek])" in with5
    assert not any("Forward" in s for s in with5)
    assert "(Forward[4,day])" in found("2021-05-17", "2021-05-21", [4])


def test_approximate_reference_and_sets():
    assert found("2021-05-17", "PAST_REF") == {"(ApproxRef[Past])"}
    assert found("2021-05-17", "2021-WXX") == {"(Equal[year], MakeSet[week])"}
    sets = found("2021-05-17", "2014-XX-XX", [2014])
    assert "(ModifyVal[2014,year], MakeSet[day])" in sets
    with pytest.raises(NoSequenceFound):
        found("2021-05-17", "XXXX-WXX")


def test_noon_target():
    assert found("2021-05-17", "2021-05-17T12:00") == {"(ModifyEnum[Noon])"}


def test_unreachable_without_numbers():
    with pytest.raises(NoSequenceFound):
        found("2021-05-17", "1999")
    assert capture_values(P("2021-05-17"), P("1999")) is None
    assert "(ModifyVal[1999,year])" in found("2021-05-17", "1999", [1999])


def test_from_tokens_uses_the_expression_numbers():
    task = CaptureTask.from_tokens(P("2021-05-17"), P("2014-10"), tokenize("october 2014"))
    assert task.numeric_pool == (2014,)
    seqs = {format_sequence(s) for s in capture(task).sequences}
    assert "(ModifyVal[2014,year], ModifyEnum[October])" in seqs


def test_budget_truncates_and_flags():
    full = capture(CaptureTask(P("2021-05-17"), P("2020-10")))
    assert not full.truncated
    cut = capture(CaptureTask(P("2021-05-17"), P("2020-10")), budget=5)
    assert cut.truncated and set(cut.sequences) <= set(full.sequences)


def test_items_report_consumed_pool_values():
    r = capture(CaptureTask(P("2021-05-17"), P("2014-10"), (2014, 3)))
    items = dict(r.items)
    assert items[parse_sequence("(ModifyVal[2014,year], ModifyEnum[October])")] == (2014,)


def test_results_are_sound_sorted_and_deterministic():
    rng = random.Random(1)
    for base, target, pool in random_capture_pairs(40, seed=3):
        try:
            r = capture(CaptureTask(base, target, pool))
        except NoSequenceFound:
            continue
        have = Counter(pool)
        for seq in r.sequences:
            assert execute(seq, base) == target
            assert sort_sequence(seq) == seq
            assert is_low_redundancy(seq, base)
            assert not Counter(n for o in seq for n in o.numbers) - have
        shuffled = list(pool)
        rng.shuffle(shuffled)
        again = capture(CaptureTask(base, target, tuple(shuffled)))
        assert again.sequences == r.sequences


def test_agrees_with_oracle_on_other_seed():
    # the acceptance suite runs 500 pairs; this is a quick second sample
    space = OperationSpace(units=ORACLE_UNITS)
    for base, target, pool in random_capture_pairs(25, seed=99):
        try:
            got = set(capture(CaptureTask(base, target, pool), space).sequences)
        except NoSequenceFound:
            got = set()
        assert got == capture_oracle(base, target, pool), (base, target, pool)


def test_instant_target_needs_instant_base():
    with pytest.raises(NoSequenceFound):
        capture(CaptureTask(P("P2M"), P("2021")))
