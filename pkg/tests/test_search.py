import pytest
from hypothesis import given, settings, strategies as st

from geoxform.fiber import PRIME31, ROT13, UNIT, GeneratorSet
from geoxform.search import (BudgetExceeded, GoalSpec, MoveConfig, ReplayError, Step, TransformScript,
                             canonical_goal, find_transform, insdel_config, replay, rot13_config, rot13_goal,
                             rot13_objective)
from geoxform.space import GENERAL_COSTS, INSDEL_COSTS, InvalidInput

from oracles import dijkstra_to_targets

SHIFT_THEN_EDIT = TransformScript(b"ABCD", b"abcd", [
    Step("V", "shift31", 0, 31, 1),
    Step("V", "shift31", 1, 31, 1),
    Step("V", "shift31", 2, 31, 1),
    Step("V", "shift31", 3, 31, 1),
    Step("H", "delete", 0, None, 1),
    Step("H", "insert", 3, ord("d"), 1),
])


def test_insdel_only_costs_eight():
    s = find_transform("ABCD", "abcd", insdel_config())
    assert s.total_cost == 8
    assert (s.vertical_count, s.horizontal_count) == (0, 8)
    assert replay(s, "ABCD") == b"abcd"


def test_shift31_script_of_cost_six_replays():
    assert SHIFT_THEN_EDIT.total_cost == 6
    assert replay(SHIFT_THEN_EDIT, "ABCD") == b"abcd"
    # intermediate after the four shifts
    head = TransformScript(b"ABCD", b"`abc", SHIFT_THEN_EDIT.steps[:4])
    assert replay(head, "ABCD") == b"`abc"


def test_shift31_optimum_is_five():
    # deleting first leaves only three symbols to shift
    s = find_transform("ABCD", "abcd", insdel_config("shift31"))
    assert s.total_cost == 5
    assert (s.vertical_count, s.horizontal_count) == (3, 2)
    assert replay(s, "ABCD") == b"abcd"
    oracle = dijkstra_to_targets(b"ABCD", [b"abcd"], symbols=b"abcd", max_len=5, vstep=31)
    assert oracle[b"abcd"] == 5


def test_lowercasing_one_character():
    assert find_transform("A", "a", insdel_config("unit")).total_cost == 2
    steps = find_transform("A", "a", insdel_config("unit")).steps
    assert [st.op for st in steps] == ["delete", "insert"]
    vertical_only = insdel_config("unit", horizontal=False)
    assert find_transform("A", "a", vertical_only).total_cost == 32


def test_identity_is_free():
    for cfg in (insdel_config(), insdel_config("unit"), MoveConfig(costs=GENERAL_COSTS, vertical=PRIME31)):
        s = find_transform("x", "x", cfg)
        assert s.total_cost == 0 and s.steps == []


@pytest.mark.parametrize("w", ["gnat", "tang", "robe", "serf", "thug"])
def test_rot13_fixed_points(w):
    assert rot13_objective(w) == 0
    s = find_transform(w, rot13_goal(), rot13_config())
    assert s.total_cost == 0 and s.steps == []


def test_rot13_objective_examples():
    assert rot13_objective("aa") == 2
    assert rot13_objective("") == 0
    with pytest.raises(InvalidInput):
        rot13_objective("Ab")


def test_rot13_search_flips_one_character():
    s = find_transform("aa", rot13_goal(), rot13_config())
    assert s.total_cost == 1
    assert rot13_objective(replay(s, "aa")) == 0
    # without substitutions the flip is the only cost-1 repair
    s = find_transform("aa", rot13_goal(), rot13_config(costs=INSDEL_COSTS))
    assert s.total_cost == 1
    assert s.steps[0].family == "V"


@pytest.mark.parametrize("w,expected", [("ABCD", "abcd"), ("abcd", "abcd"), ("A, b!", "a b"),
                                        (b"x\x00Y", "xy")])
def test_canonical_goal(w, expected):
    assert canonical_goal(w) == expected.encode()


def test_budget_exhaustion_carries_best_so_far():
    cfg = insdel_config("unit", max_expansions=3)
    with pytest.raises(BudgetExceeded) as info:
        find_transform("ABCD", "abcd", cfg)
    best = info.value.best
    assert best is not None and best.total_cost == 8
    assert replay(best, "ABCD") == b"abcd"


def test_unreachable_target():
    cfg = MoveConfig(costs=INSDEL_COSTS, symbols=b"ab")
    with pytest.raises(InvalidInput):
        find_transform("a", "c", cfg)


def test_config_validation():
    with pytest.raises(InvalidInput):
        MoveConfig(horizontal=False)
    with pytest.raises(InvalidInput):
        MoveConfig(vertical_step_cost=0)
    cfg = MoveConfig(costs=GENERAL_COSTS, vertical=ROT13, symbols=b"xy")
    assert MoveConfig.from_dict(cfg.to_dict()) == cfg


def test_replay_errors_name_the_step():
    bad = TransformScript(b"ab", b"a", [Step("H", "delete", 0, None, 1), Step("H", "delete", 5, None, 1)])
    with pytest.raises(ReplayError) as info:
        replay(bad, "ab")
    assert info.value.step_index == 1
    with pytest.raises(ReplayError):
        replay(SHIFT_THEN_EDIT, "XYZ")


def test_empty_script_replays_to_start():
    assert replay(TransformScript(b"hi", b"hi", []), "hi") == b"hi"


def test_script_serialization_round_trip():
    s = find_transform("ABCD", "abcd", insdel_config("shift31"))
    t = TransformScript.loads(s.dumps())
    assert t == s
    assert '"version": 1' in s.dumps()


def test_ties_are_broken_deterministically():
    a = find_transform("ab", "ba", insdel_config())
    b = find_transform("ab", "ba", insdel_config())
    assert a.dumps() == b.dumps()


def test_vertical_step_cost_is_respected():
    cfg = insdel_config("shift31", vertical_step_cost=3)
    assert find_transform("ABCD", "abcd", cfg).total_cost == 8


sub_words = st.lists(st.sampled_from(b"abc"), max_size=3).map(bytes)


@settings(max_examples=40, deadline=None)
@given(sub_words, sub_words)
def test_enabling_vertical_moves_never_costs_more(a, b):
    base = find_transform(a, b, MoveConfig(costs=INSDEL_COSTS, symbols=b"abc", max_length=4)).total_cost
    with_v = find_transform(a, b, MoveConfig(costs=INSDEL_COSTS, vertical=UNIT, symbols=b"abc",
                                             max_length=4)).total_cost
    assert with_v <= base


@settings(max_examples=40, deadline=None)
@given(sub_words, sub_words, st.sampled_from([None, 1, 31]))
def test_search_matches_move_graph_oracle(a, b, vstep):
    vertical = None if vstep is None else GeneratorSet(vstep)
    cfg = MoveConfig(costs=GENERAL_COSTS, vertical=vertical, symbols=b"abc", max_length=3)
    s = find_transform(a, b, cfg)
    assert replay(s, a, cfg.max_length) == b
    want = dijkstra_to_targets(a, [b], symbols=b"abc", max_len=3, sub=1, vstep=vstep)[b]
    assert s.total_cost == want
