import pytest
from hypothesis import given, strategies as st

from geoxform.fiber import (PRIME31, ROT13, UNIT, GeneratorSet, GroupElement, Rot13Element, act, compose,
                            generators_from_dict, group_distance, inverse, rot13, rot13_apply,
                            rot13_distance, shift_at, solve_transporter)
from geoxform.space import ALPHABET, InvalidInput, Sequence, parse_word

from oracles import cayley_distance, strip

words = st.binary(max_size=6).map(lambda b: bytes(ALPHABET[x % 96] for x in b)).map(strip)
elements = st.dictionaries(st.integers(0, 7), st.integers(0, 95), max_size=5).map(GroupElement)


def test_transporter_example():
    g = solve_transporter("ABCD", "ACD")
    assert g.signed() == (0, 1, 1, -37)
    assert act(g, "ABCD").word == b"ACD"


def test_four_31_shifts_give_backtick_abc():
    g = GroupElement()
    for k in range(4):
        g = compose(GroupElement.unit(k, 31), g)
    assert act(g, "ABCD").word == b"`abc"


def test_unit_shift_wraps_to_null():
    assert act(GroupElement.unit(0), "~").word == b""
    assert act(GroupElement.unit(1), "a~").word == b"a"
    assert act(GroupElement.unit(0), "").word == b" "
    assert act(GroupElement(), "xyz").word == b"xyz"


def test_group_arithmetic():
    g = GroupElement({0: 5, 3: 31})
    assert compose(g, inverse(g)).is_identity()
    assert compose(GroupElement.unit(2), GroupElement.unit(2))[2] == 2
    assert inverse(GroupElement.unit(0, 31))[0] == 65
    assert GroupElement({0: 96}).is_identity()
    assert GroupElement.from_dict(g.to_dict()) == g
    with pytest.raises(InvalidInput):
        GroupElement({-1: 3})


def test_word_metric_examples():
    ident = GroupElement()
    assert group_distance(ident, GroupElement.unit(0, 32)) == 32
    assert group_distance(ident, GroupElement.unit(0, 95)) == 1
    g = GroupElement({1: 40, 4: 7})
    assert group_distance(g, g) == 0


@pytest.mark.parametrize("gens", [UNIT, PRIME31, GeneratorSet(1, symmetric=False), GeneratorSet(31, False)])
def test_word_metric_matches_cayley_bfs(gens):
    for r in range(96):
        assert group_distance(GroupElement(), GroupElement.unit(0, r), gens) == \
            cayley_distance(r, gens.step, gens.symmetric)


def test_31_generates_the_cycle():
    seen = {(31 * k) % 96 for k in range(96)}
    assert len(seen) == 96
    x = parse_word("A")
    orbit = set()
    for _ in range(96):
        orbit.add(x)
        x = shift_at(x, 0, 31)
    assert len(orbit) == 96


def test_non_coprime_step_rejected():
    with pytest.raises(InvalidInput):
        GeneratorSet(2)
    with pytest.raises(InvalidInput):
        GeneratorSet(96)


def test_generator_moves_include_effective_append():
    moves = {(j, s): y.word for j, s, y in UNIT.moves(parse_word("a"))}
    assert moves[(1, 1)] == b"a "
    assert moves[(0, 1)] == b"b"
    assert (1, -1) in moves  # NULL -> 126
    assert moves[(1, -1)] == b"a~"


@given(elements, elements, words)
def test_action_law(g, h, x):
    assert act(compose(g, h), x) == act(g, act(h, x))


@given(words, words)
def test_transporter_carries_x_to_y(x, y):
    assert act(solve_transporter(x, y), x) == parse_word(y)


@given(elements)
def test_word_metric_triangle_and_symmetry(g):
    h = GroupElement({0: 17, 2: 50})
    ident = GroupElement()
    assert group_distance(g, h) == group_distance(h, g)
    assert group_distance(ident, h) <= group_distance(ident, g) + group_distance(g, h)


def test_rot13_examples():
    assert rot13("tang") == b"gnat"
    e = Rot13Element([0, 2])
    assert rot13_apply(e, rot13_apply(e, "hello")) == b"hello"
    assert rot13_apply(Rot13Element(), "hello") == b"hello"
    assert rot13_apply(e, "abc") == b"nbp"
    with pytest.raises(InvalidInput):
        rot13_apply(e, "Abc")
    assert rot13_distance(Rot13Element([0, 1]), Rot13Element([1, 2])) == 2


def test_rot13_moves():
    ys = [y.word for _, _, y in ROT13.moves(Sequence(b"ab"))]
    assert ys == [b"nb", b"ao"]
    assert ROT13.symbol_distance(ord("a"), ord("n")) == 1
    assert ROT13.symbol_distance(ord("a"), ord("b")) is None


def test_generator_serialization():
    assert generators_from_dict(PRIME31.to_dict()) == PRIME31
    assert generators_from_dict(ROT13.to_dict()) is ROT13
    assert generators_from_dict(None) is None
