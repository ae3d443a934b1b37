import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rosetree.antichains import random_monotone_subtree
from rosetree.errors import DepthMismatch, InvalidGenerator, NotInSubtree, NotSkew, ParseError
from rosetree.subtrees import (
    ExplicitSubtree,
    NodeTree,
    SubtreeGenerator,
    compose,
    compose_generators,
    parse_explicit,
    parse_generator,
    relative_length,
    relative_meet,
    skew_code,
    skew_isomorphic,
    validate_pairwise,
    validate_regular_dyadic,
)
from rosetree.tree_core import Branch, lex_less, meet, nodes_upto

from conftest import branches, generators, nodes

PAD = SubtreeGenerator("", (("001", "101"),))


def test_materialize_examples():
    ident = SubtreeGenerator.identity()
    assert ident.materialize(2) == ExplicitSubtree.identity(2)
    m = PAD.materialize(1)
    assert m.mapping == {"": "", "0": "001", "1": "101"}


def test_invalid_generators():
    for pair in (("10", "01"), ("0", "11"), ("", "")):
        with pytest.raises(InvalidGenerator):
            SubtreeGenerator("", (pair,))
    # (01, 10) meets the stated word rules and is accepted
    assert validate_regular_dyadic(SubtreeGenerator("", (("01", "10"),)).materialize(4))


def test_validate_examples():
    assert validate_regular_dyadic(PAD.materialize(4))
    uneven = ExplicitSubtree({"": "", "0": "00", "1": "1"}, 1)
    assert not validate_regular_dyadic(uneven)
    swapped = ExplicitSubtree({"": "", "0": "1", "1": "0"}, 1)
    assert not validate_regular_dyadic(swapped)


def test_compose_examples():
    T = PAD.materialize(2)
    assert compose(ExplicitSubtree.identity(2), PAD.materialize(6)).mapping == T.mapping
    assert compose(T, ExplicitSubtree.identity(6)) == T
    double = compose_generators(PAD, PAD)
    assert double.pairs == (("001001101", "101001101"),)
    assert validate_regular_dyadic(double.materialize(3))
    assert compose(PAD.materialize(2), PAD.materialize(6)).mapping == double.materialize(2).mapping


def test_relative_examples():
    i = PAD.image
    assert relative_meet(i("00"), i("01"), PAD) == i("0")
    assert relative_length(i("11"), PAD) == 2
    with pytest.raises(NotInSubtree):
        relative_length("0", PAD)


def test_skew_examples():
    chain = NodeTree(["1" * n for n in range(5)])
    assert skew_code(chain) == ((1,),) * 4
    fork = NodeTree(["", "0", "1", "00", "10", "000", "100"])
    assert skew_code(fork) == ((2,), (1, 1), (1, 1))
    S = random_monotone_subtree(random.Random(3), 4, increasing=True)
    assert all(counts[-1] == 2 for counts in skew_code(S))
    with pytest.raises(NotSkew):
        skew_code(NodeTree(["", "0", "1", "00", "01", "10", "11"]))


def test_explicit_errors():
    with pytest.raises(DepthMismatch):
        ExplicitSubtree({"": ""}, 1)
    with pytest.raises(DepthMismatch):
        ExplicitSubtree.identity(1).image("000")
    with pytest.raises(ParseError):
        parse_explicit("0 => 1")
    with pytest.raises(ParseError):
        parse_generator("001,101")


# -- properties ------------------------------------------------------------


@given(generators(), st.integers(0, 4))
def test_generators_are_regular_dyadic(g, depth):
    m = g.materialize(depth)
    assert validate_regular_dyadic(m)
    if depth <= 3:
        assert validate_pairwise(m)


@given(generators(), nodes)
def test_preimage_inverts_image(g, t):
    assert g.preimage(g.image(t)) == t
    assert g.contains(g.image(t))


@given(generators(), nodes, nodes)
def test_image_preserves_order(g, a, b):
    ia, ib = g.image(a), g.image(b)
    assert b.startswith(a) == ib.startswith(ia)
    if not (a.startswith(b) or b.startswith(a)):
        assert lex_less(a, b) == lex_less(ia, ib)
        assert relative_meet(ia, ib, g) == g.image(meet(a, b))


@given(generators(), branches)
def test_image_branch_is_limit_of_images(g, sigma):
    image = g.image_branch(sigma)
    assert g.image(sigma.take(12)) == image.take(len(g.image(sigma.take(12))))


@given(generators(), generators(), generators(), nodes)
def test_compose_generators_associative(a, b, c, t):
    left = compose_generators(compose_generators(a, b), c)
    right = compose_generators(a, compose_generators(b, c))
    assert left.image(t) == right.image(t) == c.image(b.image(a.image(t)))


@given(generators())
def test_identity_is_unit(g):
    ident = SubtreeGenerator.identity()
    for t in nodes_upto(4):
        assert compose_generators(ident, g).image(t) == g.image(t)
        assert compose_generators(g, ident).image(t) == g.image(t)


@given(generators())
def test_generator_text_round_trip(g):
    assert parse_generator(g.to_text()) == g
    assert parse_generator(str(g)) == g
    m = g.materialize(3)
    assert parse_explicit(m.to_text()) == m


@given(st.integers(0, 10 ** 6), st.booleans())
def test_monotone_subtree_levels_and_isomorphism(seed, increasing):
    rng = random.Random(seed)
    S = random_monotone_subtree(rng, 5, increasing=increasing)
    T = random_monotone_subtree(rng, 5, increasing=increasing)
    assert [len(lv) for lv in S.levels] == [n + 1 for n in range(6)]
    assert skew_code(S) == skew_code(T)
    assert skew_isomorphic(S, T)
