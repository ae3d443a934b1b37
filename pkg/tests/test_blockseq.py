import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rosetree.blockseq import (
    antichain_map,
    beta,
    beta_indices,
    chain_map,
    converges_toward,
    dominated,
    format_beta,
    format_blockseq,
    format_finseq,
    is_fan,
    is_initial,
    make_blockseq,
    pairwise_incomparable,
    parse_blockseq,
    parse_finseq,
    singletons,
    span_member,
    union,
    verify_c1,
    verify_c2,
    verify_c3,
)
from rosetree.errors import DomainError, ParseError, TooFewBlocks
from rosetree.tree_core import nodes_upto

finseqs = st.lists(st.integers(0, 60), unique=True, max_size=8).map(lambda xs: tuple(sorted(xs)))


@st.composite
def block_seqs(draw, min_blocks=3, max_blocks=15):
    n = draw(st.integers(min_blocks, max_blocks))
    out, k = [], 0
    for _ in range(n):
        k += draw(st.integers(0, 2))
        width = draw(st.integers(1, 3))
        block = sorted(draw(st.sets(st.integers(k, k + 2 * width), min_size=1, max_size=width)))
        out.append(tuple(block))
        k = block[-1] + 1
    return make_blockseq(out)


def refinement(rng: random.Random, n: int):
    """A random block sequence: consecutive runs of naturals with gaps."""
    out, k = [], 0
    for _ in range(n):
        k += rng.randint(0, 2)
        width = rng.randint(1, 3)
        out.append(tuple(sorted(rng.sample(range(k, k + 2 * width), width))))
        k = out[-1][-1] + 1
    return make_blockseq(out)


# -- text forms ------------------------------------------------------------


@given(finseqs)
def test_finseq_round_trip(s):
    assert parse_finseq(format_finseq(s)) == s


@given(block_seqs())
def test_blockseq_round_trip(b):
    assert parse_blockseq(format_blockseq(b)) == b


@pytest.mark.parametrize("bad", ["1,1", "3,2", "a", "-1,2", "1,,2"])
def test_finseq_errors(bad):
    with pytest.raises(ParseError):
        parse_finseq(bad)


def test_blockseq_errors():
    with pytest.raises(ParseError):
        parse_blockseq("0,1\n1,2\n")
    with pytest.raises(DomainError):
        make_blockseq([(0,), ()])


# -- spans -----------------------------------------------------------------


def test_span_member_examples():
    b = tuple((2 * n, 2 * n + 1) for n in range(5))
    assert span_member(b, (0, 1, 4, 5)) == (0, 2)
    assert span_member(b, b[0]) == (0,)
    assert span_member(b, (0, 2)) is None


@given(block_seqs(), st.data())
def test_span_member_recovers_index_sets(b, data):
    F = sorted(data.draw(st.sets(st.integers(0, len(b) - 1), max_size=len(b))))
    assert span_member(b, union([b[k] for k in F])) == tuple(F)


# -- chain and antichain maps ----------------------------------------------


def test_map_examples():
    b = singletons(9)
    assert chain_map(b)[:3] == [(0,), (0, 1), (0, 1, 2)]
    assert antichain_map(b)[:2] == [(0, 2), (0, 1, 2, 3, 5)]
    with pytest.raises(TooFewBlocks):
        antichain_map(singletons(2))
    with pytest.raises(TooFewBlocks):
        chain_map(())


def test_maps_on_random_refinements():
    rng = random.Random(7)
    for b in [singletons(30)] + [refinement(rng, 30) for _ in range(20)]:
        chain = chain_map(b)
        assert all(is_initial(a, c) and a != c for a, c in zip(chain, chain[1:]))
        anti = antichain_map(b)
        assert pairwise_incomparable(anti)
        assert converges_toward(anti, chain[-1], 5)


def test_converges_toward_rejects_stray_terms():
    assert not converges_toward([(0, 2), (1, 3)], (0, 1, 2), 1)


# -- the beta recursion ----------------------------------------------------


def test_beta_examples():
    b = singletons(12)
    assert beta("00", b) == [(0,), (1,), (2,), (3,), (4,), (5,)]
    assert beta("01", b) == [(0,), (1,), (2,), (3,), (5,)]
    assert format_beta(beta("", b)) == "ε"
    assert format_beta(beta("01", b)) == "0 | 1 | 2 | 3 | 5"
    with pytest.raises(TooFewBlocks):
        beta("0000", singletons(5))


def _beta_by_rules(s: str) -> tuple[int, ...]:
    """Indices of β_s rebuilt left to right from the four appending rules."""
    if not s:
        return ()
    idx = [0, 1, 2] if s[0] == "0" else [0, 2]
    for prev, bit in zip(s, s[1:]):
        n = idx[-1]
        steps = {("0", "0"): (1, 2, 3), ("0", "1"): (1, 3), ("1", "0"): (1, 2, 3, 4), ("1", "1"): (1, 2, 4)}
        idx += [n + d for d in steps[(prev, bit)]]
    return tuple(idx)


def test_beta_matches_iterative_rebuild():
    for s in nodes_upto(9):
        assert beta_indices(s) == _beta_by_rules(s)


def test_conditions_c1_c2():
    b = singletons(60)
    assert all(verify_c1(s, b) for s in nodes_upto(8))
    assert verify_c2(8)


def test_condition_c3():
    b = singletons(80)
    rng = random.Random(3)
    for s in nodes_upto(6):
        assert verify_c3(s, b, 20, rng)


def test_condition_c3_on_refinement():
    b = refinement(random.Random(11), 80)
    assert all(verify_c3(s, b, 10, random.Random(0)) for s in nodes_upto(4))


def test_corrupted_beta_fails_c3():
    def corrupt(s):
        return (0, 1) if s == "1" else beta_indices(s)

    assert verify_c3("", singletons(40), 5, beta_fn=corrupt) is False


# -- fans and domination ---------------------------------------------------


def test_fan_examples():
    assert is_fan([(0, 1), (0, 2), (0, 3)]) == ((0,), (1, 2, 3))
    assert is_fan([(0, 3), (0, 2)]) is None
    assert is_fan([(0,), (0, 1)]) is None
    assert is_fan([(0, 1)]) is None


def test_dominated_examples():
    B = list(itertools.combinations(range(6), 3))
    assert dominated(B, 1) == [(0,), (1,), (2,), (3,)]
    chain = chain_map(singletons(6))
    assert dominated(chain, 2) == [(0, 1)]
    assert dominated([(0,)], 3) is None


def test_dominated_on_antichain_images():
    rng = random.Random(5)
    for _ in range(20):
        b = refinement(rng, 18)
        anti = antichain_map(b)
        i0 = b[0]
        for n in range(1, len(i0) + 1):
            assert dominated(anti, n) == [i0[:n]]


@given(st.lists(finseqs, min_size=1, max_size=12), st.integers(1, 4))
def test_dominated_is_a_minimal_cover(B, n):
    w = dominated(B, n)
    long = [t for t in B if len(t) >= n]
    if not long:
        assert w is None
        return
    assert all(any(is_initial(p, t) for p in w) for t in long)
    # every witness is needed: it is the prefix of some member
    assert all(any(t[:n] == p for t in long) for p in w)
