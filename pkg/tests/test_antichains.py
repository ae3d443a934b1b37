import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rosetree.antichains import (
    AntichainKind,
    antichain_limit,
    claim_one_holds,
    classify_antichain,
    extract_monotone,
    inverse_phi,
    inverse_psi,
    is_decreasing_subtree,
    is_increasing_subtree,
    meet_chain,
    meets_form_chain,
    phi,
    psi,
    random_antichain,
    random_monotone_subtree,
)
from rosetree.errors import NotAntichain, NotIncreasing, NotIncreasingSubtree, TooShort
from rosetree.subtrees import NodeTree, SubtreeGenerator
from rosetree.tree_core import Branch, comparable, converges_to, Tri, lex_less, meet

from conftest import SEED

INC, DEC, NEITHER = AntichainKind.INCREASING, AntichainKind.DECREASING, AntichainKind.NEITHER


def brute_kind(seq):
    """Direct reading of the three conditions over all index pairs and triples."""
    n = len(seq)
    lengths = all(len(seq[a]) < len(seq[b]) for a in range(n) for b in range(a + 1, n))
    meets = all(
        len(seq[a]) <= len(meet(seq[b], seq[c]))
        for a, b, c in itertools.combinations(range(n), 3)
    )
    if not (lengths and meets):
        return NEITHER
    if all(lex_less(seq[a], seq[b]) for a, b in itertools.combinations(range(n), 2)):
        return INC
    if all(lex_less(seq[b], seq[a]) for a, b in itertools.combinations(range(n), 2)):
        return DEC
    return NEITHER


def brute_longest(seq):
    best = 0
    for r in range(len(seq), 0, -1):
        for sub in itertools.combinations(seq, r):
            ordered = sorted(sub, key=len)
            if r == 1 or brute_kind(ordered) is not NEITHER:
                return r
    return best


def test_classify_examples():
    assert classify_antichain(["10", "110", "1110"]) is INC
    assert classify_antichain(["01", "001", "0001"]) is DEC
    assert classify_antichain(["01", "10", "110"]) is NEITHER


def test_classify_errors():
    with pytest.raises(NotAntichain):
        classify_antichain(["1", "10", "0"])
    with pytest.raises(TooShort):
        classify_antichain(["1"])


@given(st.integers(0, 10**6))
def test_classify_matches_brute_oracle(s):
    r = random.Random(s)
    seq = random_antichain(r, r.randint(2, 6), 7)
    if r.random() < 0.7:
        seq.sort(key=len)
    assert classify_antichain(seq) is brute_kind(seq)


def test_extract_examples():
    six = ["01", "10", "001", "110", "0001", "1110"]
    kind, sub = extract_monotone(six)
    assert len(sub) == 3
    assert classify_antichain(sub) is kind
    whole = ["10", "110", "1110", "11110"]
    assert extract_monotone(whole) == (INC, whole)
    with pytest.raises(TooShort):
        extract_monotone(["0", "1"])


@given(st.integers(0, 10**6))
def test_extract_is_optimal_and_valid(s):
    r = random.Random(s)
    seq = random_antichain(r, r.randint(3, 9), 8)
    kind, sub = extract_monotone(seq)
    assert set(sub) <= set(seq)
    assert len(sub) == brute_longest(seq)
    if len(sub) >= 2:
        assert classify_antichain(sub) is kind


def test_exhaustive_and_pipeline_agree(rng):
    for _ in range(150):
        seq = random_antichain(rng, rng.randint(3, 14), 12)
        ke, se = extract_monotone(seq, method="exhaustive")
        kp, sp = extract_monotone(seq, method="pipeline")
        assert len(se) == len(sp)
        assert classify_antichain(sp) is kp


def test_limit_examples():
    assert antichain_limit(["10", "110", "1110"]) == "111"
    assert antichain_limit(["01", "001", "0001"]) == "000"
    # a length-two sequence fixes the limit up to the stretch of 1s after the meet
    assert antichain_limit(["10", "110"]) == "11"


def test_limit_refuses_non_monotone():
    with pytest.raises(NotIncreasing):
        antichain_limit(["01", "10", "110"])


def test_limit_refines_along_the_sequence(rng):
    for _ in range(100):
        S = random_monotone_subtree(rng, 6, increasing=rng.random() < 0.5)
        seq = phi(S) if is_increasing_subtree(S) else psi(S)
        p = antichain_limit(seq[:4])
        # the longer sequence only refines the limit
        assert antichain_limit(seq).startswith(p) or p.startswith(antichain_limit(seq))
        assert antichain_limit(seq).startswith(meet_chain(seq)[-1])


def test_limit_consistent_with_convergence():
    seq = ["10", "110", "1110", "11110", "111110"]
    assert antichain_limit(seq) == "11111"
    assert converges_to(seq, Branch("", "1"), 4) is Tri.YES


def test_phi_example():
    S = NodeTree(["1", "10", "11", "100", "110", "111"])
    assert is_increasing_subtree(S)
    assert phi(S)[:2] == ["10", "110"]
    assert classify_antichain(phi(S)) is INC


def test_psi_on_mirror():
    flip = lambda u: u.translate(str.maketrans("01", "10"))  # noqa: E731
    S = NodeTree(flip(u) for u in ["1", "10", "11", "100", "110", "111"])
    assert is_decreasing_subtree(S)
    assert classify_antichain(psi(S)) is DEC


def test_phi_rejects_wrong_subtree():
    S = NodeTree(["1", "10", "11", "100", "101", "110"])
    with pytest.raises(NotIncreasingSubtree):
        phi(S)


def test_inverse_phi_example():
    S = inverse_phi(["10", "110", "1110"])
    assert S.levels[0] == ["1"]
    assert S.levels[1] == ["10", "11"]
    assert is_increasing_subtree(S)
    assert claim_one_holds(["10", "110", "1110"])


@pytest.mark.parametrize("increasing", [True, False])
def test_round_trip(rng, increasing):
    fwd, back = (phi, inverse_phi) if increasing else (psi, inverse_psi)
    for _ in range(40):
        S0 = random_monotone_subtree(rng, 6, increasing=increasing)
        seq = fwd(S0)
        S = back(seq)
        assert fwd(S)[: len(seq) - 1] == seq[:-1]


def test_witness_structure(rng):
    for _ in range(60):
        inc = rng.random() < 0.5
        S = random_monotone_subtree(rng, 6, increasing=inc)
        seq = phi(S) if inc else psi(S)
        assert claim_one_holds(seq)
        assert meets_form_chain(seq)


def test_hereditary(rng):
    for _ in range(30):
        inc = rng.random() < 0.5
        S = random_monotone_subtree(rng, 5, increasing=inc)
        seq = phi(S) if inc else psi(S)
        kind = INC if inc else DEC
        for r in (2, 3, 4):
            for sub in itertools.combinations(seq, r):
                assert classify_antichain(list(sub)) is kind


def test_coherence_with_subtree(rng):
    T = SubtreeGenerator("1", (("01", "10"), ("0", "1")))
    for _ in range(60):
        pre = random_antichain(rng, rng.randint(2, 5), 6)
        pre.sort(key=len)
        seq = [T.image(p) for p in pre]
        assert classify_antichain(seq, T) is classify_antichain(pre) is classify_antichain(seq)


def test_random_antichain_is_antichain():
    r = random.Random(SEED)
    seq = random_antichain(r, 20, 10)
    assert len(seq) == 20
    assert not any(comparable(a, b) for a, b in itertools.combinations(seq, 2))
