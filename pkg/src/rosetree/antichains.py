"""Increasing and decreasing antichains of a regular dyadic subtree.

All relative notions (|t|_T, ∧_T) are computed through the embedding's
preimages, where they become plain lengths and meets.
"""
from __future__ import annotations

import enum
import random
from typing import Optional, Sequence

from .errors import (
    NotAntichain,
    NotDecreasingSubtree,
    NotIncreasing,
    NotIncreasingSubtree,
    NotInSubtree,
    TooShort,
)
from .subtrees import Embedding, NodeTree, SubtreeGenerator, skew_code
from .tree_core import comparable, meet

FULL_TREE = SubtreeGenerator.identity()
EXHAUSTIVE_LIMIT = 16


class AntichainKind(enum.Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    NEITHER = "Neither"


def _preimages(seq: Sequence[str], T: Embedding) -> list[str]:
    out = []
    for t in seq:
        out.append(T.preimage(t))
    return out


def _check_antichain(pre: Sequence[str]) -> None:
    for i in range(len(pre)):
        for j in range(i + 1, len(pre)):
            if comparable(pre[i], pre[j]):
                raise NotAntichain(f"entries {i} and {j} are ⊑-comparable")


def _before(a: str, b: str) -> bool:
    # a ≺ b for incomparable a, b
    return a < b


def _monotone(pre: Sequence[str], increasing: bool) -> bool:
    n = len(pre)
    for i in range(n - 1):
        if len(pre[i]) >= len(pre[i + 1]):
            return False
        if _before(pre[i], pre[i + 1]) != increasing:
            return False
    for i in range(n):
        for m in range(i + 1, n):
            for l in range(m + 1, n):
                if len(pre[i]) > len(meet(pre[m], pre[l])):
                    return False
    return True


def _kind(pre: Sequence[str]) -> AntichainKind:
    if _monotone(pre, True):
        return AntichainKind.INCREASING
    if _monotone(pre, False):
        return AntichainKind.DECREASING
    return AntichainKind.NEITHER


def classify_antichain(seq: Sequence[str], T: Embedding = FULL_TREE) -> AntichainKind:
    if len(seq) < 2:
        raise TooShort("classification needs at least two nodes")
    pre = _preimages(seq, T)
    _check_antichain(pre)
    return _kind(pre)


def meet_chain(seq: Sequence[str], T: Embedding = FULL_TREE) -> list[str]:
    """c_n = t_n ∧_T t_{n+1}."""
    pre = _preimages(seq, T)
    return [T.image(meet(a, b)) for a, b in zip(pre, pre[1:])]


def antichain_limit(seq: Sequence[str], T: Embedding = FULL_TREE) -> str:
    """The longest initial segment of the limit branch fixed by the sequence.

    Any monotone continuation t_N satisfies |t_{N-2}|_T ≤ |t_{N-1} ∧_T t_N|_T,
    so the limit follows t_{N-1} up to that length and then for as long as
    t_{N-1} keeps moving toward the limit (1s for increasing, 0s for
    decreasing sequences).
    """
    kind = classify_antichain(seq, T)
    if kind is AntichainKind.NEITHER:
        raise NotIncreasing("sequence is neither increasing nor decreasing")
    pre = _preimages(seq, T)
    last, k = pre[-1], len(pre[-2])
    stop = "0" if kind is AntichainKind.INCREASING else "1"
    j = k
    while j < len(last) and last[j] != stop:
        j += 1
    return T.image(last[:j])


# -- extraction -----------------------------------------------------------


def _exhaustive(pre: list[str]) -> tuple[AntichainKind, list[int]]:
    order = sorted(range(len(pre)), key=lambda i: (len(pre[i]), pre[i]))
    best: tuple[int, AntichainKind, list[int]] = (0, AntichainKind.INCREASING, [])

    for increasing in (True, False):
        kind = AntichainKind.INCREASING if increasing else AntichainKind.DECREASING
        chosen: list[int] = []

        def grow(start: int) -> None:
            nonlocal best
            if len(chosen) > best[0]:
                best = (len(chosen), kind, list(chosen))
            if len(chosen) + (len(order) - start) <= best[0]:
                return
            for pos in range(start, len(order)):
                i = order[pos]
                if chosen:
                    last = pre[chosen[-1]]
                    if len(last) >= len(pre[i]) or _before(last, pre[i]) != increasing:
                        continue
                    ok = all(
                        len(pre[chosen[a]]) <= len(meet(pre[chosen[b]], pre[i]))
                        for a in range(len(chosen))
                        for b in range(a + 1, len(chosen))
                    )
                    if not ok:
                        continue
                chosen.append(i)
                grow(pos + 1)
                chosen.pop()

        grow(0)
    return best[1], best[2]


def _pipeline(pre: list[str]) -> tuple[AntichainKind, list[int]]:
    """Exact longest monotone subfamily via the three Ramsey stages.

    Stage one orders by relative length.  Stage two keeps pairs whose
    ≺-direction matches.  Stage three reduces the triple condition to a
    running minimum: for a ≺-monotone list of incomparable nodes,
    |t_m ∧ t_l| is the least meet length between consecutive terms from m
    to l, so t_n only has to be no longer than that minimum over the terms
    after it.  A right-to-left dynamic program over (start, size) keeps the
    largest running minimum.
    """
    order = sorted(range(len(pre)), key=lambda i: (len(pre[i]), pre[i]))
    inf = float("inf")
    best: tuple[int, AntichainKind, list[int]] = (0, AntichainKind.INCREASING, [])
    for increasing in (True, False):
        kind = AntichainKind.INCREASING if increasing else AntichainKind.DECREASING
        # table[i][size] = (largest running minimum, successor index)
        table: dict[int, dict[int, tuple[float, Optional[int]]]] = {}
        for pos in range(len(order) - 1, -1, -1):
            i = order[pos]
            row: dict[int, tuple[float, Optional[int]]] = {1: (inf, None)}
            for j in order[pos + 1:]:
                if len(pre[j]) <= len(pre[i]) or _before(pre[i], pre[j]) != increasing:
                    continue
                link = len(meet(pre[i], pre[j]))
                for size, (mm, _) in table[j].items():
                    if len(pre[i]) > mm:
                        continue
                    cand = min(link, mm)
                    if size + 1 not in row or row[size + 1][0] < cand:
                        row[size + 1] = (cand, j)
            table[i] = row
        for i in order:
            size = max(table[i])
            if size > best[0]:
                path, cur, k = [], i, size
                while cur is not None:
                    path.append(cur)
                    cur = table[cur][k][1]
                    k -= 1
                best = (size, kind, path)
    return best[1], best[2]


def extract_monotone(
    seq: Sequence[str], T: Embedding = FULL_TREE, method: str = "auto"
) -> tuple[AntichainKind, list[str]]:
    """A longest sub-family that is increasing or decreasing, listed by length.

    The input is read as a set of nodes; the output is ordered by relative
    length, which is the only order in which it can be monotone.
    """
    if len(seq) < 3:
        raise TooShort("extraction needs at least three nodes")
    pre = _preimages(seq, T)
    _check_antichain(pre)
    if method == "auto":
        method = "exhaustive" if len(pre) < EXHAUSTIVE_LIMIT else "pipeline"
    kind, idx = (_exhaustive if method == "exhaustive" else _pipeline)(pre)
    return kind, [seq[i] for i in idx]


def random_antichain(rng: random.Random, size: int, max_depth: int) -> list[str]:
    """Uniformly random nodes of length 1..max_depth, skipping comparable ones.

    Restarts when early short nodes leave no room for ``size`` nodes.
    """
    while True:
        out: list[str] = []
        for _ in range(100 * size):
            t = "".join(rng.choice("01") for _ in range(rng.randint(1, max_depth)))
            if not any(comparable(t, s) for s in out):
                out.append(t)
                if len(out) == size:
                    return out


# -- increasing / decreasing subtrees -----------------------------------


def _check_monotone_subtree(S: NodeTree, T: Embedding, increasing: bool) -> None:
    err = NotIncreasingSubtree if increasing else NotDecreasingSubtree
    for u in S.nodes:
        try:
            T.preimage(u)
        except NotInSubtree:
            raise err(f"{u!r} is not a node of the ambient tree") from None
    if not S.uniquely_rooted():
        raise err("not uniquely rooted")
    if not S.is_regular():
        raise err("levels are not length-aligned")
    try:
        code = skew_code(S)
    except Exception as exc:
        raise err(str(exc)) from None
    for n, counts in enumerate(code):
        split = len(counts) - 1 if increasing else 0
        if counts[split] != 2:
            raise err(f"level {n} does not split at its ≺-{'max' if increasing else 'min'}imum")


def is_increasing_subtree(S: NodeTree, T: Embedding = FULL_TREE) -> bool:
    try:
        _check_monotone_subtree(S, T, True)
    except NotIncreasingSubtree:
        return False
    return True


def is_decreasing_subtree(S: NodeTree, T: Embedding = FULL_TREE) -> bool:
    try:
        _check_monotone_subtree(S, T, False)
    except NotDecreasingSubtree:
        return False
    return True


def phi(S: NodeTree, T: Embedding = FULL_TREE) -> list[str]:
    """Second-from-top node of each level after the root level."""
    _check_monotone_subtree(S, T, True)
    return [S.levels[n + 1][n] for n in range(S.height)]


def psi(S: NodeTree, T: Embedding = FULL_TREE) -> list[str]:
    """Second-from-bottom node of each level after the root level."""
    _check_monotone_subtree(S, T, False)
    return [S.levels[n + 1][1] for n in range(S.height)]


def _least_extension(p: str, n: int) -> str:
    return p + "0" * (n - len(p))


def _inverse(seq: Sequence[str], T: Embedding, increasing: bool) -> NodeTree:
    if len(seq) < 3:
        raise TooShort("the inverse construction needs at least three nodes")
    want = AntichainKind.INCREASING if increasing else AntichainKind.DECREASING
    if classify_antichain(seq, T) is not want:
        raise NotIncreasing(f"sequence is not {want.value.lower()}")
    P = _preimages(seq, T)
    # c'_n: the ancestor of t_n at the relative length of t_{n-1}
    cp = [None] + [P[n][: len(P[n - 1])] for n in range(1, len(P))]
    levels = [[meet(P[0], P[1])]]
    levels.append([P[0], cp[1]] if increasing else [cp[1], P[0]])
    for n in range(1, len(P) - 1):
        L = len(P[n])
        if increasing:
            rest = [_least_extension(s, L) for s in levels[n][:n]]
            levels.append(rest + [P[n], cp[n + 1]])
        else:
            rest = [_least_extension(s, L) for s in levels[n][1:]]
            levels.append([cp[n + 1], P[n]] + rest)
    return NodeTree(T.image(p) for lv in levels for p in lv)


def inverse_phi(seq: Sequence[str], T: Embedding = FULL_TREE) -> NodeTree:
    """An increasing subtree whose phi reproduces seq up to its last term."""
    return _inverse(seq, T, True)


def inverse_psi(seq: Sequence[str], T: Embedding = FULL_TREE) -> NodeTree:
    return _inverse(seq, T, False)


def random_monotone_subtree(
    rng: random.Random, depth: int, T: Embedding = FULL_TREE, increasing: bool = True, max_step: int = 3
) -> NodeTree:
    """A random increasing (or decreasing) subtree of T with levels 0..depth."""
    rand = lambda n: "".join(rng.choice("01") for _ in range(n))  # noqa: E731
    levels = [[rand(rng.randint(0, 2))]]
    for n in range(depth):
        cur = levels[-1]
        L = len(cur[0]) + rng.randint(1, max_step)
        split = len(cur) - 1 if increasing else 0
        nxt = []
        for k, u in enumerate(cur):
            if k == split:
                tail = L - len(u) - 1
                nxt.extend([u + "0" + rand(tail), u + "1" + rand(tail)])
            else:
                nxt.append(u + rand(L - len(u)))
        levels.append(nxt)
    return NodeTree(T.image(p) for lv in levels for p in lv)


def claim_one_holds(seq: Sequence[str], T: Embedding = FULL_TREE) -> bool:
    """t_n ∧_T t_m = t_n ∧_T t_l for all n < m < l."""
    pre = _preimages(seq, T)
    n = len(pre)
    return all(
        meet(pre[a], pre[b]) == meet(pre[a], pre[c])
        for a in range(n)
        for b in range(a + 1, n)
        for c in range(b + 1, n)
    )


def meets_form_chain(seq: Sequence[str], T: Embedding = FULL_TREE) -> bool:
    cs = [T.preimage(c) for c in meet_chain(seq, T)]
    return all(len(a) < len(b) and b.startswith(a) for a, b in zip(cs, cs[1:]))
