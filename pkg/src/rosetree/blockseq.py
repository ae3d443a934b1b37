"""Strictly increasing finite sequences, block sequences and the β recursion."""
from __future__ import annotations

import random
from functools import lru_cache
from typing import Callable, Optional, Sequence

from .errors import DomainError, ParseError, TooFewBlocks
from .tree_core import nodes_upto

FinSeq = tuple[int, ...]
BlockSeq = tuple[FinSeq, ...]


def parse_finseq(text: str) -> FinSeq:
    text = text.strip()
    if text in ("", "ε"):
        return ()
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"bad finite sequence {text!r}") from None
    if any(v < 0 for v in vals):
        raise ParseError(f"entries must be naturals: {text!r}")
    if any(a >= b for a, b in zip(vals, vals[1:])):
        raise ParseError(f"entries must strictly increase: {text!r}")
    return vals


def format_finseq(s: FinSeq) -> str:
    return ",".join(map(str, s)) if s else "ε"


def make_blockseq(blocks: Sequence[Sequence[int]]) -> BlockSeq:
    out = tuple(tuple(b) for b in blocks)
    for b in out:
        if not b:
            raise DomainError("blocks must be nonempty")
        if any(x >= y for x, y in zip(b, b[1:])):
            raise DomainError(f"block {b} is not strictly increasing")
    for a, b in zip(out, out[1:]):
        if a[-1] >= b[0]:
            raise DomainError(f"block {a} is not entirely below {b}")
    return out


def parse_blockseq(text: str) -> BlockSeq:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    blocks = [parse_finseq(ln) for ln in lines]
    try:
        return make_blockseq(blocks)
    except DomainError as e:
        raise ParseError(str(e)) from None


def format_blockseq(b: BlockSeq) -> str:
    return "".join(format_finseq(x) + "\n" for x in b)


def singletons(n: int) -> BlockSeq:
    """b_k = {k} for k < n."""
    return tuple((k,) for k in range(n))


def union(blocks: Sequence[FinSeq]) -> FinSeq:
    return tuple(x for b in blocks for x in b)


def is_initial(s: Sequence, t: Sequence) -> bool:
    """s ⊑ t: s is an initial segment of t."""
    return len(s) <= len(t) and tuple(t[: len(s)]) == tuple(s)


def span_member(b: BlockSeq, s: FinSeq) -> Optional[tuple[int, ...]]:
    """The indices F with s = ∪_{n∈F} b_n, if s is a finite union of blocks."""
    where = {x: k for k, blk in enumerate(b) for x in blk}
    used: list[int] = []
    pos = 0
    while pos < len(s):
        k = where.get(s[pos])
        if k is None or tuple(s[pos : pos + len(b[k])]) != b[k]:
            return None
        used.append(k)
        pos += len(b[k])
    return tuple(used)


def chain_map(b: BlockSeq) -> list[FinSeq]:
    """i_n = b_0 ∪ … ∪ b_n."""
    if not b:
        raise TooFewBlocks("chain_map needs at least one block")
    return [union(b[: n + 1]) for n in range(len(b))]


def antichain_map(b: BlockSeq) -> list[FinSeq]:
    """i_{3n} ∪ b_{3n+2} for as many n as the blocks allow."""
    if len(b) < 3:
        raise TooFewBlocks("antichain_map needs at least three blocks")
    chain = chain_map(b)
    return [chain[3 * n] + b[3 * n + 2] for n in range((len(b) - 3) // 3 + 1)]


def pairwise_incomparable(seq: Sequence[FinSeq]) -> bool:
    return not any(
        is_initial(a, c) or is_initial(c, a) for k, a in enumerate(seq) for c in seq[k + 1 :]
    )


def converges_toward(seq: Sequence[FinSeq], limit: FinSeq, conditions: int) -> bool:
    """For each k ≤ conditions, the terms extending limit|k form a nonempty final segment."""
    for k in range(1, conditions + 1):
        stem = limit[:k]
        hits = [is_initial(stem, t) for t in seq]
        if not hits or not hits[-1]:
            return False
        first = hits.index(True)
        if not all(hits[first:]):
            return False
    return True


# -- the β recursion -------------------------------------------------------


@lru_cache(maxsize=None)
def beta_indices(s: str) -> tuple[int, ...]:
    """Indices into b of the blocks making up β_s."""
    if s == "":
        return ()
    if len(s) == 1:
        return (0, 1, 2) if s == "0" else (0, 2)
    parent = beta_indices(s[:-1])
    n = parent[-1]
    if s[-2] == "0":
        step = (1, 2, 3) if s[-1] == "0" else (1, 3)
    else:
        step = (1, 2, 3, 4) if s[-1] == "0" else (1, 2, 4)
    return parent + tuple(n + d for d in step)


def _blocks(b: BlockSeq, idx: Sequence[int]) -> list[FinSeq]:
    if idx and idx[-1] >= len(b):
        raise TooFewBlocks(f"need block {idx[-1]} but only {len(b)} given")
    return [b[k] for k in idx]


def beta(s: str, b: BlockSeq) -> list[FinSeq]:
    return _blocks(b, beta_indices(s))


def format_beta(blocks: Sequence[FinSeq]) -> str:
    return " | ".join(format_finseq(x) for x in blocks) if blocks else "ε"


def verify_c1(s: str, b: BlockSeq) -> bool:
    """β_s is a finite subsequence of b."""
    idx = beta_indices(s)
    _blocks(b, idx)
    return all(x < y for x, y in zip(idx, idx[1:]))


def verify_c2(depth: int) -> bool:
    """β_s ⊑ β_t iff s ⊑ t, for all nodes up to ``depth``."""
    nodes = nodes_upto(depth)
    codes = {s: beta_indices(s) for s in nodes}
    for s in nodes:
        for t in nodes:
            if is_initial(codes[s], codes[t]) != t.startswith(s):
                return False
    return True


BetaFn = Callable[[str], tuple[int, ...]]


def _random_extension(rng: random.Random, b: BlockSeq, start: int, count: int) -> list[FinSeq]:
    out, k = [], start
    for _ in range(count):
        width = rng.randint(1, 3)
        picks = [j for j in range(k, k + width) if rng.random() < 0.6] or [k]
        if picks[-1] >= len(b):
            raise TooFewBlocks(f"sampling needs more than {len(b)} blocks")
        out.append(union([b[j] for j in picks]))
        k += width + rng.randint(0, 1)
    return out


def verify_c3(
    s: str,
    b: BlockSeq,
    samples: int = 20,
    rng: Optional[random.Random] = None,
    beta_fn: BetaFn = beta_indices,
) -> bool:
    """Sampled check that ∪β_{s⌢1} is a term of A(c) for c extending β_{s⌢0}."""
    rng = rng or random.Random(0)
    head_idx = beta_fn(s + "0")
    head = _blocks(b, head_idx)
    target = union(_blocks(b, beta_fn(s + "1")))
    extra = 6
    start = head_idx[-1] + 1
    if start + extra > len(b):
        raise TooFewBlocks(f"the canonical extension needs {start + extra} blocks")
    cands = [head + list(b[start : start + extra])]
    cands += [head + _random_extension(rng, b, start, extra) for _ in range(samples)]
    return all(target in antichain_map(tuple(c)) for c in cands)


# -- fans and domination ---------------------------------------------------


def _common_prefix(seqs: Sequence[FinSeq]) -> FinSeq:
    first = seqs[0]
    n = 0
    while all(len(x) > n and x[n] == first[n] for x in seqs):
        n += 1
    return first[:n]


def is_fan(seq: Sequence[FinSeq]) -> Optional[tuple[FinSeq, tuple[int, ...]]]:
    """(stem, next entries) when the terms branch off one stem in increasing order."""
    if len(seq) < 2:
        return None
    stem = _common_prefix(seq)
    if any(len(t) == len(stem) for t in seq):
        return None
    nxt = tuple(t[len(stem)] for t in seq)
    if any(a >= c for a, c in zip(nxt, nxt[1:])):
        return None
    return stem, nxt


def dominated(B: Sequence[FinSeq], n: int) -> Optional[list[FinSeq]]:
    """Fewest length-n sequences such that every member of B of length ≥ n extends one.

    Members shorter than n are exempt; None when every member is exempt.
    """
    prefixes = sorted({tuple(t[:n]) for t in B if len(t) >= n})
    return prefixes or None
