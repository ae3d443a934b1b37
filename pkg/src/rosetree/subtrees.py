"""Regular dyadic subtrees, their embeddings, and skew-tree codes.

A :class:`SubtreeGenerator` describes the embedding t ↦ i(t) by a root word
and a cycle of word pairs: level k of the domain uses pair ``k mod cycle``
and i(t⌢e) = i(t)⌢w_e.  Cycling keeps every image of an eventually periodic
branch eventually periodic.

An :class:`ExplicitSubtree` is a finite table of the same embedding and is
allowed to be invalid; :func:`validate_regular_dyadic` decides.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import lcm
from typing import Iterable, Optional, Protocol

from .errors import DepthMismatch, InvalidGenerator, NotInSubtree, NotSkew, ParseError
from .tree_core import Branch, lex_less, meet, nodes_upto, parse_node


class Embedding(Protocol):
    def image(self, t: str) -> str: ...

    def preimage(self, u: str) -> str: ...


@dataclass(frozen=True)
class SubtreeGenerator:
    root: str
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if not self.pairs:
            raise InvalidGenerator("a generator needs at least one word pair")
        for w0, w1 in self.pairs:
            if not w0 or len(w0) != len(w1):
                raise InvalidGenerator(f"pair ({w0},{w1}): words must be nonempty and of equal length")
            if w0[0] != "0" or w1[0] != "1":
                raise InvalidGenerator(f"pair ({w0},{w1}): words must start with 0 and 1")
            if set(w0 + w1) - {"0", "1"}:
                raise InvalidGenerator(f"pair ({w0},{w1}): words must be binary")
        if set(self.root) - {"0", "1"}:
            raise InvalidGenerator(f"root {self.root!r} is not a node")

    @classmethod
    def identity(cls) -> "SubtreeGenerator":
        return cls("", (("0", "1"),))

    @property
    def cycle(self) -> int:
        return len(self.pairs)

    def pair(self, k: int) -> tuple[str, str]:
        return self.pairs[k % len(self.pairs)]

    def word(self, k: int, bit: str) -> str:
        return self.pair(k)[int(bit)]

    def image(self, t: str) -> str:
        return _image(self, t)

    def level_length(self, n: int) -> int:
        """Length of the images of level-n nodes."""
        return len(self.root) + sum(len(self.pair(k)[0]) for k in range(n))

    def preimage(self, u: str) -> str:
        if not u.startswith(self.root):
            raise NotInSubtree(f"{u!r} is not in the subtree")
        pos, k, out = len(self.root), 0, []
        while pos < len(u):
            w0, w1 = self.pair(k)
            chunk = u[pos:pos + len(w0)]
            if chunk == w0:
                out.append("0")
            elif chunk == w1:
                out.append("1")
            else:
                raise NotInSubtree(f"{u!r} is not in the subtree")
            pos += len(w0)
            k += 1
        return "".join(out)

    def contains(self, u: str) -> bool:
        try:
            self.preimage(u)
        except NotInSubtree:
            return False
        return True

    def image_branch(self, sigma: Branch) -> Branch:
        p = len(sigma.prefix)
        head = self.image(sigma.prefix)
        span = lcm(len(sigma.period), self.cycle)
        block = "".join(self.word(p + j, sigma.bit(p + j)) for j in range(span))
        return Branch(head, block)

    def materialize(self, depth: int) -> "ExplicitSubtree":
        return ExplicitSubtree({t: self.image(t) for t in nodes_upto(depth)}, depth)

    def to_text(self) -> str:
        lines = [f"root={self.root}"] + [f"{w0},{w1}" for w0, w1 in self.pairs]
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text().replace("\n", "; ")


@lru_cache(maxsize=1 << 16)
def _image(g: SubtreeGenerator, t: str) -> str:
    if not t:
        return g.root
    return _image(g, t[:-1]) + g.word(len(t) - 1, t[-1])


def parse_generator(text: str) -> SubtreeGenerator:
    root: Optional[str] = None
    pairs: list[tuple[str, str]] = []
    for raw in text.replace(";", "\n").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("root="):
            if root is not None:
                raise ParseError("duplicate root line")
            root = parse_node(line[5:])
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 2:
            raise ParseError(f"expected '<w0>,<w1>': {line!r}")
        pairs.append((parse_node(parts[0]), parse_node(parts[1])))
    if root is None:
        raise ParseError("generator text needs a 'root=' line")
    return SubtreeGenerator(root, tuple(pairs))


def compose_generators(inner: SubtreeGenerator, outer: SubtreeGenerator) -> SubtreeGenerator:
    """The generator of t ↦ outer(inner(t))."""
    step = sum(len(w0) for w0, _ in inner.pairs)
    reps = 1
    while (reps * step) % outer.cycle:
        reps += 1
    pairs = []
    pos = len(inner.root)
    for k in range(inner.cycle * reps):
        w0, w1 = inner.pair(k)
        v0 = "".join(outer.word(pos + j, b) for j, b in enumerate(w0))
        v1 = "".join(outer.word(pos + j, b) for j, b in enumerate(w1))
        pairs.append((v0, v1))
        pos += len(w0)
    return SubtreeGenerator(outer.image(inner.root), tuple(pairs))


def random_generator(rng: random.Random, max_cycle: int = 2, max_word: int = 3, max_root: int = 2) -> SubtreeGenerator:
    def word(first: str, n: int) -> str:
        return first + "".join(rng.choice("01") for _ in range(n - 1))

    root = "".join(rng.choice("01") for _ in range(rng.randint(0, max_root)))
    pairs = []
    for _ in range(rng.randint(1, max_cycle)):
        n = rng.randint(1, max_word)
        pairs.append((word("0", n), word("1", n)))
    return SubtreeGenerator(root, tuple(pairs))


class ExplicitSubtree:
    """A finite table t ↦ i(t) over all domain nodes of length ≤ depth."""

    def __init__(self, mapping: dict[str, str], depth: int):
        expected = set(nodes_upto(depth))
        if set(mapping) != expected:
            raise DepthMismatch(f"mapping domain must be exactly the nodes of length ≤ {depth}")
        self.mapping = dict(mapping)
        self.depth = depth
        inverse: dict[str, str] = {}
        for t, u in mapping.items():
            inverse.setdefault(u, t)
        self.injective = len(inverse) == len(mapping)
        self._inverse = inverse

    @classmethod
    def identity(cls, depth: int) -> "ExplicitSubtree":
        return cls({t: t for t in nodes_upto(depth)}, depth)

    def image(self, t: str) -> str:
        try:
            return self.mapping[t]
        except KeyError:
            raise DepthMismatch(f"{t!r} is outside the domain of depth {self.depth}") from None

    def preimage(self, u: str) -> str:
        try:
            return self._inverse[u]
        except KeyError:
            raise NotInSubtree(f"{u!r} is not in the subtree") from None

    def contains(self, u: str) -> bool:
        return u in self._inverse

    @property
    def nodes(self) -> list[str]:
        return [self.mapping[t] for t in nodes_upto(self.depth)]

    def to_text(self) -> str:
        return "\n".join(f"{t} -> {self.mapping[t]}".strip() for t in nodes_upto(self.depth))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExplicitSubtree) and (self.depth, self.mapping) == (other.depth, other.mapping)

    def __repr__(self) -> str:
        return f"ExplicitSubtree(depth={self.depth}, root={self.mapping['']!r})"


def parse_explicit(text: str) -> ExplicitSubtree:
    mapping: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError(f"expected '<domain> -> <image>': {line!r}")
        left, right = line.split("->", 1)
        t, u = parse_node(left), parse_node(right)
        if t in mapping:
            raise ParseError(f"duplicate domain node {t!r}")
        mapping[t] = u
    if not mapping:
        raise ParseError("empty subtree table")
    depth = max(len(t) for t in mapping)
    return ExplicitSubtree(mapping, depth)


def validate_regular_dyadic(m: ExplicitSubtree) -> bool:
    """Level alignment plus preservation of ⊏ and ≺, checked locally.

    Children properly extending their parent, siblings ordered by ≺ and
    equal image lengths per level (strictly growing with the level) imply
    the pairwise conditions for every pair of nodes.
    """
    if not m.injective:
        return False
    lengths = []
    for n in range(m.depth + 1):
        ls = {len(m.image(t)) for t in nodes_upto(n)[(1 << n) - 1:]}
        if len(ls) != 1:
            return False
        lengths.append(ls.pop())
    if any(a >= b for a, b in zip(lengths, lengths[1:])):
        return False
    for t in nodes_upto(m.depth - 1):
        u, u0, u1 = m.image(t), m.image(t + "0"), m.image(t + "1")
        if not (u0.startswith(u) and u1.startswith(u)):
            return False
        w = meet(u0, u1)
        if len(w) in (len(u0), len(u1)) or u0[len(w)] != "0":
            return False
    return True


def validate_pairwise(m: ExplicitSubtree) -> bool:
    """Quadratic reference check of the same conditions (small depths only)."""
    dom = nodes_upto(m.depth)
    for a in dom:
        for b in dom:
            ia, ib = m.image(a), m.image(b)
            if (len(a) == len(b)) != (len(ia) == len(ib)):
                return False
            if (len(a) < len(b)) != (len(ia) < len(ib)):
                return False
            if b.startswith(a) != ib.startswith(ia):
                return False
            if a != b and not (a.startswith(b) or b.startswith(a)):
                if ia.startswith(ib) or ib.startswith(ia):
                    return False
                if lex_less(a, b) != lex_less(ia, ib):
                    return False
    return True


def compose(inner: ExplicitSubtree, outer: ExplicitSubtree) -> ExplicitSubtree:
    mapping = {}
    for t in nodes_upto(inner.depth):
        u = inner.image(t)
        if u not in outer.mapping:
            raise DepthMismatch(f"inner image {u!r} lies outside the outer domain")
        mapping[t] = outer.mapping[u]
    return ExplicitSubtree(mapping, inner.depth)


def relative_length(t: str, T: Embedding) -> int:
    """|t|_T: the number of strict T-predecessors of t."""
    return len(T.preimage(t))


def relative_meet(t1: str, t2: str, T: Embedding) -> str:
    """t1 ∧_T t2: the longest common T-ancestor."""
    return T.image(meet(T.preimage(t1), T.preimage(t2)))


def relative_ancestor(t: str, n: int, T: Embedding) -> str:
    """The T-node below t with relative length n."""
    return T.image(T.preimage(t)[:n])


class NodeTree:
    """A finite subtree of the Cantor tree given by its node set.

    The tree order is ⊏ restricted to the set; relative levels count strict
    predecessors inside the set.
    """

    def __init__(self, nodes: Iterable[str]):
        self.nodes = frozenset(nodes)
        by_len = sorted(self.nodes, key=len)
        self._level: dict[str, int] = {}
        for u in by_len:
            self._level[u] = sum(1 for v in by_len if len(v) < len(u) and u.startswith(v))
        height = max(self._level.values(), default=-1)
        self.levels: list[list[str]] = [[] for _ in range(height + 1)]
        for u, k in self._level.items():
            self.levels[k].append(u)
        for lv in self.levels:
            # nodes of one level are pairwise incomparable, so string order is ≺
            lv.sort()

    def relative_length(self, u: str) -> int:
        return self._level[u]

    def successors(self, u: str) -> list[str]:
        k = self._level[u] + 1
        if k >= len(self.levels):
            return []
        return [v for v in self.levels[k] if v.startswith(u) and v != u]

    @property
    def height(self) -> int:
        return len(self.levels) - 1

    def is_regular(self) -> bool:
        return all(len({len(u) for u in lv}) == 1 for lv in self.levels)

    def uniquely_rooted(self) -> bool:
        return bool(self.levels) and len(self.levels[0]) == 1

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NodeTree) and self.nodes == other.nodes

    def __repr__(self) -> str:
        return f"NodeTree({[lv for lv in self.levels]})"


def skew_code(T: NodeTree) -> tuple[tuple[int, ...], ...]:
    """Per level below the top, the ≺-ordered immediate-successor counts."""
    code = []
    for lv in T.levels[:-1]:
        counts = tuple(len(T.successors(u)) for u in lv)
        if any(c not in (1, 2) for c in counts) or counts.count(2) > 1:
            raise NotSkew(f"level counts {counts} are not those of a pruned skew tree")
        code.append(counts)
    return tuple(code)


def skew_isomorphic(S: NodeTree, T: NodeTree) -> bool:
    """Match levels in ≺-order and check that the matching preserves ⊏."""
    if len(S.levels) != len(T.levels):
        return False
    match: dict[str, str] = {}
    for ls, lt in zip(S.levels, T.levels):
        if len(ls) != len(lt):
            return False
        match.update(zip(ls, lt))
    for a in S.nodes:
        for b in S.nodes:
            if b.startswith(a) != match[b].startswith(match[a]):
                return False
    return True
