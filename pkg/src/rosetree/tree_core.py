"""Nodes and eventually periodic branches of the Cantor tree.

A node is a plain ``str`` over ``{"0", "1"}``; the empty string is the root.
A :class:`Branch` is an infinite 0/1 sequence ``prefix + period + period + ...``
kept in a canonical form so that equality is structural.

Index sets are symbolic unions of three convergence shapes (a chain along a
branch, the canonical increasing antichain to its left, the canonical
decreasing antichain to its right) plus finitely many extra nodes.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Optional, Union

from .errors import ComparableNodes, ParseError, ShapeUnavailable

_BITS = re.compile(r"[01]*\Z")


def parse_node(text: str) -> str:
    text = text.strip()
    if text in ("ε", "()"):
        return ""
    if not _BITS.match(text):
        raise ParseError(f"not a node: {text!r}")
    return text


def format_node(t: str) -> str:
    """Bits as text, with the root written ε so it stays visible."""
    return t or "ε"


def is_prefix(s: str, t: str) -> bool:
    """s ⊑ t."""
    return t.startswith(s)


def comparable(s: str, t: str) -> bool:
    return s.startswith(t) or t.startswith(s)


def meet(s: str, t: str) -> str:
    n = 0
    for a, b in zip(s, t):
        if a != b:
            break
        n += 1
    return s[:n]


def canonical_index(t: str) -> int:
    return (1 << len(t)) - 1 + (int(t, 2) if t else 0)


def node_at_index(k: int) -> str:
    if k < 0:
        raise ValueError("index must be non-negative")
    n = (k + 1).bit_length() - 1
    offset = k - ((1 << n) - 1)
    return format(offset, f"0{n}b") if n else ""


def level(n: int) -> list[str]:
    """All nodes of length n in ≺-order."""
    if n == 0:
        return [""]
    return [format(i, f"0{n}b") for i in range(1 << n)]


def nodes_upto(depth: int) -> list[str]:
    out: list[str] = []
    for n in range(depth + 1):
        out.extend(level(n))
    return out


def _primitive_root(word: str) -> str:
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d]
    return word


@dataclass(frozen=True)
class Branch:
    """The sequence prefix⌢period⌢period⌢… in canonical form."""

    prefix: str
    period: str

    def __post_init__(self) -> None:
        if not self.period or not _BITS.match(self.period) or not _BITS.match(self.prefix):
            raise ParseError(f"bad branch parts: {self.prefix!r}, {self.period!r}")
        prefix, period = self.prefix, _primitive_root(self.period)
        # absorb trailing prefix bits into a rotated period
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @classmethod
    def parse(cls, text: str) -> "Branch":
        text = text.strip()
        if text.count("*") != 1:
            raise ParseError(f"branch needs exactly one '*': {text!r}")
        prefix, period = text.split("*")
        if not period or not _BITS.match(prefix) or not _BITS.match(period):
            raise ParseError(f"not a branch: {text!r}")
        return cls(prefix, period)

    def __str__(self) -> str:
        return f"{self.prefix}*{self.period}"

    def bit(self, i: int) -> str:
        p = len(self.prefix)
        if i < p:
            return self.prefix[i]
        return self.period[(i - p) % len(self.period)]

    def take(self, n: int) -> str:
        """σ|n as a node."""
        p = len(self.prefix)
        if n <= p:
            return self.prefix[:n]
        reps = (n - p) // len(self.period) + 1
        return (self.prefix + self.period * reps)[:n]

    def value(self) -> Fraction:
        """The real number with this binary expansion after the point."""
        a, b = len(self.prefix), len(self.period)
        head = Fraction(int(self.prefix, 2), 1 << a) if a else Fraction(0)
        tail = Fraction(int(self.period, 2), ((1 << b) - 1) << a)
        return head + tail

    def horizon(self, other: "Branch") -> int:
        """A length after which two distinct branches can no longer first differ."""
        return max(len(self.prefix), len(other.prefix)) + lcm(len(self.period), len(other.period))

    def meet(self, other: "Branch") -> str:
        """Longest common prefix of two distinct branches."""
        k = _first_difference(self, other)
        if k is None:
            raise ValueError("a branch has no meet with itself")
        return self.take(k)

    def shift(self, word: str) -> "Branch":
        """word⌢self."""
        return Branch(word + self.prefix, self.period)


def extend(t: str, bit: str) -> Branch:
    """t⌢bit^∞."""
    return Branch(t, bit)


NodeOrBranch = Union[str, Branch]


def _first_difference(x: NodeOrBranch, y: NodeOrBranch) -> Optional[int]:
    if isinstance(x, str) and isinstance(y, str):
        w = meet(x, y)
        return None if len(w) in (len(x), len(y)) else len(w)
    if isinstance(x, str) or isinstance(y, str):
        node, br = (x, y) if isinstance(x, str) else (y, x)
        for i, b in enumerate(node):
            if br.bit(i) != b:
                return i
        return None
    if x == y:
        return None
    for i in range(x.horizon(y)):
        if x.bit(i) != y.bit(i):
            return i
    raise AssertionError("distinct canonical branches must differ early")


def _bit(x: NodeOrBranch, i: int) -> str:
    return x[i] if isinstance(x, str) else x.bit(i)


def lex_less(x: NodeOrBranch, y: NodeOrBranch) -> bool:
    """x ≺ y.  Raises ComparableNodes when ≺ is undefined for the pair."""
    if isinstance(x, Branch) and isinstance(y, Branch) and x == y:
        return False
    i = _first_difference(x, y)
    if i is None:
        raise ComparableNodes("lex undefined on comparable nodes")
    return _bit(x, i) == "0"


def lex_leq(x: Branch, y: Branch) -> bool:
    return x == y or lex_less(x, y)


def on_branch(t: str, sigma: Branch) -> bool:
    """t ⊏ σ."""
    return sigma.take(len(t)) == t


class Tri(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


def converges_to(nodes: Iterable[str], sigma: Branch, depth: int) -> Tri:
    """Three-valued L→σ for a finite sample of an index set.

    The sample's nodes of maximal length stand in for its tail.  The
    verdict is Unknown when the sample never reaches ``depth``.
    """
    nodes = list(nodes)
    if not nodes:
        return Tri.UNKNOWN
    top = max(len(t) for t in nodes)
    if top < depth:
        return Tri.UNKNOWN
    target = sigma.take(depth)
    tail = [t for t in nodes if len(t) == top]
    return Tri.YES if all(t.startswith(target) for t in tail) else Tri.NO


SHAPE_KINDS = ("chain", "incr", "decr")


@dataclass(frozen=True)
class Shape:
    kind: str
    target: Branch

    def __post_init__(self) -> None:
        if self.kind not in SHAPE_KINDS:
            raise ParseError(f"unknown shape kind {self.kind!r}")
        if self.kind == "incr" and "1" not in self.target.period:
            raise ShapeUnavailable(f"no increasing antichain converges to {self.target}")
        if self.kind == "decr" and "0" not in self.target.period:
            raise ShapeUnavailable(f"no decreasing antichain converges to {self.target}")

    def __str__(self) -> str:
        return f"{self.kind} {self.target}"

    def nodes(self, depth: int) -> Iterator[str]:
        """The canonical members of the shape of length ≤ depth, shortest first."""
        sigma = self.target
        if self.kind == "chain":
            for n in range(depth + 1):
                yield sigma.take(n)
            return
        want, tail = ("1", "0") if self.kind == "incr" else ("0", "1")
        for m in range(depth):
            if sigma.bit(m) == want:
                yield sigma.take(m) + tail


def Chain(sigma: Branch) -> "IndexSet":
    return IndexSet((Shape("chain", sigma),))


def IncrTo(sigma: Branch) -> "IndexSet":
    return IndexSet((Shape("incr", sigma),))


def DecrTo(sigma: Branch) -> "IndexSet":
    return IndexSet((Shape("decr", sigma),))


@dataclass(frozen=True)
class IndexSet:
    shapes: tuple[Shape, ...] = ()
    nodes: tuple[str, ...] = ()

    def __or__(self, other: "IndexSet") -> "IndexSet":
        shapes = self.shapes + tuple(s for s in other.shapes if s not in self.shapes)
        nodes = self.nodes + tuple(t for t in other.nodes if t not in self.nodes)
        return IndexSet(shapes, nodes)

    def with_nodes(self, extra: Iterable[str]) -> "IndexSet":
        return self | IndexSet((), tuple(extra))

    @property
    def infinite(self) -> bool:
        return bool(self.shapes)

    def targets(self) -> list[Branch]:
        out: list[Branch] = []
        for s in self.shapes:
            if s.target not in out:
                out.append(s.target)
        return out

    def enumerate(self, depth: int) -> list[str]:
        seen: set[str] = set()
        for s in self.shapes:
            seen.update(s.nodes(depth))
        seen.update(t for t in self.nodes if len(t) <= depth)
        return sorted(seen, key=lambda t: (len(t), t))

    def to_text(self) -> str:
        lines = [str(s) for s in self.shapes] + [f"node {t}".rstrip() for t in self.nodes]
        return "\n".join(lines)

    def __str__(self) -> str:
        parts = [str(s) for s in self.shapes] + [f"node {t}".rstrip() for t in self.nodes]
        return "; ".join(parts)


def parse_index_set(text: str) -> IndexSet:
    """Parse lines (or ';'-separated items) such as ``chain 01*0`` or ``node 0110``."""
    shapes: list[Shape] = []
    nodes: list[str] = []
    for raw in re.split(r"[;\n]", text):
        item = raw.split("#", 1)[0].strip()
        if not item:
            continue
        head, _, rest = item.partition(" ")
        rest = rest.strip()
        if head == "node":
            nodes.append(parse_node(rest))
        elif head in SHAPE_KINDS:
            shape = Shape(head, Branch.parse(rest))
            if shape not in shapes:
                shapes.append(shape)
        else:
            raise ParseError(f"unknown index-set item {item!r}")
    if not shapes and not nodes:
        raise ParseError("empty index set")
    return IndexSet(tuple(shapes), tuple(dict.fromkeys(nodes)))


@dataclass(frozen=True)
class ConvergenceProfile:
    target: Optional[Branch]
    has_chain: bool
    has_left: bool
    has_right: bool
    orthogonal_to_all: bool
    multi_target: bool
    infinite: bool = field(default=True)

    @property
    def converges(self) -> bool:
        """L→σ for the (unique) target."""
        return self.target is not None

    @property
    def strictly_left(self) -> bool:
        """L ≺* σ."""
        return self.converges and self.has_left and not (self.has_chain or self.has_right)

    @property
    def weakly_left(self) -> bool:
        """L ⪯* σ: nodes left of σ or on its chain."""
        return self.converges and not self.has_right

    @property
    def strictly_right(self) -> bool:
        """σ ≺* L."""
        return self.converges and self.has_right and not (self.has_chain or self.has_left)

    @property
    def weakly_right(self) -> bool:
        """σ ⪯* L."""
        return self.converges and not self.has_left

    @property
    def on_chain(self) -> bool:
        """L ⊆* σ."""
        return self.converges and self.has_chain and not (self.has_left or self.has_right)

    @property
    def orthogonal(self) -> bool:
        """L ⊥ σ for the target."""
        return self.converges and not self.has_chain

    def as_dict(self) -> dict:
        return {
            "target": None if self.target is None else str(self.target),
            "has_chain": self.has_chain,
            "has_left": self.has_left,
            "has_right": self.has_right,
            "orthogonal_to_all": self.orthogonal_to_all,
            "multi_target": self.multi_target,
        }


def profile(L: IndexSet) -> ConvergenceProfile:
    if not L.infinite:
        return ConvergenceProfile(None, False, False, False, True, False, infinite=False)
    kinds = {s.kind for s in L.shapes}
    targets = L.targets()
    multi = len(targets) > 1
    return ConvergenceProfile(
        target=None if multi else targets[0],
        has_chain="chain" in kinds,
        has_left="incr" in kinds,
        has_right="decr" in kinds,
        orthogonal_to_all="chain" not in kinds,
        multi_target=multi,
    )
