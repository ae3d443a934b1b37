"""Tree-indexed families of functions given by small expressions.

A family assigns to each node t a function on 2^N (or on two tagged copies
of it).  Expressions are built from

    v(N)            indicator of the cylinder above N
    xplus(N.b)      1 on {τ : N⌢b^∞ ⪯ τ}
    xminus(N.b)     1 on {τ : N⌢b^∞ ≺ τ}
    const(N.b)      the constant real with binary digits N⌢b^∞
    scale(E)        E divided by |N|+1, N the node inside E
    pair(E, F)      E on copy 1, F on copy 2
    zero

where a node expression N is ``t`` or ``q(N)`` (the image under the fixed
padding subtree).  Transport along a generator rewrites every node
expression N(t) to N(S(t)).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Union

from .errors import DomainError, ParseError
from .subtrees import SubtreeGenerator, compose_generators
from .tree_core import Branch, lex_leq, lex_less, on_branch

Q_GENERATOR = SubtreeGenerator("", (("001", "101"),))

Point = Union[Branch, tuple[int, Branch]]


@dataclass(frozen=True)
class NodeExpr:
    """t pushed through generators, innermost first."""

    gens: tuple[SubtreeGenerator, ...] = ()

    def apply(self, t: str) -> str:
        return _apply(self, t)

    def branch(self, sigma: Branch) -> Branch:
        for g in self.gens:
            sigma = g.image_branch(sigma)
        return sigma

    def cycle(self) -> int:
        g = SubtreeGenerator.identity()
        for h in self.gens:
            g = compose_generators(g, h)
        return g.cycle

    def after(self, g: SubtreeGenerator) -> "NodeExpr":
        return NodeExpr((g,) + self.gens)

    def __str__(self) -> str:
        out = "t"
        for g in self.gens:
            out = f"q({out})" if g == Q_GENERATOR else f"sub[{g}]({out})"
        return out


@lru_cache(maxsize=1 << 18)
def _apply(expr: NodeExpr, t: str) -> str:
    for g in expr.gens:
        t = g.image(t)
    return t


@dataclass(frozen=True)
class Zero:
    def value(self, t: str, tau: Branch) -> Fraction:
        return Fraction(0)

    def nodes(self) -> tuple[NodeExpr, ...]:
        return ()

    def map(self, g: SubtreeGenerator) -> "Zero":
        return self

    def __str__(self) -> str:
        return "zero"


@dataclass(frozen=True)
class V:
    node: NodeExpr

    def value(self, t: str, tau: Branch) -> Fraction:
        return Fraction(on_branch(self.node.apply(t), tau))

    def nodes(self) -> tuple[NodeExpr, ...]:
        return (self.node,)

    def map(self, g: SubtreeGenerator) -> "V":
        return V(self.node.after(g))

    def __str__(self) -> str:
        return f"v({self.node})"


@dataclass(frozen=True)
class Tail:
    """A term built from the branch N⌢b^∞: xplus, xminus or const."""

    op: str
    node: NodeExpr
    bit: str

    def value(self, t: str, tau: Branch) -> Fraction:
        sigma = Branch(self.node.apply(t), self.bit)
        if self.op == "xplus":
            return Fraction(lex_leq(sigma, tau))
        if self.op == "xminus":
            return Fraction(lex_less(sigma, tau))
        return sigma.value()

    def nodes(self) -> tuple[NodeExpr, ...]:
        return (self.node,)

    def map(self, g: SubtreeGenerator) -> "Tail":
        return Tail(self.op, self.node.after(g), self.bit)

    def __str__(self) -> str:
        return f"{self.op}({self.node}.{self.bit})"


@dataclass(frozen=True)
class Scale:
    inner: "Term"

    def value(self, t: str, tau: Branch) -> Fraction:
        nodes = self.inner.nodes()
        n = len(nodes[0].apply(t)) if nodes else len(t)
        return self.inner.value(t, tau) / (n + 1)

    def nodes(self) -> tuple[NodeExpr, ...]:
        return self.inner.nodes()

    def map(self, g: SubtreeGenerator) -> "Scale":
        return Scale(self.inner.map(g))

    def __str__(self) -> str:
        return f"scale({self.inner})"


Term = Union[Zero, V, Tail, Scale]


@dataclass(frozen=True)
class Family:
    first: Term
    second: Term | None = None

    @property
    def paired(self) -> bool:
        return self.second is not None

    def evaluate(self, t: str, point: Point) -> Fraction:
        if self.second is None:
            if not isinstance(point, Branch):
                raise DomainError("this family lives on 2^N; points are plain branches")
            return self.first.value(t, point)
        if isinstance(point, Branch):
            raise DomainError("this family lives on two copies of 2^N; points are (copy, branch)")
        copy, tau = point
        if copy not in (1, 2):
            raise DomainError(f"copy must be 1 or 2, not {copy}")
        return (self.first if copy == 1 else self.second).value(t, tau)

    def node_exprs(self) -> list[NodeExpr]:
        out: list[NodeExpr] = []
        for term in (self.first, self.second):
            if term is None:
                continue
            for n in term.nodes():
                if n not in out:
                    out.append(n)
        return out

    def transport(self, g: SubtreeGenerator) -> "Family":
        return Family(self.first.map(g), None if self.second is None else self.second.map(g))

    def cycle(self) -> int:
        return lcm(1, *(n.cycle() for n in self.node_exprs()))

    def anchors(self, sigma: Branch) -> list[Branch]:
        """σ together with the limits of every node expression along σ."""
        out = [sigma]
        for n in self.node_exprs():
            b = n.branch(sigma)
            if b not in out:
                out.append(b)
        return out

    def points(self, branches: list[Branch]) -> list[Point]:
        if not self.paired:
            return list(branches)
        return [(c, b) for c in (1, 2) for b in branches]

    def __str__(self) -> str:
        if self.second is None:
            return str(self.first)
        return f"pair({self.first}, {self.second})"


PROTOTYPE_EXPRESSIONS = {
    1: "scale(v(t))",
    2: "const(q(t).0)",
    3: "xplus(q(t).0)",
    4: "xminus(q(t).1)",
    5: "v(t)",
    6: "pair(v(t), const(t.0))",
    7: "pair(v(q(t)), xplus(q(t).0))",
}

_TOKEN = re.compile(r"\s*(?:([A-Za-z_]+)|(\.[01])|([(),]))")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected input at {text[pos:]!r}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want: str | None = None) -> str:
        tok = self.peek()
        if tok is None or (want is not None and tok != want):
            raise ParseError(f"expected {want or 'a token'}, got {tok!r}")
        self.i += 1
        return tok

    def node(self) -> NodeExpr:
        tok = self.take()
        if tok == "t":
            return NodeExpr()
        if tok == "q":
            self.take("(")
            inner = self.node()
            self.take(")")
            return NodeExpr(inner.gens + (Q_GENERATOR,))
        raise ParseError(f"expected a node expression, got {tok!r}")

    def term(self) -> Term:
        tok = self.take()
        if tok == "zero":
            return Zero()
        if tok not in ("v", "xplus", "xminus", "const", "scale"):
            raise ParseError(f"unknown function {tok!r}")
        self.take("(")
        if tok == "v":
            out: Term = V(self.node())
        elif tok == "scale":
            out = Scale(self.term())
        else:
            node = self.node()
            bit = self.take()
            if bit not in (".0", ".1"):
                raise ParseError(f"expected .0 or .1 after the node, got {bit!r}")
            out = Tail(tok, node, bit[1])
        self.take(")")
        return out

    def family(self) -> Family:
        if self.peek() == "pair":
            self.take()
            self.take("(")
            a = self.term()
            self.take(",")
            b = self.term()
            self.take(")")
            fam = Family(a, b)
        else:
            fam = Family(self.term())
        if self.peek() is not None:
            raise ParseError(f"trailing input {self.toks[self.i:]}")
        return fam


def parse_family(text: str) -> Family:
    return _Parser(text).family()


def prototype_family(i: int) -> Family:
    if i not in PROTOTYPE_EXPRESSIONS:
        raise DomainError(f"prototype id must be 1..7, not {i}")
    return parse_family(PROTOTYPE_EXPRESSIONS[i])


def parse_family_spec(text: str) -> Family:
    """``proto:<i>`` or ``expr:<expression>``."""
    kind, _, body = text.partition(":")
    if kind == "proto":
        if not body.strip().isdigit():
            raise ParseError(f"bad prototype id {body!r}")
        return prototype_family(int(body))
    if kind == "expr":
        return parse_family(body)
    raise ParseError(f"family spec must start with proto: or expr:, got {text!r}")


def parse_point(text: str) -> Point:
    """A branch such as ``01*0``, or ``<copy>:<branch>`` on the doubled space."""
    text = text.strip()
    copy, sep, rest = text.partition(":")
    if not sep:
        return Branch.parse(text)
    if copy not in ("1", "2"):
        raise ParseError(f"copy tag must be 1 or 2, got {copy!r}")
    return int(copy), Branch.parse(rest)


def format_point(p: Point) -> str:
    return str(p) if isinstance(p, Branch) else f"{p[0]}:{p[1]}"
