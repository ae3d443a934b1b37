"""The seven canonical families, their symbolic limits and a numeric cross-check."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Union

from .errors import DomainError, EmptyEnumeration, OutOfRange
from .families import Family, Point, Q_GENERATOR, format_point, prototype_family
from .subtrees import SubtreeGenerator
from .tree_core import (
    Branch,
    IndexSet,
    Shape,
    format_node,
    lex_leq,
    lex_less,
    nodes_upto,
    on_branch,
    profile,
)

PROTOTYPE_NAMES = {
    1: "A(2^<N)",
    2: "2^<=N",
    3: "S+(2^N)",
    4: "S-(2^N)",
    5: "A^(2^N)",
    6: "D^(2^N)",
    7: "D^(S(2^N))",
}
PAIRED = (6, 7)


def q_subtree() -> SubtreeGenerator:
    return Q_GENERATOR


def eval_prototype(i: int, t: str, point: Point) -> Fraction:
    return prototype_family(i).evaluate(t, point)


# -- limit functions -------------------------------------------------------


@dataclass(frozen=True)
class Zero:
    def __call__(self, point: Point) -> Fraction:
        return Fraction(0)

    def __str__(self) -> str:
        return "Zero"


@dataclass(frozen=True)
class Dirac:
    sigma: Branch

    def __call__(self, point: Point) -> Fraction:
        return Fraction(point == self.sigma)

    def __str__(self) -> str:
        return f"Dirac({self.sigma})"


@dataclass(frozen=True)
class XPlus:
    sigma: Branch

    def __call__(self, point: Point) -> Fraction:
        return Fraction(lex_leq(self.sigma, point))

    def __str__(self) -> str:
        return f"XPlus({self.sigma})"


@dataclass(frozen=True)
class XMinus:
    sigma: Branch

    def __call__(self, point: Point) -> Fraction:
        return Fraction(lex_less(self.sigma, point))

    def __str__(self) -> str:
        return f"XMinus({self.sigma})"


@dataclass(frozen=True, eq=False)
class ConstReal:
    """Equality is by real value, so two codes of one dyadic rational agree."""

    sigma: Branch

    def __call__(self, point: Point) -> Fraction:
        return self.sigma.value()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ConstReal) and self.sigma.value() == other.sigma.value()

    def __hash__(self) -> int:
        return hash(("ConstReal", self.sigma.value()))

    def __str__(self) -> str:
        return f"ConstReal({self.sigma})"


@dataclass(frozen=True)
class ScaledIndicator:
    t: str

    def __call__(self, point: Point) -> Fraction:
        return Fraction(on_branch(self.t, point), len(self.t) + 1)

    def __str__(self) -> str:
        return f"ScaledIndicator({format_node(self.t)})"


@dataclass(frozen=True)
class Indicator:
    t: str

    def __call__(self, point: Point) -> Fraction:
        return Fraction(on_branch(self.t, point))

    def __str__(self) -> str:
        return f"Indicator({format_node(self.t)})"


@dataclass(frozen=True)
class Pair:
    first: "LimitFunction"
    second: "LimitFunction"

    def __call__(self, point: Point) -> Fraction:
        if isinstance(point, Branch):
            raise DomainError("pair functions take (copy, branch) points")
        copy, tau = point
        return (self.first if copy == 1 else self.second)(tau)

    def __str__(self) -> str:
        return f"Pair({self.first},{self.second})"


@dataclass(frozen=True)
class Member:
    i: int
    t: str

    def __call__(self, point: Point) -> Fraction:
        return eval_prototype(self.i, self.t, point)

    def __str__(self) -> str:
        return f"Member({self.i},{format_node(self.t)})"


LimitFunction = Union[Zero, Dirac, XPlus, XMinus, ConstReal, ScaledIndicator, Indicator, Pair, Member]


def variant(f: LimitFunction) -> str:
    """The constructor skeleton, e.g. ``Pair(Dirac,ConstReal)``."""
    if isinstance(f, Pair):
        return f"Pair({variant(f.first)},{variant(f.second)})"
    return type(f).__name__


def rename(f: LimitFunction, mapping: Callable[[Branch], Branch]) -> LimitFunction:
    """Apply a branch renaming to every branch argument of ``f``."""
    if isinstance(f, Pair):
        return Pair(rename(f.first, mapping), rename(f.second, mapping))
    if isinstance(f, (Dirac, XPlus, XMinus, ConstReal)):
        return type(f)(mapping(f.sigma))
    return f


# -- membership ------------------------------------------------------------


class Status(enum.Enum):
    CONVERGENT = "Convergent"
    DIVERGENT = "Divergent"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Witness:
    left: IndexSet
    left_limit: LimitFunction
    right: IndexSet
    right_limit: LimitFunction

    def as_dict(self) -> dict:
        return {
            "left": str(self.left),
            "left_limit": str(self.left_limit),
            "right": str(self.right),
            "right_limit": str(self.right_limit),
        }


@dataclass(frozen=True)
class Verdict:
    status: Status
    limit: Optional[LimitFunction] = None
    witness: Optional[Witness] = None

    def as_dict(self) -> dict:
        return {
            "verdict": self.status.value,
            "limit": None if self.limit is None else str(self.limit),
            "witness": None if self.witness is None else self.witness.as_dict(),
        }


def _check_id(i: int) -> None:
    if i not in PROTOTYPE_NAMES:
        raise DomainError(f"prototype id must be 1..7, not {i}")


def component_limit(i: int, shape: Shape) -> LimitFunction:
    """Limit of the i-th family along one chain or monotone antichain."""
    _check_id(i)
    sigma, kind = shape.target, shape.kind
    image = Q_GENERATOR.image_branch(sigma)
    if i == 1:
        return Zero()
    if i == 2:
        return ConstReal(image)
    if i == 3:
        return XMinus(image) if kind == "decr" else XPlus(image)
    if i == 4:
        return XPlus(image) if kind == "incr" else XMinus(image)
    if i == 5:
        return Dirac(sigma) if kind == "chain" else Zero()
    if i == 6:
        return Pair(Dirac(sigma) if kind == "chain" else Zero(), ConstReal(sigma))
    if kind == "chain":
        return Pair(Dirac(image), XPlus(image))
    return Pair(Zero(), XPlus(image) if kind == "incr" else XMinus(image))


def _member_of_class(i: int, L: IndexSet) -> bool:
    p = profile(L)
    if i == 1:
        return True
    if i == 2:
        return p.converges
    if i == 3:
        return p.weakly_left or p.strictly_right
    if i == 4:
        return p.strictly_left or p.weakly_right
    if i == 5:
        return p.on_chain or p.orthogonal_to_all
    if i == 6:
        return p.on_chain or p.orthogonal
    return p.strictly_left or p.on_chain or p.strictly_right


def membership(i: int, L: IndexSet) -> Verdict:
    """Decide whether the i-th family converges along L, from L's profile alone."""
    _check_id(i)
    if not L.infinite:
        return Verdict(Status.UNKNOWN)
    limits = [(s, component_limit(i, s)) for s in L.shapes]
    if _member_of_class(i, L):
        # every component has the same limit once L is in the class;
        # the chain component (if any) names it most specifically
        chain = [f for s, f in limits if s.kind == "chain"]
        return Verdict(Status.CONVERGENT, chain[0] if chain else limits[0][1])
    groups: list[tuple[LimitFunction, list[Shape]]] = []
    for s, f in limits:
        for g, members in groups:
            if g == f:
                members.append(s)
                break
        else:
            groups.append((f, [s]))
    if len(groups) < 2:
        # same limit along every piece even though the profile rules L out;
        # only possible when two distinct codes share a binary value
        a, b = limits[0], limits[-1]
        groups = [(a[1], [a[0]]), (b[1], [b[0]])]
    (f1, s1), (f2, s2) = groups[0], groups[1]
    return Verdict(Status.DIVERGENT, witness=Witness(IndexSet(tuple(s1)), f1, IndexSet(tuple(s2)), f2))


def membership_by_components(i: int, L: IndexSet) -> Status:
    """Independent check: L converges iff every component has the same limit."""
    if not L.infinite:
        return Status.UNKNOWN
    limits = {component_limit(i, s) for s in L.shapes}
    return Status.CONVERGENT if len(limits) == 1 else Status.DIVERGENT


# -- numeric oracle --------------------------------------------------------


def default_grid() -> list[Branch]:
    out: list[Branch] = []
    for prefix in ("", "0", "1", "01", "10"):
        for period in ("0", "1", "01"):
            b = Branch(prefix, period)
            if b not in out:
                out.append(b)
    return out


@dataclass(frozen=True)
class NumericVerdict:
    status: Status
    values: dict = field(default_factory=dict)
    point: Optional[Point] = None
    low: Optional[Fraction] = None
    high: Optional[Fraction] = None


def probe_points(fam: Family, L: IndexSet, grid: list[Branch] | None = None) -> list[Point]:
    """The grid plus every branch at which a limit along L can jump."""
    branches = list(default_grid() if grid is None else grid)
    anchors: list[Branch] = []
    for sigma in L.targets():
        anchors += [b for b in fam.anchors(sigma) if b not in anchors]
    # limits along L can only disagree at an anchor or strictly between two
    probes = list(anchors)
    for k, a in enumerate(anchors):
        for b in anchors[k + 1 :]:
            m = a.meet(b)
            probes += [s for s in (Branch(m + "0", "1"), Branch(m + "1", "0")) if s not in probes]
    branches += [b for b in probes if b not in branches]
    return fam.points(branches)


def _split(vals: list[tuple[Fraction, bool]], tol: Fraction) -> Optional[tuple[Fraction, Fraction]]:
    """Two well separated clusters, each present early and late in the window."""
    xs = sorted({v for v, _ in vals})
    if len(xs) < 2:
        return None
    gaps = [(xs[k + 1] - xs[k], k) for k in range(len(xs) - 1)]
    gap, k = max(gaps)
    lo, hi = xs[: k + 1], xs[k + 1 :]
    spread = max(lo[-1] - lo[0], hi[-1] - hi[0])
    if gap <= tol or gap <= 4 * spread:
        return None
    cut = xs[k]
    for late in (False, True):
        side = [v for v, l in vals if l == late]
        if not any(v <= cut for v in side) or not any(v > cut for v in side):
            return None
    return lo[-1], hi[0]


def numeric_convergence(
    fam: Family | int,
    L: IndexSet,
    grid: list[Branch] | None = None,
    depth: int = 12,
    tol: Fraction = Fraction(1, 10**9),
    expected: Optional[LimitFunction] = None,
) -> NumericVerdict:
    """Judge convergence of the family along L by brute evaluation.

    Divergent needs two separated clusters of values that both recur in
    the last half of the enumeration window.  Convergent needs the nodes of
    length ≥ depth-2 (at least the last three nodes) to agree within
    ``tol`` everywhere, and to match ``expected`` when one is given.
    Anything else is Unknown.
    """
    if isinstance(fam, int):
        fam = prototype_family(fam)
    if grid is not None and not grid:
        raise DomainError("grid must be nonempty")
    nodes = L.enumerate(depth)
    if not nodes:
        raise EmptyEnumeration(f"no nodes of {L} up to depth {depth}")
    if not L.infinite:
        return NumericVerdict(Status.UNKNOWN)
    points = probe_points(fam, L, grid)
    start, mid = depth // 2, (depth // 2 + depth) // 2
    window = [t for t in nodes if len(t) > start]
    late = nodes[-max(3, sum(len(t) >= depth - 2 for t in nodes)) :]
    for p in points:
        vals = [(fam.evaluate(t, p), len(t) > mid) for t in window]
        hit = _split(vals, tol)
        if hit:
            return NumericVerdict(Status.DIVERGENT, point=p, low=hit[0], high=hit[1])
    values = {}
    for p in points:
        vs = [fam.evaluate(t, p) for t in late]
        if max(vs) - min(vs) > tol:
            return NumericVerdict(Status.UNKNOWN)
        if expected is not None and abs(vs[-1] - expected(p)) > tol:
            return NumericVerdict(Status.UNKNOWN)
        values[format_point(p)] = vs[-1]
    return NumericVerdict(Status.CONVERGENT, values=values)


# -- Helly space -----------------------------------------------------------


@lru_cache(maxsize=None)
def helly_interval(t: str) -> tuple[Fraction, Fraction]:
    if not t:
        return Fraction(0), Fraction(1)
    a, b = helly_interval(t[:-1])
    third = (b - a) / 3
    return (a, a + third) if t[-1] == "0" else (a + 2 * third, b)


@dataclass(frozen=True)
class HellyIntervals:
    a: dict[str, Fraction]
    b: dict[str, Fraction]


def helly_intervals(depth: int) -> HellyIntervals:
    a, b = {}, {}
    for t in nodes_upto(depth):
        a[t], b[t] = helly_interval(t)
    return HellyIntervals(a, b)


def helly_eval(t: str, x: Fraction) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise OutOfRange(f"{x} is outside [0, 1]")
    a, b = helly_interval(t)
    if x > b:
        return Fraction(1)
    if x >= a:
        return Fraction(1, 2)
    return Fraction(0)
