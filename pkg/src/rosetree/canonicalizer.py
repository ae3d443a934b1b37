"""Classify a tree-indexed family by its limits along chains and monotone antichains.

For each sampled branch σ three limit vectors are estimated on a point grid:
along the chain σ|n, along an increasing antichain converging to σ and
along a decreasing one.  Which of the three agree, and how they move with
σ, pins down one of the seven prototypes.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Protocol, Sequence

from .antichains import AntichainKind, classify_antichain
from .errors import DomainError, NotCauchy, SideUnavailable
from .families import Family, Point
from .prototypes import default_grid
from .subtrees import SubtreeGenerator, random_generator
from .tree_core import Branch

DEFAULT_SIGMAS = tuple(Branch.parse(b) for b in ("*01", "*10", "0*01", "1*10"))
DEFAULT_TOL = Fraction(1, 10**9)


class Evaluator(Protocol):
    paired: bool

    def evaluate(self, t: str, point: Point) -> Fraction: ...


@dataclass(frozen=True)
class Transported:
    """A black-box evaluator read through a subtree generator."""

    inner: Evaluator
    gen: SubtreeGenerator

    @property
    def paired(self) -> bool:
        return self.inner.paired

    def evaluate(self, t: str, point: Point) -> Fraction:
        return self.inner.evaluate(self.gen.image(t), point)


def transport_family(fam: Evaluator, gen: SubtreeGenerator) -> Evaluator:
    if isinstance(fam, Family):
        return fam.transport(gen)
    return Transported(fam, gen)


def canonical_monotone_antichain(sigma: Branch, side: str, count: int, start: int = 1) -> list[str]:
    """Nodes (σ|m)⌢0 at the positions m ≥ start where σ has a 1 (left side),
    or (σ|m)⌢1 where σ has a 0 (right side).

    The default start of 1 skips the one-bit node at the root.
    """
    if side not in ("left", "right"):
        raise DomainError(f"side must be left or right, not {side!r}")
    want, turn = ("1", "0") if side == "left" else ("0", "1")
    if want not in sigma.period:
        raise SideUnavailable(f"{sigma} has no {want} in its period, so no {side} antichain converges to it")
    out: list[str] = []
    m = start
    while len(out) < count:
        if sigma.bit(m) == want:
            out.append(sigma.take(m) + turn)
        m += 1
    return out


def _antichain_window(sigma: Branch, side: str, n0: int, n1: int) -> list[str]:
    """Terms n0..n1 of the canonical antichain, so sparse sides still give n1-n0+1 terms."""
    return canonical_monotone_antichain(sigma, side, n1 + 1)[n0:]


# -- exact extrapolation ---------------------------------------------------


def _solve3(rows: list[list[Fraction]]) -> Optional[list[Fraction]]:
    """Gaussian elimination on a 3x4 augmented matrix."""
    m = [r[:] for r in rows]
    for c in range(3):
        pivot = next((r for r in range(c, 3) if m[r][c] != 0), None)
        if pivot is None:
            return None
        m[c], m[pivot] = m[pivot], m[c]
        for r in range(3):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return [m[r][3] / m[r][r] for r in range(3)]


def extrapolate(seq: Sequence[Fraction]) -> Optional[Fraction]:
    """Exact limit of a constant-tail, geometric or (ak+b)/(k+c) sequence.

    Every model is fitted on three terms and must reproduce all the others.
    None when no model fits.
    """
    n = len(seq)
    if n >= 3 and seq[-1] == seq[-2] == seq[-3]:
        return seq[-1]
    if n < 4:
        return None
    d = [seq[k + 1] - seq[k] for k in range(n - 1)]
    if d[-3] != 0:
        r = d[-2] / d[-3]
        if abs(r) < 1 and all(d[k + 1] == r * d[k] for k in range(n - 2) if d[k] != 0 or d[k + 1] != 0):
            if all(d[k] != 0 for k in range(n - 1)):
                return seq[-1] + d[-1] * r / (1 - r)
    ks = [Fraction(k + 1) for k in range(n)]
    # f(k)(k + c) = a k + b, i.e. a k + b - f c = f k
    rows = [[ks[j], Fraction(1), -seq[j], seq[j] * ks[j]] for j in (n - 3, n - 2, n - 1)]
    sol = _solve3(rows)
    if sol is not None:
        a, b, c = sol
        if all(k + c != 0 and (a * k + b) / (k + c) == v for k, v in zip(ks, seq)):
            return a
    return None


def _limit(seq: Sequence[Fraction]) -> tuple[Fraction, Fraction]:
    """Best limit estimate and an error bound for it.

    The sequence is split into residue classes (smallest modulus first) so
    that periodic wobble does not hide an exact pattern.
    """
    if len(seq) == 1:
        return seq[0], Fraction(0)
    for mod in range(1, len(seq) // 3 + 1):
        parts = [list(seq[r::mod]) for r in range(mod)]
        lims = [extrapolate(p) for p in parts]
        if all(v is not None for v in lims) and len(set(lims)) == 1:
            return lims[0], Fraction(0)
    tail = seq[-3:]
    return seq[-1], max(tail) - min(tail)


# -- limit triples ---------------------------------------------------------


@dataclass(frozen=True)
class LimitTriple:
    sigma: Branch
    points: tuple
    g0: tuple[Fraction, ...]
    gplus: tuple[Fraction, ...]
    gminus: tuple[Fraction, ...]
    residuals: dict

    @property
    def residual(self) -> Fraction:
        return max(self.residuals.values())


def _vector(fam: Evaluator, nodes: Sequence[str], points: Sequence[Point]) -> tuple[tuple[Fraction, ...], Fraction]:
    vals, worst = [], Fraction(0)
    for p in points:
        v, r = _limit([fam.evaluate(t, p) for t in nodes])
        vals.append(v)
        worst = max(worst, r)
    return tuple(vals), worst


def _gate(nodes: list[str], side: str) -> None:
    if len(nodes) >= 2:
        kind = classify_antichain(nodes)
        want = AntichainKind.INCREASING if side == "left" else AntichainKind.DECREASING
        if kind is not want:
            raise AssertionError(f"canonical {side} antichain classified as {kind.value}")


def limit_triple(
    fam: Evaluator,
    sigma: Branch,
    points: Sequence[Point],
    window: tuple[int, int] = (4, 12),
    tol: Fraction = DEFAULT_TOL,
) -> LimitTriple:
    n0, n1 = window
    if n1 - n0 < 4:
        raise DomainError(f"window {window} is too short; need n1 - n0 >= 4")
    if not points:
        raise DomainError("grid must be nonempty")
    g0, r0 = _vector(fam, [sigma.take(n) for n in range(n0, n1 + 1)], points)
    sides = {}
    for side in ("left", "right"):
        try:
            nodes = _antichain_window(sigma, side, n0, n1)
        except SideUnavailable:
            nodes = []
        if not nodes:
            sides[side] = (g0, r0)
            continue
        _gate(nodes, side)
        sides[side] = _vector(fam, nodes, points)
    residuals = {"g0": r0, "gplus": sides["left"][1], "gminus": sides["right"][1]}
    triple = LimitTriple(sigma, tuple(points), g0, sides["left"][0], sides["right"][0], residuals)
    if triple.residual > tol:
        raise NotCauchy(f"residual {triple.residual} along {sigma} exceeds {tol}")
    return triple


# -- the decision tree -----------------------------------------------------

EQUALITIES = ("g0=g+", "g0=g-", "g+=g-")


@dataclass(frozen=True)
class EqualityPattern:
    g0_varies: bool
    equalities: frozenset
    gpm_constant: bool
    consistent: bool = True
    fresh_constant: bool = False

    def as_dict(self) -> dict:
        return {
            "g0_varies": self.g0_varies,
            "equalities": sorted(self.equalities),
            "gpm_constant": self.gpm_constant,
            "consistent": self.consistent,
        }


def _close(a: Sequence[Fraction], b: Sequence[Fraction], tol: Fraction) -> bool:
    return max((abs(x - y) for x, y in zip(a, b)), default=Fraction(0)) <= tol


def equality_pattern(triples: Sequence[LimitTriple], tol: Fraction = DEFAULT_TOL) -> EqualityPattern:
    sets = []
    for tr in triples:
        eq = set()
        if _close(tr.g0, tr.gplus, tol):
            eq.add("g0=g+")
        if _close(tr.g0, tr.gminus, tol):
            eq.add("g0=g-")
        if _close(tr.gplus, tr.gminus, tol):
            eq.add("g+=g-")
        sets.append(frozenset(eq))
    first = triples[0]
    varies = any(not _close(tr.g0, first.g0, tol) for tr in triples)
    const = all(_close(v, first.gplus, tol) for tr in triples for v in (tr.gplus, tr.gminus))
    fresh = const and all(not _close(tr.g0, first.gplus, tol) for tr in triples)
    return EqualityPattern(varies, sets[0], const, all(s == sets[0] for s in sets), fresh)


def pattern_to_id(p: EqualityPattern) -> Optional[int]:
    """The prototype a consistent pattern belongs to, or None."""
    if not p.consistent:
        return None
    eq = p.equalities
    everything = frozenset(EQUALITIES)
    if not p.g0_varies:
        return 1 if eq == everything else None
    if p.gpm_constant:
        return 5 if p.fresh_constant and eq == {"g+=g-"} else None
    if eq == everything:
        return 2
    if eq == {"g0=g+"}:
        return 3
    if eq == {"g0=g-"}:
        return 4
    if eq == {"g+=g-"}:
        return 6
    if not eq:
        return 7
    return None


@dataclass
class Classification:
    id: Optional[int]
    pattern: Optional[EqualityPattern]
    sigmas: list[Branch]
    triples: list[LimitTriple] = field(default_factory=list)
    transport_used: Optional[SubtreeGenerator] = None
    attempts: list[str] = field(default_factory=list)

    @property
    def conclusive(self) -> bool:
        return self.id is not None

    def as_dict(self) -> dict:
        out = {
            "id": self.id,
            "pattern": None if self.pattern is None else self.pattern.as_dict(),
            "sigmas": [str(s) for s in self.sigmas],
            "residuals": {
                str(tr.sigma): {k: str(v) for k, v in tr.residuals.items()} for tr in self.triples
            },
            "transport_used": None if self.transport_used is None else str(self.transport_used),
        }
        if not self.conclusive:
            out["attempts"] = self.attempts
        return out


def _grid_for(fam: Evaluator, sigmas: Sequence[Branch], grid: Optional[Sequence[Branch]]) -> list[Point]:
    branches = list(default_grid() if grid is None else grid)
    for s in sigmas:
        extra = fam.anchors(s) if isinstance(fam, Family) else [s]
        branches += [b for b in extra if b not in branches]
    if fam.paired:
        return [(c, b) for c in (1, 2) for b in branches]
    return branches


def _attempt(fam, sigmas, grid, window, tol):
    points = _grid_for(fam, sigmas, grid)
    triples = [limit_triple(fam, s, points, window, tol) for s in sigmas]
    pattern = equality_pattern(triples, tol)
    return pattern_to_id(pattern), pattern, triples


def classify(
    fam: Evaluator,
    sigmas: Sequence[Branch] = DEFAULT_SIGMAS,
    grid: Optional[Sequence[Branch]] = None,
    window: tuple[int, int] = (4, 12),
    tol: Fraction = DEFAULT_TOL,
    subtree_budget: int = 8,
    rng: Optional[random.Random] = None,
) -> Classification:
    """Match ``fam`` to one of the seven prototypes, or report Inconclusive (id None).

    When the limits do not settle or disagree across σ the family is read
    through up to ``subtree_budget`` random subtrees before giving up.
    """
    sigmas = list(sigmas)
    if len(sigmas) < 3 or len(set(sigmas)) != len(sigmas):
        raise DomainError("need at least three pairwise distinct sample branches")
    for s in sigmas:
        if "0" not in s.period or "1" not in s.period:
            raise DomainError(f"sample branch {s} must have both bits in its period")
    if window[1] - window[0] < 4:
        raise DomainError(f"window {window} is too short; need n1 - n0 >= 4")
    rng = rng or random.Random(0)
    attempts: list[str] = []
    last = Classification(None, None, sigmas)
    gen: Optional[SubtreeGenerator] = None
    current = fam
    for k in range(subtree_budget + 1):
        try:
            found, pattern, triples = _attempt(current, sigmas, grid, window, tol)
        except NotCauchy as e:
            attempts.append(f"{'identity' if gen is None else gen}: {e}")
        else:
            if found is not None:
                return Classification(found, pattern, sigmas, triples, gen, attempts)
            attempts.append(f"{'identity' if gen is None else gen}: pattern {pattern.as_dict()} matches no prototype")
            last = Classification(None, pattern, sigmas, triples, gen)
        gen = random_generator(rng)
        current = transport_family(fam, gen)
    last.attempts = attempts
    return last
