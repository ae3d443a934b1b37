"""Comparing families by where they converge, and moving index sets along subtrees."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable, Optional

from .errors import DomainError, OracleUnknown, PoolTooSmall
from .prototypes import Status, Verdict, membership, rename
from .families import prototype_family
from .subtrees import SubtreeGenerator
from .tree_core import Branch, Chain, DecrTo, IncrTo, IndexSet, Shape

Oracle = Callable[[IndexSet], Verdict]

NOISE_NODES = ("0", "11", "010")

DEFAULT_POOL = tuple(Branch.parse(b) for b in ("*01", "*10", "*011", "*001", "*110", "*100", "0*011"))


def prototype_oracle(i: int) -> Oracle:
    def oracle(L: IndexSet) -> Verdict:
        return membership(i, L)

    oracle.__name__ = f"K{i}"
    return oracle


@dataclass(frozen=True)
class EquivalenceVerdict:
    witness: Optional[IndexSet] = None
    left: Optional[Verdict] = None
    right: Optional[Verdict] = None

    @property
    def equivalent(self) -> bool:
        return self.witness is None

    def as_dict(self) -> dict:
        if self.witness is None:
            return {"verdict": "Equivalent"}
        return {
            "verdict": "DistinguishedBy",
            "witness": str(self.witness),
            "left": self.left.as_dict(),
            "right": self.right.as_dict(),
        }


def equivalent(left: Oracle, right: Oracle, battery: list[IndexSet]) -> EquivalenceVerdict:
    """Equivalent iff the two oracles converge on exactly the same battery elements."""
    if not battery:
        raise DomainError("battery must be nonempty")
    for L in battery:
        a, b = left(L), right(L)
        if Status.UNKNOWN in (a.status, b.status):
            raise OracleUnknown(f"oracle returned Unknown on {L}")
        if a.status != b.status:
            return EquivalenceVerdict(L, a, b)
    return EquivalenceVerdict()


def transport(L: IndexSet, S: SubtreeGenerator) -> IndexSet:
    shapes = tuple(Shape(s.kind, S.image_branch(s.target)) for s in L.shapes)
    return IndexSet(shapes, tuple(S.image(t) for t in L.nodes))


def _usable(sigma: Branch) -> bool:
    return "0" in sigma.period and "1" in sigma.period


def standard_battery(pool: list[Branch] | tuple[Branch, ...] = DEFAULT_POOL, noise: bool = True) -> list[IndexSet]:
    distinct: list[Branch] = []
    for sigma in pool:
        if not _usable(sigma):
            raise DomainError(f"pool branch {sigma} must have both bits in its period")
        if sigma not in distinct:
            distinct.append(sigma)
    if len(distinct) < 2:
        raise PoolTooSmall("the pool needs at least two distinct branches")
    out: list[IndexSet] = []
    for s in distinct:
        c, i, d = Chain(s), IncrTo(s), DecrTo(s)
        out += [c, i, d, c | i, c | d, i | d]
    for s1, s2 in combinations(distinct, 2):
        out.append(Chain(s1) | Chain(s2))
    for s1, s2 in permutations(distinct, 2):
        out.append(IncrTo(s1) | DecrTo(s2))
    if noise:
        out += [L.with_nodes(NOISE_NODES) for L in out]
    return out


def branch_renaming(i: int, L: IndexSet, S: SubtreeGenerator) -> dict[Branch, Branch]:
    """Where each branch named by a limit along L goes once L is moved along S."""
    fam = prototype_family(i)
    out: dict[Branch, Branch] = {}
    for sigma in L.targets():
        moved = S.image_branch(sigma)
        for a, b in zip(fam.anchors(sigma), fam.anchors(moved)):
            out.setdefault(a, b)
    return out


def stable_under(i: int, L: IndexSet, S: SubtreeGenerator) -> bool:
    """Membership along L and along its transport agree, limits matched up to renaming."""
    before, after = membership(i, L), membership(i, transport(L, S))
    if before.status != after.status:
        return False
    if before.limit is None:
        return after.limit is None
    table = branch_renaming(i, L, S)
    return rename(before.limit, lambda b: table.get(b, b)) == after.limit
