"""Cantor-tree combinatorics, monotone antichains and the seven prototype families."""
from .errors import DomainError, ParseError, RosetreeError
from .tree_core import Branch, Chain, DecrTo, IncrTo, IndexSet, parse_index_set, profile
from .subtrees import SubtreeGenerator, parse_generator
from .antichains import AntichainKind, classify_antichain, extract_monotone
from .families import Family, parse_family, prototype_family
from .prototypes import eval_prototype, membership, numeric_convergence, q_subtree
from .equivalence import equivalent, standard_battery, transport
from .canonicalizer import classify, limit_triple

__all__ = [
    "AntichainKind",
    "Branch",
    "Chain",
    "DecrTo",
    "DomainError",
    "Family",
    "IncrTo",
    "IndexSet",
    "ParseError",
    "RosetreeError",
    "SubtreeGenerator",
    "classify",
    "classify_antichain",
    "equivalent",
    "eval_prototype",
    "extract_monotone",
    "limit_triple",
    "membership",
    "numeric_convergence",
    "parse_family",
    "parse_generator",
    "parse_index_set",
    "profile",
    "prototype_family",
    "q_subtree",
    "standard_battery",
    "transport",
]
