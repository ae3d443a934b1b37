"""Exception hierarchy.

Every error is either a ParseError (malformed text input) or a DomainError
(well-formed input outside an operation's domain).  The CLI maps the two
classes to distinct exit codes.
"""


class RosetreeError(Exception):
    pass


class ParseError(RosetreeError, ValueError):
    pass


class DomainError(RosetreeError, ValueError):
    pass


class ComparableNodes(DomainError):
    pass


class ShapeUnavailable(DomainError):
    pass


class InvalidGenerator(DomainError):
    pass


class DepthMismatch(DomainError):
    pass


class NotInSubtree(DomainError):
    pass


class NotSkew(DomainError):
    pass


class NotAntichain(DomainError):
    pass


class TooShort(DomainError):
    pass


class NotIncreasing(DomainError):
    pass


class NotIncreasingSubtree(DomainError):
    pass


class NotDecreasingSubtree(DomainError):
    pass


class EmptyEnumeration(DomainError):
    pass


class OutOfRange(DomainError):
    pass


class PoolTooSmall(DomainError):
    pass


class OracleUnknown(DomainError):
    pass


class NotCauchy(DomainError):
    pass


class SideUnavailable(DomainError):
    pass


class TooFewBlocks(DomainError):
    pass
