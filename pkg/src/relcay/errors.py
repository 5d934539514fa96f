"""Exception types shared across the library."""
from __future__ import annotations

__all__ = [
    "RelCayError",
    "GroupSpecError",
    "CapacityError",
    "GroupMismatchError",
    "ImproperSubgroupError",
    "ConnectionSetError",
    "InternalConsistencyError",
    "PreconditionError",
    "UnknownCheckError",
]


class RelCayError(Exception):
    """Base class for all errors raised by this package."""


class GroupSpecError(RelCayError, ValueError):
    """Malformed or unsupported group-spec string."""


class CapacityError(RelCayError):
    """Requested group exceeds the configured maximum order."""


class GroupMismatchError(RelCayError):
    """Operands belong to different groups."""


class ImproperSubgroupError(RelCayError):
    """The subgroup must be proper for this operation."""


class ConnectionSetError(RelCayError, ValueError):
    """Invalid connection set (contains identity or is not inverse closed)."""


class InternalConsistencyError(RelCayError):
    """A structural self-check failed; this indicates a bug, not bad input."""


class PreconditionError(RelCayError):
    """A documented precondition of the operation does not hold."""


class UnknownCheckError(RelCayError, KeyError):
    """Requested audit check name is not registered."""
