"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GapforgeError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(GapforgeError, ValueError):
    """Vectors or subspaces live in incompatible ambient spaces."""


class CapacityError(GapforgeError):
    """An exact oracle would exceed its configured enumeration budget."""


class GenerationError(GapforgeError):
    """A randomized construction ran out of retries."""


class ConsistencyError(GapforgeError):
    """An internal invariant failed; this signals a bug, not bad input."""


class PreconditionError(GapforgeError, ValueError):
    """Input violates a documented precondition of the operation."""


class InterpretationError(GapforgeError):
    """An interpretation does not define a structure on the given input."""


class VocabularyError(GapforgeError, ValueError):
    """Structures or formulas disagree on relation symbols or arities."""
