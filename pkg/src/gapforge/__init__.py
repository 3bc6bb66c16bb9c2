"""gapforge: executable gap reductions between 3XOR, label cover games and graph problems.

Every construction comes with an exact (exponential, desk-scale) oracle so the
invariants the reductions promise can be checked on concrete instances.
"""

from gapforge.errors import (
    CapacityError,
    ConsistencyError,
    DimensionError,
    GapforgeError,
    GenerationError,
    InterpretationError,
    PreconditionError,
    VocabularyError,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "ConsistencyError",
    "DimensionError",
    "GapforgeError",
    "GenerationError",
    "InterpretationError",
    "PreconditionError",
    "VocabularyError",
    "__version__",
]
