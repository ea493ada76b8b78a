"""Exception taxonomy shared by the engine, the service and the CLI.

Every error carries a stable ``code`` used by the service to build error
bodies and by the CLI to pick its exit status.
"""

from __future__ import annotations

EXIT_CODES = {
    "ok": 0,
    "hypothesis-refused": 2,
    "budget-exceeded": 3,
    "ingestion-error": 4,
    "internal-invariant": 5,
}


class EngineError(Exception):
    """Base class for all engine failures."""

    code = "internal-invariant"

    def __init__(self, message: str, *, witness: str | None = None):
        super().__init__(message)
        self.witness = witness


class IngestionError(EngineError):
    """Malformed instance data: unparses, wrong shapes, violated invariants."""

    code = "ingestion-error"


class MonomialParseError(IngestionError):
    pass


class DimensionMismatchError(IngestionError):
    """Exponent vectors of different lengths mixed in one operation."""


class HypothesisError(EngineError):
    """The pair fails the minimal-prime condition; computation is refused."""

    code = "hypothesis-refused"


class BudgetExceededError(EngineError):
    """An exploration cap was hit before the computation could finish."""

    code = "budget-exceeded"


class ContainmentError(EngineError):
    """A quotient was requested for ideals that are not nested."""


class DegenerateSemigroupError(IngestionError):
    """Semigroup data with no positive-level generator."""


class InternalInvariantError(EngineError):
    """An identity the mathematics guarantees failed; this is a bug."""
