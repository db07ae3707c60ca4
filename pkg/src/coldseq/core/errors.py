"""Exception hierarchy for coldseq.

Every error is a ``ValueError`` so callers that only guard against bad
input keep working; the subclasses let the CLI choose an exit code.
"""

from typing import Iterable, Optional, Tuple


class ColdSeqError(ValueError):
    """Base class for all coldseq errors."""


class DomainError(ColdSeqError):
    """A load lies outside a compressor's admissible set, or is negative."""


class FleetValidationError(ColdSeqError):
    """Compressor or fleet data violates the model assumptions."""


class ParameterError(ColdSeqError):
    """An algorithm parameter is out of range."""


class SearchSpaceError(ColdSeqError):
    """An exhaustive search was refused because it is too large."""


class DominanceError(ColdSeqError):
    """Method costs break the expected dominance chain."""


class InfeasibleDemandError(ColdSeqError):
    """Demand exceeds what the fleet can deliver."""

    def __init__(self, message: str, shortfall_kw: float = 0.0):
        super().__init__(message)
        self.shortfall_kw = shortfall_kw


class InfeasibleStageError(InfeasibleDemandError):
    """One or more profile stages cannot be served."""

    def __init__(
        self,
        message: str,
        stages: Iterable[int] = (),
        shortfall_kw: float = 0.0,
    ):
        super().__init__(message, shortfall_kw=shortfall_kw)
        self.stages: Tuple[int, ...] = tuple(stages)

    @property
    def stage(self) -> Optional[int]:
        """First infeasible stage."""
        return self.stages[0] if self.stages else None


class SurplusCapError(InfeasibleDemandError):
    """The horizon is only serviceable with more carried surplus than allowed."""

    def __init__(self, message: str, required_cap: float = 0.0):
        super().__init__(message)
        self.required_cap = required_cap


class ProfileParseError(ColdSeqError):
    """A load-profile or plan file could not be parsed."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row
