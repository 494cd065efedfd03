from __future__ import annotations

from .error_store import ErrorStore, merge_errors
from .exceptions import (
    DimensionMismatchError,
    DomainError,
    FitFailure,
    InvalidInputError,
    SpgdError,
    UnknownCaseError,
    ValidationError,
)
from .warnings import (
    ConvergenceWarning,
    DegenerateModeWarning,
    ExtrapolationWarning,
    SparsityFilterWarning,
    UnderdeterminedWarning,
)
