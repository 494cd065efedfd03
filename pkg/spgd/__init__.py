__version__ = "0.1.0"

from .anova import AnovaConfig, AnovaModel, fit_anova_pgd, sobol_indices
from .basis import BasisSpec, design_matrix, eval_basis, eval_basis_matrix
from .config.settings import BaseConfig, FitConfig, Selection
from .fitting import Dataset, FitReport, fit, fit_s2pgd_dimension_scan
from .metrics import reduction_pct, relative_l2_error
from .model import Mode, SeparatedModel
from .types import CaseId, CouplingKind, Family, Method, PlanKind, SelectionKind, UnivariateKind


def get_config(**overrides) -> FitConfig:
    """A validated ``FitConfig``; keyword names are ``FitConfig`` attributes."""
    return FitConfig(**overrides)


__all__ = [
    "AnovaConfig",
    "AnovaModel",
    "BaseConfig",
    "BasisSpec",
    "CaseId",
    "CouplingKind",
    "Dataset",
    "Family",
    "FitConfig",
    "FitReport",
    "Method",
    "Mode",
    "PlanKind",
    "Selection",
    "SelectionKind",
    "SeparatedModel",
    "UnivariateKind",
    "design_matrix",
    "eval_basis",
    "eval_basis_matrix",
    "fit",
    "fit_anova_pgd",
    "fit_s2pgd_dimension_scan",
    "get_config",
    "reduction_pct",
    "relative_l2_error",
    "sobol_indices",
    "__version__",
]
