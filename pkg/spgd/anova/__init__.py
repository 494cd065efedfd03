from .coupling import DenseCoupling, SeparatedCoupling, fit_coupling_residual
from .decomposition import ComponentTerms, Decomposition, anchored_decompose_exact, exact_decompose
from .model import AnovaModel
from .pipeline import AnovaConfig, fit_anova_pgd, split_cross_samples
from .sobol import SobolResult, sobol_indices
from .univariate import PolynomialTerm, SplineTerm, fit_univariate_term, fit_univariate_terms

__all__ = [
    "AnovaConfig",
    "AnovaModel",
    "ComponentTerms",
    "Decomposition",
    "DenseCoupling",
    "PolynomialTerm",
    "SeparatedCoupling",
    "SobolResult",
    "SplineTerm",
    "anchored_decompose_exact",
    "exact_decompose",
    "fit_anova_pgd",
    "fit_coupling_residual",
    "fit_univariate_term",
    "fit_univariate_terms",
    "sobol_indices",
    "split_cross_samples",
]
