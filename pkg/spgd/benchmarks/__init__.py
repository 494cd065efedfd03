from spgd.metrics import reduction_pct, relative_l2_error

from .cases import CASES, BenchmarkCase, Thresholds, case_ids, get_case
from .functions import (
    FUNCTIONS,
    anova_2d,
    case_function,
    cheb,
    eval_case_function,
    ex1_poly5d,
    ex2_triglog5d,
    s2_ex1_cheb3d,
    s2_ex2_cheb5d,
)
from .lorenz import (
    LIBRARY_TERMS,
    Identification,
    LorenzConfig,
    SindyData,
    Trajectory,
    build_sindy_dataset,
    identification_config,
    identified_rhs,
    identify,
    integrate_rk4,
    library_matrix,
    lorenz_rhs,
    shadow_error,
    simulate_identified,
)
from .runner import CaseReport, SeedResult, lorenz_tables, plot_tables, run_case, run_case_async, run_cases_async, run_seed

__all__ = [
    "BenchmarkCase",
    "CASES",
    "CaseReport",
    "FUNCTIONS",
    "Identification",
    "LIBRARY_TERMS",
    "LorenzConfig",
    "SeedResult",
    "SindyData",
    "Thresholds",
    "Trajectory",
    "anova_2d",
    "build_sindy_dataset",
    "case_function",
    "case_ids",
    "cheb",
    "eval_case_function",
    "ex1_poly5d",
    "ex2_triglog5d",
    "get_case",
    "identification_config",
    "identified_rhs",
    "identify",
    "integrate_rk4",
    "library_matrix",
    "lorenz_rhs",
    "lorenz_tables",
    "plot_tables",
    "reduction_pct",
    "relative_l2_error",
    "run_case",
    "run_case_async",
    "run_cases_async",
    "run_seed",
    "s2_ex1_cheb3d",
    "s2_ex2_cheb5d",
    "shadow_error",
    "simulate_identified",
]
