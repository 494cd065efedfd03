from .als import AlsResult, als_fixed_point
from .assembly import DirectionSystems, assemble_direction_system, prior_residual
from .dataset import Dataset
from .mas import mas_next_degree
from .pgd import fit, fit_s2pgd_dimension_scan
from .report import FitReport, ModeRecord, ScoreTable
from .selection import Candidate, baseline_score, choose_candidate, fold_indices, score_candidates, select_lambda

__all__ = [
    "AlsResult",
    "Candidate",
    "Dataset",
    "DirectionSystems",
    "FitReport",
    "ModeRecord",
    "ScoreTable",
    "als_fixed_point",
    "assemble_direction_system",
    "baseline_score",
    "choose_candidate",
    "fit",
    "fit_s2pgd_dimension_scan",
    "fold_indices",
    "mas_next_degree",
    "prior_residual",
    "score_candidates",
    "select_lambda",
]
