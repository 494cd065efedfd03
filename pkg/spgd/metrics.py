from __future__ import annotations

import numpy as np

from spgd.validator import DimensionMismatchError, InvalidInputError


def relative_l2_error(z, z_pred) -> float:
    """``||z - z_pred||_2 / ||z||_2``."""
    z = np.asarray(z, dtype=float).reshape(-1)
    z_pred = np.asarray(z_pred, dtype=float).reshape(-1)
    if z.shape != z_pred.shape:
        raise DimensionMismatchError(f"Vectors differ in length: {z.size} vs {z_pred.size}.")
    norm = float(np.linalg.norm(z))
    if norm == 0.0:
        raise InvalidInputError("Reference vector has zero norm.", field_name="z")
    return float(np.linalg.norm(z - z_pred)) / norm


def reduction_pct(baseline_err: float, candidate_err: float) -> float:
    """Error reduction of the candidate with respect to the baseline, in percent."""
    if baseline_err == 0:
        return 0.0
    return 100.0 * (baseline_err - candidate_err) / baseline_err
