from __future__ import annotations

import typing

import numpy as np

from spgd.basis import BasisSpec, eval_basis_matrix
from spgd.model import Mode, SeparatedModel
from spgd.solvers import PenalizedProblem
from spgd.validator import DimensionMismatchError

from .dataset import Dataset


def prior_residual(dataset: Dataset, model: SeparatedModel, m: int) -> np.ndarray:
    """Targets minus the first ``m`` modes of ``model``."""
    if m == 0:
        return dataset.targets.copy()
    return dataset.targets - model.truncate(m).evaluate_batch(dataset.points)


def assemble_direction_system(
    dataset: Dataset,
    model: SeparatedModel,
    m: int,
    k: int,
    lam: float = 0.0,
    alpha: float = 0.0,
    residual: typing.Optional[np.ndarray] = None,
) -> PenalizedProblem:
    """Linear system for the coefficients of mode ``m`` along dimension ``k``.

    Row ``i`` is the basis of dimension ``k`` at point ``i`` scaled by the
    product of the other factors of mode ``m``. The right-hand side is the
    residual left by modes ``0..m-1`` unless ``residual`` is given.
    """
    if dataset.d != model.d:
        raise DimensionMismatchError(f"Dataset has {dataset.d} dimensions, model has {model.d}.")
    if not 0 <= m < model.rank:
        raise DimensionMismatchError(f"Mode index {m} out of range.", field_name="m")
    if not 0 <= k < model.d:
        raise DimensionMismatchError(f"Dimension index {k} out of range.", field_name="k")
    if residual is None:
        residual = prior_residual(dataset, model, m)
    spec = model.specs[k].with_degree(model.modes[m].degrees[k])
    others = model.partial_products(dataset.points, m, k)
    design = others[:, None] * eval_basis_matrix(spec, dataset.points[:, k])
    return PenalizedProblem(design, residual, lam, alpha)


class DirectionSystems:
    """Basis matrices and factor values of one mode over a fixed point set.

    Keeps the per-dimension factors current as coefficients change, so a
    sweep of alternating solves costs one matrix-vector product per update.
    """

    def __init__(self, specs: typing.Sequence[BasisSpec], points: np.ndarray, mode: Mode) -> None:
        if len(specs) != mode.d or points.shape[1] != mode.d:
            raise DimensionMismatchError("Specs, points and mode must share the dimension.")
        self.bases = [
            eval_basis_matrix(spec.with_degree(p), points[:, k])
            for k, (spec, p) in enumerate(zip(specs, mode.degrees))
        ]
        self.factors = np.column_stack([basis @ a for basis, a in zip(self.bases, mode.coeffs)])

    def design(self, k: int) -> np.ndarray:
        others = np.prod(np.delete(self.factors, k, axis=1), axis=1)
        return others[:, None] * self.bases[k]

    def update(self, k: int, coeffs: np.ndarray) -> None:
        self.factors[:, k] = self.bases[k] @ coeffs

    def values(self) -> np.ndarray:
        return np.prod(self.factors, axis=1)
