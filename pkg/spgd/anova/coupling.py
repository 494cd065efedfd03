"""Residual interaction models fitted after the univariate ANOVA terms."""

from __future__ import annotations

import dataclasses
import itertools
import logging
import typing
import warnings

import numpy as np

from spgd.config.settings import FitConfig
from spgd.fitting import Dataset, fit
from spgd.model import SeparatedModel
from spgd.solvers import solve_ols, solve_ridge
from spgd.types import CouplingKind, Method
from spgd.validator import DimensionMismatchError, UnderdeterminedWarning, ValidationError

logger = logging.getLogger(__name__)

UNDERDETERMINED_RIDGE = 1e-8


@dataclasses.dataclass(frozen=True, eq=False)
class DenseCoupling:
    """``sum_{i<j} sum_{m,n>=1} b (s_i - c_i)^m (s_j - c_j)^n``.

    Every feature carries a factor ``(s_k - c_k)`` for both dimensions of
    its pair, so the model vanishes wherever a pair touches the anchor.
    """

    anchor: np.ndarray
    degree: int
    coeffs: np.ndarray

    @property
    def d(self) -> int:
        return self.anchor.size

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(itertools.combinations(range(self.d), 2))

    @property
    def exponents(self) -> list[tuple[int, int]]:
        return list(itertools.product(range(1, self.degree + 1), repeat=2))

    def features(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.d:
            raise DimensionMismatchError(f"Expected points with {self.d} columns.", field_name="points")
        shifted = points - self.anchor
        columns = [
            shifted[:, i] ** m * shifted[:, j] ** n
            for i, j in self.pairs
            for m, n in self.exponents
        ]
        return np.column_stack(columns) if columns else np.empty((points.shape[0], 0))

    def pair_values(self, points: np.ndarray) -> dict[tuple[int, int], np.ndarray]:
        features = self.features(points)
        width = len(self.exponents)
        return {
            pair: features[:, p * width:(p + 1) * width] @ self.coeffs[p * width:(p + 1) * width]
            for p, pair in enumerate(self.pairs)
        }

    def __call__(self, points: np.ndarray) -> np.ndarray:
        features = self.features(points)
        if features.shape[1] == 0:
            return np.zeros(features.shape[0])
        return features @ self.coeffs

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "kind": CouplingKind.DENSE.value,
            "degree": self.degree,
            "pairs": [list(p) for p in self.pairs],
            "coeffs": self.coeffs.tolist(),
        }


@dataclasses.dataclass(frozen=True, eq=False)
class SeparatedCoupling:
    """A separated model of the whole residual ``f'``."""

    model: SeparatedModel
    kind: CouplingKind = CouplingKind.RSPGD

    def __call__(self, points: np.ndarray) -> np.ndarray:
        return self.model.evaluate_batch(points)

    def to_dict(self) -> dict[str, typing.Any]:
        return {"kind": self.kind.value, "model": self.model.to_dict()}


Coupling = typing.Union[DenseCoupling, SeparatedCoupling]


def coupling_from_dict(data: typing.Mapping[str, typing.Any], anchor: np.ndarray) -> Coupling:
    kind = CouplingKind(data["kind"])
    if kind == CouplingKind.DENSE:
        return DenseCoupling(np.asarray(anchor, dtype=float), int(data["degree"]), np.asarray(data["coeffs"], dtype=float))
    return SeparatedCoupling(SeparatedModel.from_dict(data["model"]), kind)


def fit_coupling_residual(
    points: np.ndarray,
    residual: np.ndarray,
    anchor: typing.Sequence[float],
    kind: CouplingKind = CouplingKind.DENSE,
    degree: int = 2,
    box: typing.Optional[typing.Sequence[tuple[float, float]]] = None,
    config: typing.Optional[FitConfig] = None,
) -> Coupling:
    """Fit the interaction residual ``f' = f - f0 - sum_i f_i`` on extra samples.

    The dense kind solves least squares on anchored pair products, falling
    back to a lightly regularized solve when there are fewer samples than
    features. The separated kinds run an rs-PGD or s2-PGD fit.
    """
    anchor = np.asarray(anchor, dtype=float).reshape(-1)
    points = np.asarray(points, dtype=float).reshape(-1, anchor.size)
    residual = np.asarray(residual, dtype=float).reshape(-1)
    if points.shape[0] != residual.size:
        raise DimensionMismatchError(f"{points.shape[0]} coupling points but {residual.size} residuals.")
    kind = CouplingKind(kind)
    if degree < 1:
        raise ValidationError("Coupling degree must be at least 1.", field_name="coupling_degree")

    if kind != CouplingKind.DENSE:
        if points.shape[0] == 0:
            raise ValidationError("A separated coupling needs coupling samples.", field_name="coupling")
        method = Method.RSPGD if kind == CouplingKind.RSPGD else Method.S2PGD
        config = (config or FitConfig()).replace(method=method)
        model, _ = fit(Dataset(points, residual, tuple(box) if box else ()), config)
        return SeparatedCoupling(model, kind)

    coupling = DenseCoupling(anchor, degree, np.zeros(0))
    features = coupling.features(points)
    p = features.shape[1]
    if p == 0 or points.shape[0] == 0:
        return dataclasses.replace(coupling, coeffs=np.zeros(p))
    if points.shape[0] < p:
        logger.warning(f"coupling fit has {points.shape[0]} samples for {p} coefficients, regularizing")
        warnings.warn(
            f"{points.shape[0]} coupling samples for {p} coefficients", UnderdeterminedWarning, stacklevel=2
        )
        lam = UNDERDETERMINED_RIDGE * max(float(np.trace(features.T @ features)) / p, 1e-300)
        coeffs = solve_ridge(features, residual, lam)
    else:
        coeffs = solve_ols(features, residual)
    return dataclasses.replace(coupling, coeffs=coeffs)
