"""Penalized least-squares kernels solved inside every alternating step.

All objectives are written on the unscaled sum of squares::

    ||r - M a||_2^2 + lam * (1 - alpha) * ||a||_2^2 + lam * alpha * ||a||_1

so ``alpha = 0`` is ridge and ``alpha = 1`` is the Lasso. There is no
intercept: a constant basis column is penalized like any other.
"""

from __future__ import annotations

import dataclasses
import logging
import typing
import warnings

import numpy as np
import scipy.linalg

from spgd.validator import ConvergenceWarning, DimensionMismatchError, InvalidInputError, ValidationError

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
CD_TOL = 1e-8
CD_MAX_ITER = 10_000
DEFAULT_LAMBDA_GRID = "log:1e-6:1e2:25"


@dataclasses.dataclass(frozen=True, eq=False)
class PenalizedProblem:
    """A direction system ``M a ~ r`` with its penalty factors."""

    design: np.ndarray
    residual: np.ndarray
    lam: float = 0.0
    alpha: float = 0.0

    def __post_init__(self) -> None:
        design, residual = _check_system(self.design, self.residual)
        if not self.lam >= 0:
            raise ValidationError("lambda must be non-negative.", field_name="lam")
        if not 0 <= self.alpha <= 1:
            raise ValidationError("alpha must lie in [0, 1].", field_name="alpha")
        object.__setattr__(self, "design", design)
        object.__setattr__(self, "residual", residual)

    @property
    def n(self) -> int:
        return self.design.shape[0]

    @property
    def p(self) -> int:
        return self.design.shape[1]

    def objective(self, coeffs: np.ndarray) -> float:
        return penalized_objective(self.design, self.residual, coeffs, self.lam, self.alpha)


class CDResult(typing.NamedTuple):
    coeffs: np.ndarray
    n_iter: int
    converged: bool


def _check_system(design: typing.Any, residual: typing.Any) -> tuple[np.ndarray, np.ndarray]:
    design = np.asarray(design, dtype=float)
    residual = np.asarray(residual, dtype=float).reshape(-1)
    if design.ndim == 1:
        design = design.reshape(-1, 1)
    if design.ndim != 2 or design.shape[0] < 1 or design.shape[1] < 1:
        raise DimensionMismatchError(f"Design must be a non-empty matrix, got {design.shape}.")
    if design.shape[0] != residual.size:
        raise DimensionMismatchError(
            f"Design has {design.shape[0]} rows but residual has {residual.size} entries."
        )
    if not (np.all(np.isfinite(design)) and np.all(np.isfinite(residual))):
        raise InvalidInputError("Design and residual must be finite.")
    return design, residual


def _check_penalty(lam: float, alpha: float = 0.0) -> None:
    if not lam >= 0:
        raise ValidationError("lambda must be non-negative.", field_name="lam")
    if not 0 <= alpha <= 1:
        raise ValidationError("alpha must lie in [0, 1].", field_name="alpha")


def penalized_objective(design, residual, coeffs, lam: float = 0.0, alpha: float = 0.0) -> float:
    coeffs = np.asarray(coeffs, dtype=float)
    fit = float(np.sum((np.asarray(residual) - np.asarray(design) @ coeffs) ** 2))
    return fit + lam * (1.0 - alpha) * float(coeffs @ coeffs) + lam * alpha * float(np.abs(coeffs).sum())


def lambda_max(design, residual) -> float:
    """Smallest penalty for which the Lasso solution is identically zero."""
    design, residual = _check_system(design, residual)
    return 2.0 * float(np.max(np.abs(design.T @ residual)))


def solve_ols(design, residual) -> np.ndarray:
    """Least squares; minimum-norm solution when ``M^T M`` is singular."""
    design, residual = _check_system(design, residual)
    coeffs, *_ = scipy.linalg.lstsq(design, residual, cond=RANK_TOL, lapack_driver="gelsy")
    return coeffs


def solve_ridge(design, residual, lam: float) -> np.ndarray:
    """``(M^T M + lam I)^{-1} M^T r``."""
    design, residual = _check_system(design, residual)
    _check_penalty(lam)
    if lam == 0:
        return solve_ols(design, residual)
    gram = design.T @ design
    gram[np.diag_indices_from(gram)] += lam
    return scipy.linalg.solve(gram, design.T @ residual, assume_a="pos")


def soft_threshold(rho: float, threshold: float) -> float:
    if rho > threshold:
        return rho - threshold
    if rho < -threshold:
        return rho + threshold
    return 0.0


def coordinate_descent(
    design,
    residual,
    lam: float,
    alpha: float = 1.0,
    tol: float = CD_TOL,
    max_iter: int = CD_MAX_ITER,
    init: typing.Optional[np.ndarray] = None,
    check_descent: bool = False,
) -> CDResult:
    """Cyclic coordinate descent for the elastic-net objective.

    Coordinates are visited in index order every sweep. The ridge part is
    folded into the quadratic term, so each update is
    ``soft(rho_j, lam * alpha / 2) / (||m_j||^2 + lam * (1 - alpha))``.
    """
    design, residual = _check_system(design, residual)
    _check_penalty(lam, alpha)
    p = design.shape[1]
    gram = design.T @ design
    corr = design.T @ residual
    diag = np.diag(gram).copy()
    l1 = 0.5 * lam * alpha
    l2 = lam * (1.0 - alpha)

    coeffs = np.zeros(p) if init is None else np.array(init, dtype=float).reshape(p)
    previous = penalized_objective(design, residual, coeffs, lam, alpha) if check_descent else 0.0

    for sweep in range(1, max_iter + 1):
        max_change = 0.0
        for j in range(p):
            denom = diag[j] + l2
            old = coeffs[j]
            if denom <= 0.0:
                new = 0.0
            else:
                rho = corr[j] - gram[j] @ coeffs + diag[j] * old
                new = soft_threshold(rho, l1) / denom
            coeffs[j] = new
            max_change = max(max_change, abs(new - old))

        if check_descent:
            current = penalized_objective(design, residual, coeffs, lam, alpha)
            assert current <= previous + 1e-10 * max(1.0, abs(previous)), (
                f"objective increased at sweep {sweep}: {previous} -> {current}"
            )
            previous = current

        if max_change < tol:
            return CDResult(coeffs, sweep, True)

    return CDResult(coeffs, max_iter, False)


def _warn_unconverged(result: CDResult, name: str) -> None:
    if not result.converged:
        logger.warning(f"{name}: coordinate descent stopped after {result.n_iter} sweeps")
        warnings.warn(f"{name} did not converge in {result.n_iter} sweeps", ConvergenceWarning, stacklevel=3)


def solve_lasso(design, residual, lam: float, **kwargs: typing.Any) -> np.ndarray:
    """``argmin ||r - M a||^2 + lam ||a||_1``; non-convergence only warns."""
    result = coordinate_descent(design, residual, lam, alpha=1.0, **kwargs)
    _warn_unconverged(result, "lasso")
    return result.coeffs


def solve_elastic_net(design, residual, lam: float, alpha: float, **kwargs: typing.Any) -> np.ndarray:
    result = coordinate_descent(design, residual, lam, alpha=alpha, **kwargs)
    _warn_unconverged(result, "elastic net")
    return result.coeffs


def debias_on_support(design, residual, support: typing.Iterable[int]) -> np.ndarray:
    """OLS restricted to ``support`` columns, zeros elsewhere."""
    design, residual = _check_system(design, residual)
    support = np.asarray(sorted(set(int(j) for j in support)), dtype=int)
    if support.size == 0:
        raise InvalidInputError("Cannot de-bias on an empty support.", field_name="support")
    if support.min() < 0 or support.max() >= design.shape[1]:
        raise DimensionMismatchError("Support index out of range.", field_name="support")
    coeffs = np.zeros(design.shape[1])
    coeffs[support] = solve_ols(design[:, support], residual)
    return coeffs


def stls_refit(design, residual, initial, threshold: float) -> tuple[tuple[int, ...], np.ndarray]:
    """Sequential thresholded least squares started from ``initial``.

    Returns the stable support and the de-biased coefficients (zero off
    support). An empty support gives all-zero coefficients.
    """
    design, residual = _check_system(design, residual)
    if not threshold > 0:
        raise ValidationError("STLS threshold must be positive.", field_name="threshold")
    coeffs = np.asarray(initial, dtype=float).reshape(design.shape[1]).copy()
    support = np.abs(coeffs) >= threshold

    for _ in range(design.shape[1] + 1):
        if not support.any():
            return (), np.zeros(design.shape[1])
        coeffs = debias_on_support(design, residual, np.flatnonzero(support))
        refreshed = np.abs(coeffs) >= threshold
        if np.array_equal(refreshed, support):
            break
        support = refreshed

    coeffs[~support] = 0.0
    return tuple(int(j) for j in np.flatnonzero(support)), coeffs


@dataclasses.dataclass(frozen=True)
class LambdaGrid:
    """Candidate penalties, either absolute or relative to ``lambda_max``."""

    values: tuple[float, ...]
    relative: bool = True

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValidationError("The lambda grid is empty.", field_name="lambda_grid")
        if any(not v >= 0 for v in values):
            raise ValidationError("Penalties must be non-negative.", field_name="lambda_grid")
        object.__setattr__(self, "values", values)

    def resolve(self, lam_max: float) -> tuple[float, ...]:
        if not self.relative:
            return self.values
        return tuple(v * lam_max for v in self.values)

    def __len__(self) -> int:
        return len(self.values)


def parse_lambda_grid(text: str) -> LambdaGrid:
    """``log:lo:hi:n`` (geometric, relative to lambda_max) or ``v1,v2,...`` (absolute)."""
    text = text.strip()
    try:
        if text.startswith("log:"):
            _, lo, hi, n = text.split(":")
            return LambdaGrid(tuple(np.geomspace(float(lo), float(hi), int(n))), relative=True)
        return LambdaGrid(tuple(float(v) for v in text.split(",") if v.strip()), relative=False)
    except ValueError:
        raise ValidationError(f"Invalid lambda grid {text!r}.", field_name="lambda_grid")


def default_lambda_grid() -> LambdaGrid:
    return parse_lambda_grid(DEFAULT_LAMBDA_GRID)


@dataclasses.dataclass(frozen=True)
class DirectionSolver:
    """A penalized solver with fixed hyperparameters for one direction."""

    kind: str = "ols"
    lam: float = 0.0
    alpha: float = 0.0

    @property
    def penalized(self) -> bool:
        return self.kind != "ols" and self.lam > 0

    def solve(self, design, residual, init=None) -> tuple[np.ndarray, bool]:
        if not self.penalized:
            return solve_ols(design, residual), True
        if self.kind == "ridge" or (self.kind == "elastic_net" and self.alpha == 0):
            return solve_ridge(design, residual, self.lam), True
        alpha = 1.0 if self.kind == "lasso" else self.alpha
        result = coordinate_descent(design, residual, self.lam, alpha=alpha, init=init)
        return result.coeffs, result.converged


def make_direction_solver(kind: str, lam: float = 0.0, alpha: float = 0.0) -> DirectionSolver:
    if kind not in ("ols", "ridge", "lasso", "elastic_net"):
        raise ValidationError(f"Unknown solver {kind!r}.", field_name="solver")
    _check_penalty(lam, alpha)
    return DirectionSolver(kind, float(lam), float(alpha))
