"""Alternating-directions fixed point for a single enrichment mode."""

from __future__ import annotations

import dataclasses
import logging
import typing
import warnings

import numpy as np

from spgd.model import Mode, SeparatedModel
from spgd.solvers import DirectionSolver, debias_on_support, make_direction_solver, penalized_objective
from spgd.validator import ConvergenceWarning, DegenerateModeWarning, DimensionMismatchError

from .assembly import DirectionSystems, prior_residual
from .dataset import Dataset

logger = logging.getLogger(__name__)

_TINY = 1e-300


@dataclasses.dataclass(frozen=True, eq=False)
class AlsResult:
    mode: Mode
    iterations: int
    converged: bool
    degenerate: bool = False
    warnings: tuple[tuple[str, type[Warning]], ...] = ()

    @property
    def messages(self) -> tuple[str, ...]:
        return tuple(message for message, _ in self.warnings)


def _zero_mode(degrees: typing.Sequence[int]) -> Mode:
    return Mode(tuple(np.zeros(p + 1) for p in degrees), tuple(degrees))


def _per_dimension(solvers: typing.Any, d: int) -> list[DirectionSolver]:
    if solvers is None:
        return [make_direction_solver("ols")] * d
    if isinstance(solvers, DirectionSolver):
        return [solvers] * d
    solvers = list(solvers)
    if len(solvers) != d:
        raise DimensionMismatchError(f"Got {len(solvers)} solvers for {d} dimensions.", field_name="solvers")
    return solvers


def als_fixed_point(
    dataset: Dataset,
    model: SeparatedModel,
    m: int,
    solvers: typing.Any = None,
    tol_fp: float = 1e-6,
    max_iters: int = 50,
    residual: typing.Optional[np.ndarray] = None,
    normalize_dims: typing.Sequence[int] = (),
    debias_dims: typing.Sequence[int] = (),
    check_descent: bool = False,
    warn: bool = True,
) -> AlsResult:
    """Solve for mode ``m`` of ``model`` one dimension at a time.

    ``model.modes[m]`` is the starting guess. Every sweep visits the
    dimensions in order and solves the direction system with that
    dimension's solver, warm-started from the current coefficients. The
    loop stops when the largest relative change of a coefficient vector
    over a sweep drops below ``tol_fp`` or after ``max_iters`` sweeps.

    ``normalize_dims`` are rescaled to unit norm after each of their
    solves, the scale moving onto the first of ``debias_dims`` so the
    product is unchanged. After the loop the ``debias_dims`` are refitted
    by least squares on their support and the other dimensions are solved
    once more.
    """
    if not 0 <= m < model.rank:
        raise DimensionMismatchError(f"Mode index {m} out of range.", field_name="m")
    if residual is None:
        residual = prior_residual(dataset, model, m)
    d = model.d
    solvers = _per_dimension(solvers, d)
    start = model.modes[m]
    emitted: list[tuple[str, type[Warning]]] = []

    def emit(message: str, category: type[Warning]) -> None:
        emitted.append((message, category))
        if warn:
            warnings.warn(message, category, stacklevel=3)

    if max_iters == 0:
        emit("fixed point skipped: max_iters is 0", ConvergenceWarning)
        return AlsResult(start, 0, False, start.is_zero(), tuple(emitted))

    systems = DirectionSystems(model.specs, dataset.points, start)
    coeffs = [a.copy() for a in start.coeffs]
    scale_dim = debias_dims[0] if debias_dims else None
    normalize = set(normalize_dims) if scale_dim is not None else set()

    def solve_dim(k: int) -> bool:
        design = systems.design(k)
        new, converged = solvers[k].solve(design, residual, init=coeffs[k])
        if check_descent:
            before = penalized_objective(design, residual, coeffs[k], solvers[k].lam, solvers[k].alpha)
            after = penalized_objective(design, residual, new, solvers[k].lam, solvers[k].alpha)
            assert after <= before + 1e-10 * max(1.0, abs(before)), (
                f"direction {k} objective increased: {before} -> {after}"
            )
        coeffs[k] = np.asarray(new, dtype=float)
        systems.update(k, coeffs[k])
        if k in normalize:
            norm = float(np.linalg.norm(coeffs[k]))
            if norm > 0.0:
                coeffs[k] /= norm
                coeffs[scale_dim] *= norm
                systems.update(k, coeffs[k])
                systems.update(scale_dim, coeffs[scale_dim])
        return converged

    iterations = 0
    converged = False
    for iterations in range(1, max_iters + 1):
        previous = [a.copy() for a in coeffs]
        inner_ok = True
        for k in range(d):
            inner_ok &= solve_dim(k)
            if not np.any(coeffs[k]):
                emit(f"mode {m} collapsed to zero in dimension {k}", DegenerateModeWarning)
                return AlsResult(_zero_mode(start.degrees), iterations, False, True, tuple(emitted))
        change = max(
            float(np.linalg.norm(a - b)) / max(float(np.linalg.norm(a)), _TINY)
            for a, b in zip(coeffs, previous)
        )
        if not inner_ok:
            emitted.append(("coordinate descent hit its sweep cap", ConvergenceWarning))
        if change < tol_fp:
            converged = True
            break

    if not converged:
        logger.warning(f"mode {m}: fixed point not reached after {iterations} sweeps")
        emit(f"fixed point not reached after {iterations} sweeps", ConvergenceWarning)

    if debias_dims:
        for k in debias_dims:
            support = np.flatnonzero(coeffs[k])
            if support.size == 0:
                emit(f"mode {m} has an empty support in dimension {k}", DegenerateModeWarning)
                return AlsResult(_zero_mode(start.degrees), iterations, converged, True, tuple(emitted))
            coeffs[k] = debias_on_support(systems.design(k), residual, support)
            systems.update(k, coeffs[k])
        for k in range(d):
            if k not in debias_dims:
                coeffs[k] = solvers[k].solve(systems.design(k), residual, init=coeffs[k])[0]
                systems.update(k, coeffs[k])

    mode = Mode(tuple(coeffs), start.degrees)
    if mode.is_zero():
        emit(f"mode {m} collapsed to zero", DegenerateModeWarning)
        return AlsResult(_zero_mode(start.degrees), iterations, converged, True, tuple(emitted))
    return AlsResult(mode, iterations, converged, False, tuple(emitted))
