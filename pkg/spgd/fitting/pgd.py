"""Greedy enrichment: s-PGD, rs-PGD and s2-PGD fits."""

from __future__ import annotations

import logging
import math
import typing
import warnings

import numpy as np
from sklearn.model_selection import train_test_split

from spgd.basis import BasisSpec
from spgd.config.settings import FitConfig
from spgd.metrics import relative_l2_error
from spgd.model import Mode, SeparatedModel, empty_model
from spgd.solvers import (
    DirectionSolver,
    LambdaGrid,
    default_lambda_grid,
    lambda_max,
    make_direction_solver,
    parse_lambda_grid,
)
from spgd.types import Method
from spgd.utils.concurrency import map_concurrently
from spgd.validator import DimensionMismatchError, SparsityFilterWarning

from .als import AlsResult, als_fixed_point
from .assembly import DirectionSystems
from .dataset import Dataset
from .mas import mas_next_degree
from .report import FitReport, ModeRecord
from .selection import Candidate, baseline_score, choose_candidate, fold_indices, score_candidates

logger = logging.getLogger(__name__)

EXACT_FIT_TOL = 1e-14
RESTARTS = 2


def _lambda_grid(config: FitConfig) -> LambdaGrid:
    grid = config.lambda_grid
    if grid is None:
        return default_lambda_grid()
    if isinstance(grid, LambdaGrid):
        return grid
    if isinstance(grid, str):
        return parse_lambda_grid(grid)
    return LambdaGrid(tuple(grid), relative=False)


class _Plan:
    """Per-fit constants derived from the config and the data dimension."""

    def __init__(self, config: FitConfig, dataset: Dataset) -> None:
        d = dataset.d
        self.config = config
        self.method = config.method
        if self.method == Method.S2PGD:
            sparse = tuple(range(d)) if config.sparse_dims is None else tuple(config.sparse_dims)
            if any(k >= d for k in sparse):
                raise DimensionMismatchError(
                    f"Sparse dimensions {sparse} out of range for d={d}.", field_name="sparse_dims"
                )
        else:
            sparse = ()
        self.sparse = tuple(sorted(set(sparse)))
        self.dense = tuple(k for k in range(d) if k not in self.sparse)
        self.sparse_degree = config.max_degree if config.sparse_degree is None else config.sparse_degree
        top = max(config.max_degree, self.sparse_degree if self.sparse else 0)
        self.specs = tuple(BasisSpec(config.family, top, lo, hi) for lo, hi in dataset.domain)

        if self.method == Method.SPGD:
            self.alphas: tuple[float, ...] = (0.0,)
        elif self.method == Method.S2PGD and not config.regularize_dense:
            self.alphas = (1.0,)
        else:
            self.alphas = config.alphas
        self.grid = None if self.method == Method.SPGD else _lambda_grid(config)

    def degrees(self, dense_degree: int) -> tuple[int, ...]:
        return tuple(self.sparse_degree if k in self.sparse else dense_degree for k in range(len(self.specs)))

    @property
    def penalized_dims(self) -> tuple[int, ...]:
        if self.method == Method.RSPGD:
            return tuple(range(len(self.specs)))
        if self.method == Method.S2PGD:
            return self.sparse + (self.dense if self.config.regularize_dense else ())
        return ()

    def solvers(self, lam: float, alpha: float, scales: typing.Mapping[int, float]) -> list[DirectionSolver]:
        out = []
        for k in range(len(self.specs)):
            lam_k = lam * scales.get(k, 1.0)
            if self.method == Method.SPGD:
                out.append(make_direction_solver("ols"))
            elif self.method == Method.RSPGD:
                out.append(make_direction_solver("elastic_net", lam_k, alpha))
            elif k in self.sparse:
                out.append(make_direction_solver("lasso", lam_k, 1.0))
            elif self.config.regularize_dense:
                out.append(make_direction_solver("elastic_net", lam_k, alpha))
            else:
                out.append(make_direction_solver("ols"))
        return out

    def sparse_ok(self, mode: Mode) -> bool:
        return all(
            len(mode.support(k)) <= self.config.chi_limit(k, mode.degrees[k] + 1) for k in self.sparse
        )


def _solve_mode(
    plan: _Plan,
    data: Dataset,
    degrees: tuple[int, ...],
    solvers: list[DirectionSolver],
    step: int,
    warn: bool,
) -> AlsResult:
    """Fit one mode to ``data.targets`` from the all-ones guess, restarting on collapse."""
    config = plan.config
    start = Mode.ones(degrees)
    result = None
    for attempt in range(RESTARTS + 1):
        if attempt:
            start = Mode.random(degrees, np.random.default_rng([config.seed, step, attempt]))
        model = SeparatedModel(plan.specs, (start,))
        result = als_fixed_point(
            data,
            model,
            0,
            solvers,
            tol_fp=config.tol_fp,
            max_iters=config.max_fp_iters,
            residual=data.targets,
            normalize_dims=plan.dense if plan.sparse else (),
            debias_dims=plan.sparse,
            check_descent=bool(config.debug),
            warn=False,
        )
        if not result.degenerate:
            break
    if warn:
        for message, category in dict(result.warnings).items():
            warnings.warn(message, category, stacklevel=3)
    return result


def _penalty_scales(
    plan: _Plan, data: Dataset, degrees: tuple[int, ...]
) -> tuple[float, dict[int, float]]:
    """``lambda_max`` of the all-ones direction systems and per-dimension ratios."""
    dims = plan.penalized_dims
    if not dims:
        return 0.0, {}
    systems = DirectionSystems(plan.specs, data.points, Mode.ones(degrees))
    per_dim = {k: lambda_max(systems.design(k), data.targets) for k in dims}
    top = max(per_dim.values())
    if not plan.config.per_dimension_lambda or top == 0.0:
        return top, {}
    return top, {k: value / top for k, value in per_dim.items()}


def fit(dataset: Dataset, config: typing.Optional[FitConfig] = None) -> tuple[SeparatedModel, FitReport]:
    """Greedy separated regression of ``dataset``.

    Each enrichment step scores the penalty candidates on the selection
    policy's held-out data, refits the winner on all points and accepts
    the mode when it beats predicting the current residual by zero. The
    loop stops after ``patience_modes`` consecutive rejections, at
    ``max_modes`` or once the residual vanishes.
    """
    config = config or FitConfig()
    if config.scans_dimensions:
        model, report, _ = fit_s2pgd_dimension_scan(dataset, config)
        return model, report

    plan = _Plan(config, dataset)
    model = empty_model(plan.specs, config.method.value, config.seed)
    report = FitReport(method=config.method.value, seed=config.seed)
    if plan.sparse and len(plan.sparse) == 1:
        report.penalized_dim = plan.sparse[0]

    target_norm = float(np.linalg.norm(dataset.targets))
    if target_norm == 0.0:
        report.train_error = 0.0
        report.warn("targets are identically zero, nothing to fit")
        logger.warning("targets are identically zero, returning the empty model")
        return model, report

    residual = dataset.targets.copy()
    history = [1.0]
    folds = fold_indices(dataset.n, config.selection, config.seed)
    reference = baseline_score(dataset.targets, folds)
    degree = config.initial_degree
    strikes = 0

    for step in range(config.max_modes):
        if history[-1] < EXACT_FIT_TOL:
            break
        degrees = plan.degrees(degree)
        data = dataset.with_targets(residual)
        lam_top, scales = _penalty_scales(plan, data, degrees)
        lambdas = [0.0] if plan.grid is None else list(plan.grid.resolve(lam_top))

        def fit_candidate(train: Dataset, lam: float, alpha: float) -> Candidate:
            result = _solve_mode(plan, train, degrees, plan.solvers(lam, alpha, scales), step, warn=False)
            candidate = SeparatedModel(plan.specs, (result.mode,))
            return Candidate(candidate.evaluate_batch, not result.degenerate and plan.sparse_ok(result.mode))

        table = score_candidates(
            data, fit_candidate, lambdas, plan.alphas, config.selection,
            config.seed, config.concurrent, folds, warn=False,
        )
        if not any(table.admissible):
            report.warn(f"step {step}: sparsity cap rejected every penalty candidate")
        baseline = baseline_score(residual, folds)
        lam, alpha = table.lambdas[table.chosen], table.alphas[table.chosen]

        accepted = table.best_mean < baseline * (1.0 - config.accept_tol)
        result = None
        if accepted:
            result = _solve_mode(plan, data, degrees, plan.solvers(lam, alpha, scales), step, warn=True)
            for message in result.messages:
                report.warn(f"mode {model.rank + 1}: {message}")
            accepted = not result.degenerate

        if not accepted:
            report.rejected += 1
            strikes += 1
            logger.info(
                f"mode {model.rank + 1} rejected: degrees={degrees} lambda={lam:.1e} "
                f"score={table.best_mean:.3e} baseline={baseline:.3e}"
            )
            if strikes >= config.patience_modes or degree >= config.max_degree:
                break
            degree += 1
            continue

        strikes = 0
        mode = result.mode
        model = model.push_mode(mode)
        residual = residual - SeparatedModel(plan.specs, (mode,)).evaluate_batch(dataset.points)
        train_error = float(np.linalg.norm(residual)) / target_norm
        history.append(train_error)
        report.train_curve.append(train_error)
        report.validation_curve.append(math.sqrt(max(table.best_mean, 0.0) / reference) if reference > 0 else 0.0)
        report.modes.append(
            ModeRecord(
                degrees=degrees,
                iterations=result.iterations,
                lam=lam,
                alpha=alpha,
                score=table.best_mean,
                baseline_score=baseline,
                supports={k: mode.support(k) for k in plan.sparse},
                table=table,
            )
        )
        logger.info(
            f"mode {model.rank} accepted: degrees={degrees} lambda={lam:.1e} train_err={train_error:.1e}"
        )
        degree = mas_next_degree(history, degree, config.max_degree, config.mas_tol, config.mas_patience)

    report.train_error = history[-1]
    if report.failed:
        report.warn("no mode was accepted")
        logger.warning("fit accepted no mode, returning the rank-0 model")
    return model, report


def _scan_candidate(train: Dataset, held_out: Dataset, config: FitConfig, k: int):
    model, report = fit(train, config.replace(sparse_dims=(k,)))
    predicted = model.evaluate_batch(held_out.points)
    if np.any(held_out.targets):
        error = relative_l2_error(held_out.targets, predicted)
    else:
        error = float(np.sqrt(np.mean(predicted**2)))
    caps_ok = all(
        len(mode.support(k)) <= config.chi_limit(k, mode.degrees[k] + 1) for mode in model.modes
    )
    return error, caps_ok and not report.failed


def fit_s2pgd_dimension_scan(
    dataset: Dataset, config: FitConfig
) -> tuple[SeparatedModel, FitReport, int]:
    """Try every dimension as the penalized one and keep the best predictor.

    Candidates are fitted on a seeded ``scan_ratio`` split and compared by
    held-out relative error among those whose supports respect the
    sparsity cap. The winner is refitted on the whole dataset.
    """
    base = config.replace(method=Method.S2PGD)
    d = dataset.d
    if d == 1:
        model, report = fit(dataset, base.replace(sparse_dims=(0,)))
        report.penalized_dim = 0
        return model, report, 0

    train_idx, held_idx = train_test_split(
        np.arange(dataset.n), train_size=config.scan_ratio, random_state=config.seed, shuffle=True
    )
    train = dataset.subset(np.sort(train_idx))
    held_out = dataset.subset(np.sort(held_idx))
    outcomes = map_concurrently(
        lambda k: _scan_candidate(train, held_out, base, k), range(d), concurrent=config.concurrent
    )
    errors = [error for error, _ in outcomes]
    admissible = [ok for _, ok in outcomes]
    fallback = not any(admissible)
    if fallback:
        logger.warning("no penalized dimension satisfies the sparsity cap, choosing among all of them")
        warnings.warn("sparsity cap rejected every penalized dimension", SparsityFilterWarning, stacklevel=2)
    best = choose_candidate(errors, [0.0] * d, range(d), admissible)
    logger.info(f"dimension scan picked x{best + 1}: errors={[f'{e:.2e}' for e in errors]}")

    model, report = fit(dataset, base.replace(sparse_dims=(best,)))
    report.penalized_dim = best
    report.scan_errors = dict(enumerate(errors))
    if fallback:
        report.warn("sparsity cap rejected every penalized dimension")
    return model, report, best
