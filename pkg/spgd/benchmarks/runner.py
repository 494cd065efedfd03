"""Runs benchmark cases over seeds and writes reports and plot data."""

from __future__ import annotations

import dataclasses
import functools
import logging
import typing
from pathlib import Path

import anyio
import numpy as np

from spgd.anova import fit_anova_pgd
from spgd.fitting import Dataset, fit
from spgd.io import write_json_async, write_text_async
from spgd.metrics import reduction_pct, relative_l2_error
from spgd.types import CaseId
from spgd.utils.concurrency import gather_in_threadpool, run_in_threadpool
from spgd.validator import InvalidInputError

from .cases import BenchmarkCase, get_case
from .lorenz import (
    LIBRARY_TERMS,
    Identification,
    LorenzConfig,
    Trajectory,
    build_sindy_dataset,
    identification_config,
    identify,
    integrate_rk4,
    shadow_error,
    simulate_identified,
)

logger = logging.getLogger(__name__)

EX1_SLICES = {
    "ex1_slice_a": (0.0, 0.0, 0.0, 0.7071),
    "ex1_slice_b": (0.0, -0.17069, -0.17069, -0.015517),
}
SLICE_POINTS = 201

LORENZ_TRUE = {
    0: {1: -10.0, 2: 10.0},
    1: {1: 28.0, 2: -1.0, 5: -1.0},
    2: {3: -8.0 / 3.0, 4: 1.0},
}
LORENZ_COEFF_RTOL = 5e-3
SHADOW_HORIZON = 1.0
SHADOW_RTOL = 0.05


@dataclasses.dataclass
class SeedResult:
    seed: int
    baseline_err: typing.Optional[float] = None
    candidate_err: typing.Optional[float] = None
    penalized_dim: typing.Optional[int] = None
    checks: dict[str, bool] = dataclasses.field(default_factory=dict)
    details: dict[str, typing.Any] = dataclasses.field(default_factory=dict)
    error: typing.Optional[str] = None
    artifacts: dict[str, typing.Any] = dataclasses.field(default_factory=dict, repr=False)

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def reduction(self) -> typing.Optional[float]:
        if self.baseline_err is None or self.candidate_err is None:
            return None
        return reduction_pct(self.baseline_err, self.candidate_err)


@dataclasses.dataclass
class CaseReport:
    case: BenchmarkCase
    results: list[SeedResult]

    @property
    def succeeded(self) -> list[SeedResult]:
        return [r for r in self.results if r.ok]

    def _median(self, values: list[typing.Optional[float]]) -> typing.Optional[float]:
        values = [v for v in values if v is not None]
        return float(np.median(values)) if values else None

    @property
    def baseline_median(self) -> typing.Optional[float]:
        return self._median([r.baseline_err for r in self.succeeded])

    @property
    def candidate_median(self) -> typing.Optional[float]:
        return self._median([r.candidate_err for r in self.succeeded])

    @property
    def reduction_median(self) -> typing.Optional[float]:
        return self._median([r.reduction for r in self.succeeded])

    def checks(self) -> dict[str, bool]:
        limits = self.case.thresholds
        done = self.succeeded
        checks: dict[str, bool] = {"seeds_succeeded": bool(done)}
        if not done:
            return checks
        if limits.candidate_max is not None:
            checks["candidate_max"] = self.candidate_median <= limits.candidate_max
        if limits.baseline_min is not None:
            checks["baseline_min"] = self.baseline_median >= limits.baseline_min
        if limits.reduction_min is not None:
            checks["reduction_min"] = self.reduction_median >= limits.reduction_min
        if limits.baseline_factor is not None:
            checks["baseline_factor"] = self.baseline_median >= limits.baseline_factor * self.candidate_median
        if limits.penalized_dim is not None:
            checks["penalized_dim"] = all(r.penalized_dim == limits.penalized_dim for r in done)
        for result in done:
            for name, passed in result.checks.items():
                checks[name] = checks.get(name, True) and passed
        return checks

    @property
    def passed(self) -> bool:
        return all(self.checks().values())

    def spread(self, values: list[typing.Optional[float]]) -> typing.Optional[list[float]]:
        values = [v for v in values if v is not None]
        return [float(np.min(values)), float(np.max(values))] if values else None

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "case": self.case.id.value,
            "seeds": [r.seed for r in self.results],
            "baseline_err": [r.baseline_err for r in self.results],
            "candidate_err": [r.candidate_err for r in self.results],
            "reduction_pct": self.reduction_median,
            "baseline_median": self.baseline_median,
            "candidate_median": self.candidate_median,
            "candidate_spread": self.spread([r.candidate_err for r in self.succeeded]),
            "penalized_dim": [None if r.penalized_dim is None else r.penalized_dim + 1 for r in self.results],
            "checks": self.checks(),
            "pass": self.passed,
            "errors": {str(r.seed): r.error for r in self.results if r.error},
            "details": {str(r.seed): r.details for r in self.results if r.details},
            "paper_ref": self.case.paper_ref,
        }


def _regression_seed(case: BenchmarkCase, seed: int, overrides: typing.Mapping[str, typing.Any]) -> SeedResult:
    f = case.function
    test = case.test_plan(seed)
    z = np.asarray(f(test.points), dtype=float)
    train = case.train_plan(seed)
    dataset = Dataset(train.points, np.asarray(f(train.points), dtype=float), case.box)

    baseline, _ = fit(dataset, case.baseline.replace(seed=seed))
    candidate_config = case.candidate.replace(seed=seed, **overrides)
    candidate, report = fit(dataset, candidate_config)
    result = SeedResult(
        seed=seed,
        baseline_err=relative_l2_error(z, baseline.evaluate_batch(test.points)),
        candidate_err=relative_l2_error(z, candidate.evaluate_batch(test.points)),
        penalized_dim=report.penalized_dim,
        details={"baseline_rank": baseline.rank, "candidate_rank": candidate.rank},
    )
    result.artifacts = {"baseline": baseline, "candidate": candidate}
    return result


def _anova_seed(case: BenchmarkCase, seed: int, overrides: typing.Mapping[str, typing.Any]) -> SeedResult:
    f = case.function
    test = case.test_plan(seed)
    z = np.asarray(f(test.points), dtype=float)
    plan = case.anova_plan(seed)
    anova = fit_anova_pgd(f, plan=plan, config=case.candidate.replace(**overrides))

    budget = plan.budget
    train = case.with_sizes(n_train=budget).train_plan(seed)
    baseline, _ = fit(Dataset(train.points, np.asarray(f(train.points), dtype=float), case.box), case.baseline.replace(seed=seed))
    result = SeedResult(
        seed=seed,
        baseline_err=relative_l2_error(z, baseline.evaluate_batch(test.points)),
        candidate_err=relative_l2_error(z, anova.evaluate_batch(test.points)),
        details={"budget": budget, "baseline_rank": baseline.rank},
    )
    result.artifacts = {"baseline": baseline, "candidate": anova}
    return result


def _lorenz_seed(case: BenchmarkCase, seed: int, overrides: typing.Mapping[str, typing.Any]) -> SeedResult:
    lorenz: LorenzConfig = case.candidate.replace(seed=seed, **overrides)
    trajectory = integrate_rk4(lorenz)
    data = build_sindy_dataset(trajectory, lorenz.samples, seed, lorenz.construction_ratio)
    found = identify(data, identification_config(seed, lorenz.construction_ratio), lorenz.stls_threshold)

    checks = {}
    for j, expected in LORENZ_TRUE.items():
        checks[f"support_{j + 1}"] = set(found.supports[j]) == set(expected)
        checks[f"coefficients_{j + 1}"] = all(
            abs(found.refit[j, i] - value) <= LORENZ_COEFF_RTOL * abs(value) for i, value in expected.items()
        )
    try:
        shadow = shadow_error(found.refit, lorenz, SHADOW_HORIZON)
    except InvalidInputError:
        shadow = float("inf")
    checks["shadow"] = shadow <= SHADOW_RTOL
    worst = max(found.construction_error + found.validation_error)
    result = SeedResult(
        seed=seed,
        candidate_err=worst,
        checks=checks,
        details={
            "supports": [[LIBRARY_TERMS[i] or "1" for i in s] for s in found.supports],
            "construction_error": found.construction_error,
            "validation_error": found.validation_error,
            "shadow_error": shadow,
            "coefficients": found.coefficient_table(),
        },
    )
    result.artifacts = {"identification": found, "trajectory": trajectory, "config": lorenz}
    return result


def run_seed(case: BenchmarkCase, seed: int, overrides: typing.Optional[typing.Mapping[str, typing.Any]] = None) -> SeedResult:
    """One seed of a case; failures are captured in the result instead of raised."""
    overrides = dict(overrides or {})
    sized = case.with_sizes(overrides.pop("n_train", None), overrides.pop("n_test", None))
    try:
        if case.id == CaseId.LORENZ_SINDY:
            result = _lorenz_seed(sized, seed, overrides)
        elif case.id == CaseId.ANOVA_2D:
            result = _anova_seed(sized, seed, overrides)
        else:
            result = _regression_seed(sized, seed, overrides)
    except Exception as exc:
        logger.error(f"{case.id.value} seed {seed} failed: {exc}")
        logger.debug("seed failure", exc_info=True)
        return SeedResult(seed=seed, error=f"{type(exc).__name__}: {exc}")
    logger.info(
        f"{case.id.value} seed {seed}: baseline_err={result.baseline_err} candidate_err={result.candidate_err}"
    )
    return result


def _csv(rows: typing.Iterable[typing.Sequence[typing.Any]], header: typing.Sequence[str]) -> str:
    lines = [",".join(header)]
    lines += [",".join(f"{v:.10g}" if isinstance(v, float) else str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def lorenz_tables(found: Identification, truth: Trajectory, config: LorenzConfig, stride: int = 10) -> dict[str, str]:
    """Coefficient table and true-versus-identified trajectory as CSV text."""
    table = found.coefficient_table()
    tables = {"lorenz_coefficients": _csv(([row[key] for key in table[0]] for row in table), list(table[0]))}
    try:
        model = simulate_identified(found.refit, config)
    except InvalidInputError as exc:
        logger.warning(f"identified system could not be simulated: {exc}")
        return tables
    rows = (
        [float(t), *map(float, a), *map(float, b)]
        for t, a, b in zip(truth.times[::stride], truth.states[::stride], model.states[::stride])
    )
    tables["lorenz_trajectory"] = _csv(rows, ["t", "x", "y", "z", "x_id", "y_id", "z_id"])
    return tables


def plot_tables(case: BenchmarkCase, result: SeedResult) -> dict[str, str]:
    """CSV text of the plot data a case produces, keyed by file stem."""
    tables: dict[str, str] = {}
    if case.id == CaseId.EX1_POLY5D and result.ok:
        lo, hi = case.box[0]
        x = np.linspace(lo, hi, SLICE_POINTS)
        for name, rest in EX1_SLICES.items():
            points = np.column_stack([x] + [np.full_like(x, v) for v in rest])
            rows = zip(
                x.tolist(),
                np.asarray(case.function(points)).tolist(),
                result.artifacts["baseline"].evaluate_batch(points).tolist(),
                result.artifacts["candidate"].evaluate_batch(points).tolist(),
            )
            tables[name] = _csv(rows, ["x", "f_true", "f_spgd", "f_candidate"])
    if case.id == CaseId.LORENZ_SINDY and result.ok:
        artifacts = result.artifacts
        tables.update(lorenz_tables(artifacts["identification"], artifacts["trajectory"], artifacts["config"]))
    return tables


async def run_case_async(
    case_id: typing.Union[str, CaseId],
    seeds: typing.Optional[typing.Sequence[int]] = None,
    overrides: typing.Optional[typing.Mapping[str, typing.Any]] = None,
    out: typing.Optional[typing.Union[str, Path]] = None,
    plots: typing.Optional[typing.Union[str, Path]] = None,
    concurrent: bool = True,
) -> CaseReport:
    case = get_case(case_id)
    seeds = list(case.default_seeds if seeds is None else seeds)
    jobs = [functools.partial(run_seed, case, seed, overrides) for seed in seeds]
    if concurrent:
        results = await gather_in_threadpool(jobs)
    else:
        results = [await run_in_threadpool(job) for job in jobs]
    report = CaseReport(case, results)
    logger.info(f"{case.id.value}: pass={report.passed} checks={report.checks()}")

    if out is not None:
        await write_json_async(Path(out), report.to_dict())
    if plots is not None and report.succeeded:
        directory = Path(plots)
        directory.mkdir(parents=True, exist_ok=True)
        for name, text in plot_tables(case, report.succeeded[0]).items():
            await write_text_async(directory / f"{name}.csv", text)
    return report


def run_case(
    case_id: typing.Union[str, CaseId],
    seeds: typing.Optional[typing.Sequence[int]] = None,
    overrides: typing.Optional[typing.Mapping[str, typing.Any]] = None,
    out: typing.Optional[typing.Union[str, Path]] = None,
    plots: typing.Optional[typing.Union[str, Path]] = None,
    concurrent: bool = True,
) -> CaseReport:
    """Fit baseline and candidate for every seed and compare them on the test plan."""
    return anyio.run(functools.partial(run_case_async, case_id, seeds, overrides, out, plots, concurrent))


async def run_cases_async(
    case_ids: typing.Sequence[typing.Union[str, CaseId]],
    seeds: typing.Optional[typing.Sequence[int]] = None,
    out: typing.Optional[typing.Union[str, Path]] = None,
    plots: typing.Optional[typing.Union[str, Path]] = None,
    concurrent: bool = True,
) -> list[CaseReport]:
    reports = [await run_case_async(case_id, seeds, None, None, plots, concurrent) for case_id in case_ids]
    if out is not None:
        document = {"cases": [r.to_dict() for r in reports], "pass": all(r.passed for r in reports)}
        await write_json_async(Path(out), document)
    return reports
