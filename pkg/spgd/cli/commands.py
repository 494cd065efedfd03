"""The ``fit``, ``predict``, ``benchmark``, ``anova`` and ``sindy`` commands."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

import anyio
import numpy as np

from spgd.anova import AnovaConfig, AnovaModel, fit_anova_pgd
from spgd.benchmarks import (
    LorenzConfig,
    build_sindy_dataset,
    case_ids,
    get_case,
    identification_config,
    identify,
    integrate_rk4,
    lorenz_tables,
    run_case,
    run_cases_async,
)
from spgd.config.settings import FitConfig
from spgd.fitting import fit
from spgd.io import read_dataset, read_json, read_table, write_json, write_predictions
from spgd.metrics import relative_l2_error
from spgd.model import SeparatedModel
from spgd.sampling import cross_plan, lhs
from spgd.validator import DimensionMismatchError, FitFailure, UnknownCaseError, ValidationError

from .errors import EXIT_ACCEPTANCE, EXIT_OK
from .options import one_based, require

logger = logging.getLogger("spgd.cli")


def fit_config(args: argparse.Namespace, d: int) -> FitConfig:
    overrides = {}
    if args.sparse_dims is not None:
        if args.sparse_dims.strip().lower() == "auto":
            overrides["sparse_dims"] = "auto"
        else:
            dims = tuple(int(v) for v in args.sparse_dims.split(",") if v.strip())
            overrides["sparse_dims"] = one_based(dims, d, "--sparse-dims")
    if args.alpha is not None:
        overrides["alpha"] = args.alpha[0] if len(args.alpha) == 1 else args.alpha
    if args.chi_lim is not None:
        overrides["chi_lim"] = args.chi_lim[0] if len(args.chi_lim) == 1 else args.chi_lim
    return FitConfig(
        method=args.method,
        family=args.family,
        initial_degree=args.degree_init,
        max_degree=args.degree_max,
        lambda_grid=args.lambda_grid,
        selection=args.select,
        sparse_degree=args.sparse_degree,
        max_modes=args.max_modes,
        patience_modes=args.patience_modes,
        tol_fp=args.tol_fp,
        max_fp_iters=args.max_fp_iters,
        per_dimension_lambda=args.per_dimension_lambda,
        regularize_dense=args.regularize_dense,
        seed=args.seed,
        concurrent=not args.no_concurrent,
        debug=args.debug,
        **overrides,
    )


def cmd_fit(args: argparse.Namespace) -> int:
    require(args, "data")
    dataset = read_dataset(args.data, args.domain or ())
    config = fit_config(args, dataset.d)
    model, report = fit(dataset, config)
    if args.out:
        model.save(args.out)
    if args.report:
        report.save(args.report)
    penalized = "" if report.penalized_dim is None else f" penalized_dim={report.penalized_dim + 1}"
    print(f"rank={report.rank} train_error={report.train_error:.6g}{penalized}")
    if report.failed:
        raise FitFailure("no mode was accepted, the model is empty")
    return EXIT_OK


def load_any_model(path: str):
    document = read_json(path)
    if isinstance(document, dict) and "anchor" in document:
        return AnovaModel.from_dict(document)
    return SeparatedModel.from_dict(document)


def cmd_predict(args: argparse.Namespace) -> int:
    require(args, "model", "data")
    model = load_any_model(args.model)
    table = read_table(args.data)
    if table.d != model.d:
        raise DimensionMismatchError(
            f"model has {model.d} inputs, {args.data} has {table.d}", field_name="--data"
        )
    predicted = model.evaluate_batch(table.points) if table.n else np.empty(0)
    if args.out:
        write_predictions(args.out, table, predicted)
    if table.targets is not None and table.n:
        print(f"relative_l2_error={relative_l2_error(table.targets, predicted):.6g}")
    return EXIT_OK


def _check_case(case: str) -> None:
    if case != "all" and case not in case_ids():
        raise UnknownCaseError(f"{case} (valid: {', '.join(case_ids())}, all)")


def cmd_benchmark(args: argparse.Namespace) -> int:
    require(args, "case")
    _check_case(args.case)
    concurrent = not args.no_concurrent
    if args.case == "all":
        reports = anyio.run(run_cases_async, case_ids(), args.seeds, args.out, args.plots, concurrent)
    else:
        overrides = {k: v for k, v in (("n_train", args.n_train), ("n_test", args.n_test)) if v is not None}
        reports = [run_case(args.case, args.seeds, overrides, args.out, args.plots, concurrent)]
    for report in reports:
        document = report.to_dict()
        print(
            f"{document['case']}: pass={document['pass']} "
            f"baseline={document['baseline_median']} candidate={document['candidate_median']} "
            f"reduction_pct={document['reduction_pct']}"
        )
        for seed, error in document["errors"].items():
            print(f"  seed {seed} failed: {error}")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_ACCEPTANCE


def anova_config(args: argparse.Namespace) -> AnovaConfig:
    return AnovaConfig(
        univariate=args.univariate,
        coupling=args.coupling,
        coupling_degree=args.coupling_degree,
        sobol_samples=args.sobol,
        concurrent=not args.no_concurrent,
    )


def _anchor(args: argparse.Namespace, box_) -> np.ndarray:
    text = (args.anchor or "center").strip().lower()
    if text in ("center", "centre"):
        return np.array([0.5 * (lo + hi) for lo, hi in box_])
    try:
        anchor = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ValidationError(f"invalid anchor {args.anchor!r}", field_name="--anchor")
    if anchor.size != len(box_):
        raise DimensionMismatchError(f"anchor needs {len(box_)} coordinates", field_name="--anchor")
    return anchor


def cmd_anova(args: argparse.Namespace) -> int:
    if (args.data is None) == (args.case is None):
        raise ValidationError("Give exactly one of --data and --case.", field_name="--data")
    config = anova_config(args)
    if args.case is not None:
        _check_case(args.case)
        case = get_case(args.case)
        box_ = case.box
        anchor = _anchor(args, box_)
        counts = args.cross_counts or (10,) * len(box_)
        if len(counts) == 1:
            counts = counts * len(box_)
        plan = cross_plan(anchor, counts, box_, args.seed).with_coupling(
            args.coupling_points, args.seed, args.push_to_boundary
        )
        model = fit_anova_pgd(case.function, plan=plan, config=config)
        print(f"budget={plan.budget} f0={model.f0:.6g}")
        if args.test:
            test = lhs(args.test, len(box_), box_, args.seed + 10000).points
            error = relative_l2_error(np.asarray(case.function(test)), model.evaluate_batch(test))
            print(f"test_relative_l2_error={error:.6g}")
    else:
        dataset = read_dataset(args.data, args.domain or ())
        anchor = None if args.anchor in (None, "center", "centre") else _anchor(args, dataset.domain)
        model = fit_anova_pgd(dataset, anchor, config=config)
        print(f"f0={model.f0:.6g}")
    if model.sobol is not None:
        for key, value in model.sobol.items():
            print(f"S{''.join(str(k + 1) for k in key)}={value:.6g}")
    if args.out:
        model.save(args.out)
    return EXIT_OK


def cmd_sindy(args: argparse.Namespace) -> int:
    lorenz = LorenzConfig(
        samples=args.samples,
        construction_ratio=args.split,
        stls_threshold=args.stls_threshold,
        dt=args.dt,
        horizon=args.horizon,
        seed=args.seed,
    )
    trajectory = integrate_rk4(lorenz)
    data = build_sindy_dataset(trajectory, lorenz.samples, lorenz.seed, lorenz.construction_ratio)
    found = identify(data, identification_config(lorenz.seed, lorenz.construction_ratio), lorenz.stls_threshold)
    for row in found.coefficient_table():
        print("  ".join(f"{v:>10.5g}" if isinstance(v, float) else f"{v:>4}" for v in row.values()))
    print(f"construction_error={found.construction_error} validation_error={found.validation_error}")
    if args.out:
        directory = Path(args.out)
        directory.mkdir(parents=True, exist_ok=True)
        write_json(
            directory / "identification.json",
            {
                "supports": [list(s) for s in found.supports],
                "coefficients": found.coefficient_table(),
                "construction_error": found.construction_error,
                "validation_error": found.validation_error,
                "config": lorenz.as_dict(),
            },
        )
        for name, text in lorenz_tables(found, trajectory, lorenz).items():
            (directory / f"{name}.csv").write_text(text, encoding="utf-8")
    return EXIT_OK
