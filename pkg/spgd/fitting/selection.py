"""Held-out scoring of penalty candidates and the choice among them."""

from __future__ import annotations

import itertools
import logging
import typing
import warnings

import numpy as np
from sklearn.model_selection import KFold, train_test_split

from spgd.config.settings import Selection
from spgd.types import SelectionKind
from spgd.utils.concurrency import map_concurrently
from spgd.validator import SparsityFilterWarning, ValidationError

from .dataset import Dataset
from .report import ScoreTable

logger = logging.getLogger(__name__)

Folds = typing.List[typing.Tuple[np.ndarray, np.ndarray]]


class Candidate(typing.NamedTuple):
    """A model trained on one fold: its predictor and whether it passed the sparsity cap."""

    predict: typing.Callable[[np.ndarray], np.ndarray]
    sparse_ok: bool = True


FitCandidate = typing.Callable[[Dataset, float, float], Candidate]


def fold_indices(n: int, selection: Selection, seed: int) -> Folds:
    """(train, held-out) index pairs of a selection policy.

    ``train`` and datasets with a single point score on the training set
    itself. k-fold uses ``min(k, n)`` shuffled folds.
    """
    everything = np.arange(n)
    if selection.kind == SelectionKind.TRAIN or n < 2:
        return [(everything, everything)]
    if selection.kind == SelectionKind.SPLIT:
        train, held_out = train_test_split(
            everything, train_size=selection.ratio, random_state=seed, shuffle=True
        )
        return [(np.sort(train), np.sort(held_out))]
    splitter = KFold(n_splits=min(selection.folds, n), shuffle=True, random_state=seed)
    return [(train, held_out) for train, held_out in splitter.split(everything)]


def baseline_score(targets: np.ndarray, folds: Folds) -> float:
    """Held-out mean squared error of predicting zero everywhere."""
    return float(np.mean([np.mean(targets[held_out] ** 2) for _, held_out in folds]))


def choose_candidate(
    mean: typing.Sequence[float],
    se: typing.Sequence[float],
    lambdas: typing.Sequence[float],
    admissible: typing.Optional[typing.Sequence[bool]] = None,
    kind: SelectionKind = SelectionKind.KFOLD,
) -> int:
    """Index of the winning candidate.

    One-SE picks the largest penalty whose mean error is within one
    standard error of the best admissible mean; every other policy picks
    the smallest mean. Ties go to the earliest candidate.
    """
    mean = np.asarray(mean, dtype=float)
    se = np.asarray(se, dtype=float)
    lambdas = np.asarray(lambdas, dtype=float)
    pool = np.ones(mean.size, dtype=bool) if admissible is None else np.asarray(admissible, dtype=bool)
    if not pool.any():
        pool = np.ones(mean.size, dtype=bool)
    scores = np.where(pool & np.isfinite(mean), mean, np.inf)
    best = int(np.argmin(scores))
    if kind != SelectionKind.ONE_SE_KFOLD or not np.isfinite(scores[best]):
        return best
    within = np.flatnonzero(scores <= scores[best] + se[best])
    return int(within[np.argmax(lambdas[within])])


def score_candidates(
    dataset: Dataset,
    fit_candidate: FitCandidate,
    lambdas: typing.Sequence[float],
    alphas: typing.Sequence[float],
    selection: Selection,
    seed: int = 0,
    concurrent: bool = True,
    folds: typing.Optional[Folds] = None,
    warn: bool = True,
) -> ScoreTable:
    """Evaluate every ``(lambda, alpha)`` pair on every fold and pick one."""
    pairs = list(itertools.product(alphas, lambdas))
    if not pairs:
        raise ValidationError("The lambda grid is empty.", field_name="lambda_grid")
    if folds is None:
        folds = fold_indices(dataset.n, selection, seed)

    def run(job: tuple[int, int]) -> tuple[float, bool]:
        pair, fold = job
        alpha, lam = pairs[pair]
        train, held_out = folds[fold]
        candidate = fit_candidate(dataset.subset(train), lam, alpha)
        predicted = candidate.predict(dataset.points[held_out])
        return float(np.mean((dataset.targets[held_out] - predicted) ** 2)), candidate.sparse_ok

    jobs = list(itertools.product(range(len(pairs)), range(len(folds))))
    outcomes = map_concurrently(run, jobs, concurrent=concurrent)
    errors = np.array([o[0] for o in outcomes]).reshape(len(pairs), len(folds))
    sparse_ok = np.array([o[1] for o in outcomes]).reshape(len(pairs), len(folds))

    mean = errors.mean(axis=1)
    se = errors.std(axis=1, ddof=1) / np.sqrt(len(folds)) if len(folds) > 1 else np.zeros(len(pairs))
    admissible = sparse_ok.all(axis=1)
    if not admissible.any() and warn:
        logger.warning("no penalty candidate satisfies the sparsity cap, using all of them")
        warnings.warn("sparsity cap rejected every penalty candidate", SparsityFilterWarning, stacklevel=2)

    lam_values = [lam for _, lam in pairs]
    chosen = choose_candidate(mean, se, lam_values, admissible, selection.kind)
    return ScoreTable(
        lambdas=lam_values,
        alphas=[alpha for alpha, _ in pairs],
        mean=mean.tolist(),
        se=se.tolist(),
        admissible=admissible.tolist(),
        chosen=chosen,
    )


def select_lambda(
    dataset: Dataset,
    fit_candidate: FitCandidate,
    lambdas: typing.Sequence[float],
    alphas: typing.Sequence[float] = (0.0,),
    selection: Selection = Selection(),
    seed: int = 0,
    concurrent: bool = True,
) -> tuple[float, float, ScoreTable]:
    """Pick the penalty of the current enrichment step.

    A single candidate is returned as is, without fitting anything.
    """
    lambdas = list(lambdas)
    alphas = list(alphas)
    if not lambdas or not alphas:
        raise ValidationError("The lambda grid is empty.", field_name="lambda_grid")
    if len(lambdas) * len(alphas) == 1:
        table = ScoreTable(lambdas, alphas, [float("nan")], [float("nan")], [True], 0, evaluated=False)
        return lambdas[0], alphas[0], table
    table = score_candidates(dataset, fit_candidate, lambdas, alphas, selection, seed, concurrent)
    return table.lambdas[table.chosen], table.alphas[table.chosen], table
