"""ANOVA-PGD: anchored univariate terms on a cross, then a residual coupling fit."""

from __future__ import annotations

import logging
import typing

import numpy as np

from spgd.config.settings import BaseConfig, FitConfig
from spgd.fitting import Dataset
from spgd.sampling import CrossPlan, check_box, inside
from spgd.types import CouplingKind, UnivariateKind
from spgd.utils.concurrency import map_concurrently
from spgd.validator import DimensionMismatchError, DomainError, ErrorStore, ValidationError

from .coupling import fit_coupling_residual
from .decomposition import BatchFunction
from .model import AnovaModel
from .sobol import sobol_indices
from .univariate import fit_univariate_terms

logger = logging.getLogger(__name__)

ANCHOR_ATOL = 1e-12


class AnovaConfig(BaseConfig):
    univariate: UnivariateKind = UnivariateKind.SPLINE

    # None picks dense up to three dimensions, rs-PGD above
    coupling: typing.Optional[CouplingKind] = None
    coupling_degree: int = 2
    coupling_fit: typing.Optional[FitConfig] = None

    sobol_samples: int = 0

    concurrent: bool = True

    def validate(self) -> None:
        store = ErrorStore()
        try:
            object.__setattr__(self, "univariate", UnivariateKind(self.univariate))
        except ValueError:
            store.store_error([f"Unknown univariate kind {self.univariate!r}."], "univariate")
        if self.coupling is not None:
            try:
                object.__setattr__(self, "coupling", CouplingKind(self.coupling))
            except ValueError:
                store.store_error([f"Unknown coupling kind {self.coupling!r}."], "coupling")
        store.check(self.coupling_degree >= 1, "Must be at least 1.", "coupling_degree")
        store.check(self.sobol_samples >= 0, "Must be non-negative.", "sobol_samples")
        store.raise_if_any()

    def coupling_kind(self, d: int) -> CouplingKind:
        if self.coupling is not None:
            return self.coupling
        return CouplingKind.DENSE if d <= 3 else CouplingKind.RSPGD


def split_cross_samples(
    points: np.ndarray, anchor: np.ndarray
) -> tuple[np.ndarray, list[np.ndarray], np.ndarray]:
    """Row indices of the anchor, of each cross direction and of the rest."""
    differs = ~np.isclose(points, anchor, rtol=0.0, atol=ANCHOR_ATOL)
    moved = differs.sum(axis=1)
    at_anchor = np.flatnonzero(moved == 0)
    cross = [np.flatnonzero((moved == 1) & differs[:, k]) for k in range(anchor.size)]
    rest = np.flatnonzero(moved >= 2)
    return at_anchor, cross, rest


def _from_dataset(dataset: Dataset, anchor: np.ndarray):
    at_anchor, cross_rows, rest = split_cross_samples(dataset.points, anchor)
    if at_anchor.size == 0:
        raise ValidationError("The dataset has no sample at the anchor.", field_name="anchor")
    f0 = float(np.mean(dataset.targets[at_anchor]))
    cross = [(dataset.points[rows, k], dataset.targets[rows]) for k, rows in enumerate(cross_rows)]
    return f0, cross, dataset.points[rest], dataset.targets[rest]


def _from_function(f: BatchFunction, plan: CrossPlan, concurrent: bool):
    anchor = plan.anchor
    f0 = float(np.asarray(f(anchor.reshape(1, -1)), dtype=float).reshape(-1)[0])

    def along(k: int) -> tuple[np.ndarray, np.ndarray]:
        coords = plan.axes[k]
        moved = np.tile(anchor, (coords.size, 1))
        moved[:, k] = coords
        return coords, np.asarray(f(moved), dtype=float).reshape(-1)

    cross = map_concurrently(along, range(plan.d), concurrent=concurrent)
    extra = plan.coupling_points()
    targets = np.asarray(f(extra), dtype=float).reshape(-1) if extra.shape[0] else np.empty(0)
    return f0, cross, extra, targets


def fit_anova_pgd(
    source: typing.Union[BatchFunction, Dataset],
    anchor: typing.Optional[typing.Sequence[float]] = None,
    plan: typing.Optional[CrossPlan] = None,
    config: typing.Optional[AnovaConfig] = None,
) -> AnovaModel:
    """Three steps: ``f0`` and the univariate terms from the cross through the
    anchor, the residual ``f'`` on the remaining samples, then a coupling
    model of that residual.

    ``source`` is either a batch function sampled on ``plan`` or a dataset
    whose rows are classified against ``anchor`` (the box centre by default).
    """
    config = config or AnovaConfig()
    if isinstance(source, Dataset):
        box = check_box(source.domain)
        centre = np.array([0.5 * (lo + hi) for lo, hi in box])
        anchor = centre if anchor is None else np.asarray(anchor, dtype=float).reshape(-1)
        if anchor.size != len(box):
            raise DimensionMismatchError("Anchor and dataset differ in dimension.", field_name="anchor")
        if not inside(anchor.reshape(1, -1), box)[0]:
            raise DomainError(f"Anchor {anchor.tolist()} lies outside the box.", field_name="anchor")
        f0, cross, extra, extra_targets = _from_dataset(source, anchor)
    else:
        if plan is None:
            raise ValidationError("Sampling a function needs a cross plan.", field_name="plan")
        if anchor is not None and not np.allclose(anchor, plan.anchor):
            raise ValidationError("The anchor must be the centre of the cross plan.", field_name="anchor")
        box = plan.box
        anchor = plan.anchor
        f0, cross, extra, extra_targets = _from_function(source, plan, config.concurrent)

    univariate = fit_univariate_terms(cross, anchor, f0, config.univariate, box)

    kind = config.coupling_kind(anchor.size)
    if extra.shape[0] == 0 and kind != CouplingKind.DENSE:
        logger.warning("no coupling samples, keeping the additive model")
        kind = CouplingKind.DENSE
    residual = extra_targets - f0 - sum(term(extra[:, k]) for k, term in enumerate(univariate))
    coupling = fit_coupling_residual(
        extra, residual, anchor, kind, config.coupling_degree, box, config.coupling_fit
    )
    model = AnovaModel(anchor, f0, univariate, coupling, box)
    logger.info(
        f"anova fit: d={anchor.size} cross={sum(len(c) for c, _ in cross)} coupling={extra.shape[0]} kind={kind.value}"
    )
    if config.sobol_samples:
        sobol = sobol_indices(model, n=config.sobol_samples, seed=0)
        model = AnovaModel(anchor, f0, univariate, coupling, box, sobol.indices)
    return model
