from __future__ import annotations

import dataclasses
import logging
import typing

import numpy as np

from spgd.sampling import from_unit

from .decomposition import ComponentTerms, Decomposition, TermKey

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class SobolResult:
    """Sensitivity index of every decomposition term.

    ``degenerate`` is set when the total variance vanishes, in which case
    every index is zero.
    """

    indices: dict[TermKey, float]
    variances: dict[TermKey, float]
    total_variance: float
    degenerate: bool = False

    def __getitem__(self, key: TermKey) -> float:
        return self.indices[tuple(sorted(key))]

    def as_list(self) -> list[float]:
        return list(self.indices.values())


def sobol_indices(source: typing.Any, n: int = 100_000, seed: int = 0, box=None) -> SobolResult:
    """``S_n = Var_n / sum_m Var_m`` by seeded Monte Carlo over the uniform box.

    ``source`` is a :class:`Decomposition`, a :class:`ComponentTerms` or
    anything with an ``as_decomposition()`` method, such as a fitted
    ANOVA model.
    """
    decomposition = source if isinstance(source, (Decomposition, ComponentTerms)) else source.as_decomposition()
    box = decomposition.box if box is None else box
    rng = np.random.default_rng(seed)
    points = from_unit(rng.random((n, decomposition.d)), box)

    variances = {key: float(np.var(values)) for key, values in decomposition.terms(points).items()}
    total = float(sum(variances.values()))
    if total <= 1e-300:
        logger.warning("total variance is zero, Sobol indices are all zero")
        return SobolResult({key: 0.0 for key in variances}, variances, 0.0, True)
    return SobolResult({key: v / total for key, v in variances.items()}, variances, total)
