"""ANOVA term evaluators: anchored (cut-HDMR) and exact expectation-based.

Functions are batch callables: they take an ``(n, d)`` array and return
``n`` values.
"""

from __future__ import annotations

import dataclasses
import itertools
import typing

import numpy as np

from spgd.sampling import Box, check_box, inside
from spgd.validator import DimensionMismatchError, DomainError, ValidationError

BatchFunction = typing.Callable[[np.ndarray], np.ndarray]
TermKey = typing.Tuple[int, ...]


def _evaluate(f: BatchFunction, points: np.ndarray) -> np.ndarray:
    values = np.asarray(f(points), dtype=float).reshape(-1)
    if values.size != points.shape[0]:
        raise DimensionMismatchError(f"Function returned {values.size} values for {points.shape[0]} points.")
    return values


def _term_keys(d: int, order: int) -> list[TermKey]:
    if order not in (1, 2):
        raise ValidationError("Decomposition order must be 1 or 2.", field_name="order")
    keys: list[TermKey] = [(i,) for i in range(d)]
    if order == 2:
        keys += list(itertools.combinations(range(d), 2))
    return keys


@dataclasses.dataclass(frozen=True, eq=False)
class Decomposition:
    """``f0`` plus a callable per term; term ``(i, j)`` excludes its lower-order parts."""

    f0: float
    box: tuple[tuple[float, float], ...]
    conditional: typing.Callable[[TermKey, np.ndarray], np.ndarray]
    order: int = 2
    anchor: typing.Optional[np.ndarray] = None

    @property
    def d(self) -> int:
        return len(self.box)

    def keys(self) -> list[TermKey]:
        return _term_keys(self.d, self.order)

    def term(self, key: TermKey, points: np.ndarray) -> np.ndarray:
        """Value of term ``key`` at ``points`` (only the coordinates in ``key`` matter)."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.d:
            raise DimensionMismatchError(f"Expected points with {self.d} columns.", field_name="points")
        key = tuple(sorted(key))
        if len(key) == 1:
            return self.conditional(key, points) - self.f0
        if len(key) == 2 and self.order == 2:
            i, j = key
            return (
                self.conditional(key, points)
                - self.term((i,), points)
                - self.term((j,), points)
                - self.f0
            )
        raise ValidationError(f"No term {key} in an order-{self.order} decomposition.", field_name="key")

    def terms(self, points: np.ndarray) -> dict[TermKey, np.ndarray]:
        return {key: self.term(key, points) for key in self.keys()}

    def truncated(self, points: np.ndarray) -> np.ndarray:
        """``f0`` plus every term of the decomposition."""
        points = np.asarray(points, dtype=float)
        return self.f0 + sum(self.terms(points).values())


def anchored_decompose_exact(
    f: BatchFunction,
    anchor: typing.Sequence[float],
    order: int = 2,
    box: typing.Optional[Box] = None,
) -> Decomposition:
    """Anchored decomposition: expectations replaced by values on lines through ``anchor``.

    ``f0 = f(c)``, ``f_i(s) = f(c | s_i) - f0`` and
    ``f_ij(s) = f(c | s_i, s_j) - f_i - f_j - f0``.
    """
    anchor = np.asarray(anchor, dtype=float).reshape(-1)
    box = check_box(box) if box is not None else tuple((a - 1.0, a + 1.0) for a in anchor)
    if anchor.size != len(box):
        raise DimensionMismatchError("Anchor and box differ in dimension.", field_name="anchor")
    if not inside(anchor.reshape(1, -1), box)[0]:
        raise DomainError(f"Anchor {anchor.tolist()} lies outside the box.", field_name="anchor")
    _term_keys(anchor.size, order)
    f0 = float(_evaluate(f, anchor.reshape(1, -1))[0])

    def conditional(key: TermKey, points: np.ndarray) -> np.ndarray:
        moved = np.tile(anchor, (points.shape[0], 1))
        moved[:, key] = points[:, key]
        return _evaluate(f, moved)

    return Decomposition(f0, box, conditional, order, anchor)


def exact_decompose(f: BatchFunction, box: Box, order: int = 2, nodes: int = 8) -> Decomposition:
    """Classical ANOVA under the uniform measure on ``box``.

    Conditional expectations over the free coordinates use a tensor
    Gauss-Legendre rule with ``nodes`` points per dimension, exact for
    polynomials of degree below ``2 * nodes``.
    """
    box = check_box(box)
    d = len(box)
    _term_keys(d, order)
    if nodes < 1:
        raise ValidationError("Need at least one quadrature node.", field_name="nodes")
    ref_nodes, ref_weights = np.polynomial.legendre.leggauss(nodes)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])

    def rule(dims: typing.Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        if not dims:
            return np.empty((1, 0)), np.ones(1)
        grid = np.array(list(itertools.product(ref_nodes, repeat=len(dims))))
        weights = np.prod(np.array(list(itertools.product(ref_weights, repeat=len(dims)))), axis=1) / 2 ** len(dims)
        scaled = 0.5 * (lo[list(dims)] + hi[list(dims)]) + 0.5 * (hi[list(dims)] - lo[list(dims)]) * grid
        return scaled, weights

    def conditional(key: TermKey, points: np.ndarray) -> np.ndarray:
        free = [k for k in range(d) if k not in key]
        grid, weights = rule(free)
        n, q = points.shape[0], weights.size
        full = np.repeat(points, q, axis=0)
        full[:, free] = np.tile(grid, (n, 1))
        return _evaluate(f, full).reshape(n, q) @ weights

    f0 = float(conditional((), np.zeros((1, d)))[0])
    return Decomposition(f0, box, conditional, order)


@dataclasses.dataclass(frozen=True, eq=False)
class ComponentTerms:
    """Fitted components exposed with the same term interface as :class:`Decomposition`."""

    f0: float
    box: tuple[tuple[float, float], ...]
    evaluators: dict[TermKey, typing.Callable[[np.ndarray], np.ndarray]]

    @property
    def d(self) -> int:
        return len(self.box)

    def keys(self) -> list[TermKey]:
        return list(self.evaluators)

    def term(self, key: TermKey, points: np.ndarray) -> np.ndarray:
        return self.evaluators[tuple(sorted(key))](np.asarray(points, dtype=float))

    def terms(self, points: np.ndarray) -> dict[TermKey, np.ndarray]:
        return {key: self.term(key, points) for key in self.keys()}
