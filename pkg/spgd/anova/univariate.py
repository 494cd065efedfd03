from __future__ import annotations

import dataclasses
import typing

import numpy as np
from scipy.interpolate import CubicSpline

from spgd.basis import BasisSpec, eval_basis_matrix
from spgd.solvers import solve_ridge
from spgd.types import Family, UnivariateKind
from spgd.validator import DimensionMismatchError, ValidationError

POLYNOMIAL_RIDGE = 1e-8
POLYNOMIAL_MAX_DEGREE = 4


@dataclasses.dataclass(frozen=True, eq=False)
class SplineTerm:
    """Natural cubic spline through ``(knots, values)``; extrapolates linearly past the ends."""

    knots: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        knots = np.asarray(self.knots, dtype=float).reshape(-1)
        values = np.asarray(self.values, dtype=float).reshape(-1)
        if knots.size != values.size:
            raise DimensionMismatchError("Spline needs one value per knot.", field_name="knots")
        if knots.size < 2:
            raise ValidationError("A spline needs at least two distinct knots.", field_name="knots")
        if np.any(np.diff(knots) <= 0):
            raise ValidationError("Spline knots must be strictly increasing.", field_name="knots")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_spline", CubicSpline(knots, values, bc_type="natural"))

    def __call__(self, s: typing.Any) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = self._spline(np.clip(s, self.knots[0], self.knots[-1]))
        below, above = s < self.knots[0], s > self.knots[-1]
        if np.any(below):
            out = np.where(below, self.values[0] + self._spline(self.knots[0], 1) * (s - self.knots[0]), out)
        if np.any(above):
            out = np.where(above, self.values[-1] + self._spline(self.knots[-1], 1) * (s - self.knots[-1]), out)
        return out

    def to_dict(self) -> dict[str, typing.Any]:
        return {"kind": UnivariateKind.SPLINE.value, "knots": self.knots.tolist(), "values": self.values.tolist()}


@dataclasses.dataclass(frozen=True, eq=False)
class PolynomialTerm:
    """``sum_n a_n (T_n(s) - T_n(c))``: a Chebyshev expansion pinned to zero at the anchor."""

    coeffs: np.ndarray
    anchor: float
    lo: float
    hi: float

    def _shifted_basis(self, s: np.ndarray) -> np.ndarray:
        spec = BasisSpec(Family.CHEBYSHEV, len(self.coeffs), self.lo, self.hi)
        basis = eval_basis_matrix(spec, np.atleast_1d(s))[:, 1:]
        return basis - eval_basis_matrix(spec, [self.anchor])[:, 1:]

    def __call__(self, s: typing.Any) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return (self._shifted_basis(s.reshape(-1)) @ np.asarray(self.coeffs)).reshape(s.shape)

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "kind": UnivariateKind.POLYNOMIAL.value,
            "coeffs": np.asarray(self.coeffs).tolist(),
            "anchor": self.anchor,
            "lo": self.lo,
            "hi": self.hi,
        }


UnivariateTerm = typing.Union[SplineTerm, PolynomialTerm]


def term_from_dict(data: typing.Mapping[str, typing.Any]) -> UnivariateTerm:
    kind = data.get("kind", UnivariateKind.SPLINE.value)
    if kind == UnivariateKind.POLYNOMIAL.value:
        return PolynomialTerm(np.asarray(data["coeffs"], dtype=float), data["anchor"], data["lo"], data["hi"])
    return SplineTerm(data["knots"], data["values"])


def _knots_with_anchor(coords: np.ndarray, values: np.ndarray, anchor: float) -> tuple[np.ndarray, np.ndarray]:
    coords = np.append(coords, anchor)
    values = np.append(values, 0.0)
    order = np.argsort(coords, kind="stable")
    coords, values = coords[order], values[order]
    if np.any(np.diff(coords) == 0):
        raise ValidationError("Duplicate knots along a cross direction.", field_name="knots")
    return coords, values


def fit_univariate_term(
    coords: typing.Sequence[float],
    values: typing.Sequence[float],
    anchor: float,
    f0: float,
    kind: UnivariateKind = UnivariateKind.SPLINE,
    interval: typing.Optional[tuple[float, float]] = None,
) -> UnivariateTerm:
    """Component along one direction from samples ``f(c | s_j)``."""
    coords = np.asarray(coords, dtype=float).reshape(-1)
    values = np.asarray(values, dtype=float).reshape(-1) - f0
    if coords.size != values.size:
        raise DimensionMismatchError("One value per cross coordinate is required.")
    knots, shifted = _knots_with_anchor(coords, values, float(anchor))
    if knots.size < 2:
        raise ValidationError("Each direction needs a cross sample besides the anchor.", field_name="cross")
    if UnivariateKind(kind) == UnivariateKind.SPLINE:
        return SplineTerm(knots, shifted)

    lo, hi = interval if interval is not None else (knots[0], knots[-1])
    degree = min(knots.size - 1, POLYNOMIAL_MAX_DEGREE)
    term = PolynomialTerm(np.zeros(degree), float(anchor), float(lo), float(hi))
    design = term._shifted_basis(knots)
    lam = POLYNOMIAL_RIDGE * max(float(np.trace(design.T @ design)) / degree, 1.0)
    return dataclasses.replace(term, coeffs=solve_ridge(design, shifted, lam))


def fit_univariate_terms(
    cross: typing.Sequence[tuple[typing.Sequence[float], typing.Sequence[float]]],
    anchor: typing.Sequence[float],
    f0: float,
    kind: UnivariateKind = UnivariateKind.SPLINE,
    box: typing.Optional[typing.Sequence[tuple[float, float]]] = None,
) -> tuple[UnivariateTerm, ...]:
    """One component per dimension from ``(coords, f(c | coords))`` pairs."""
    anchor = np.asarray(anchor, dtype=float).reshape(-1)
    if len(cross) != anchor.size:
        raise DimensionMismatchError(f"Got {len(cross)} cross directions for {anchor.size} dimensions.")
    return tuple(
        fit_univariate_term(coords, values, anchor[k], f0, kind, None if box is None else box[k])
        for k, (coords, values) in enumerate(cross)
    )
