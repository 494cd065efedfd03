"""One-dimensional approximation bases evaluated on affinely mapped domains."""

from __future__ import annotations

import dataclasses
import math
import typing

import numpy as np
from numpy.polynomial import chebyshev, polynomial

from spgd.types import Family
from spgd.validator import DimensionMismatchError, InvalidInputError, ValidationError


@dataclasses.dataclass(frozen=True)
class BasisSpec:
    """A family, a degree ``D - 1`` and the interval ``[lo, hi]`` it lives on."""

    family: Family = Family.CHEBYSHEV
    degree: int = 1
    lo: float = -1.0
    hi: float = 1.0

    def __post_init__(self) -> None:
        try:
            object.__setattr__(self, "family", Family(self.family))
        except ValueError:
            raise ValidationError(f"Unknown basis family {self.family!r}.", field_name="family")
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValidationError("Degree must be a non-negative integer.", field_name="degree")
        object.__setattr__(self, "degree", int(self.degree))
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValidationError(f"Invalid domain [{lo}, {hi}].", field_name="domain")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def size(self) -> int:
        return self.degree + 1

    @property
    def is_reference(self) -> bool:
        return self.lo == -1.0 and self.hi == 1.0

    def with_degree(self, degree: int) -> "BasisSpec":
        if degree == self.degree:
            return self
        return dataclasses.replace(self, degree=degree)

    def to_unit(self, s: typing.Any) -> np.ndarray:
        """Map ``[lo, hi]`` onto ``[-1, 1]``; the reference interval maps exactly."""
        s = np.asarray(s, dtype=float)
        if self.is_reference:
            return s
        return (2.0 * s - (self.lo + self.hi)) / (self.hi - self.lo)

    def contains(self, s: typing.Any) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return (s >= self.lo) & (s <= self.hi)

    def to_dict(self) -> dict[str, typing.Any]:
        return {"family": self.family.value, "degree": self.degree, "lo": self.lo, "hi": self.hi}

    @classmethod
    def from_dict(cls, data: typing.Mapping[str, typing.Any]) -> "BasisSpec":
        return cls(
            family=data["family"],
            degree=int(data["degree"]),
            lo=float(data["lo"]),
            hi=float(data["hi"]),
        )


def eval_basis_matrix(spec: BasisSpec, s: typing.Any) -> np.ndarray:
    """Evaluate all ``D`` basis functions at every entry of ``s``.

    Returns an array of shape ``(len(s), D)``. Points outside the domain are
    extrapolated, never clamped.
    """
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if s.ndim != 1:
        raise InvalidInputError("Expected a one-dimensional array of abscissae.")
    if not np.all(np.isfinite(s)):
        raise InvalidInputError("Basis abscissae must be finite.")
    t = spec.to_unit(s)
    if spec.family == Family.CHEBYSHEV:
        return chebyshev.chebvander(t, spec.degree)
    return polynomial.polyvander(t, spec.degree)


def eval_basis(spec: BasisSpec, s: float) -> np.ndarray:
    """``(N_1(s), ..., N_D(s))`` for a single finite abscissa."""
    if not np.isscalar(s) and np.ndim(s) != 0:
        raise InvalidInputError("eval_basis takes a scalar; use eval_basis_matrix for arrays.")
    return eval_basis_matrix(spec, [s])[0]


def design_row(specs: typing.Sequence[BasisSpec], point: typing.Sequence[float], k: int) -> np.ndarray:
    """Basis row of dimension ``k`` (0-based) at ``point``."""
    point = np.asarray(point, dtype=float)
    if point.ndim != 1 or point.size != len(specs):
        raise DimensionMismatchError(
            f"Point has {point.size} coordinates, expected {len(specs)}.", field_name="point"
        )
    if not 0 <= k < len(specs):
        raise DimensionMismatchError(f"Dimension index {k} out of range.", field_name="k")
    return eval_basis(specs[k], float(point[k]))


def design_matrix(specs: typing.Sequence[BasisSpec], points: np.ndarray, k: int) -> np.ndarray:
    """Rows of :func:`design_row` stacked for every point."""
    points = np.asarray(points, dtype=float)
    if not 0 <= k < len(specs):
        raise DimensionMismatchError(f"Dimension index {k} out of range.", field_name="k")
    return eval_basis_matrix(specs[k], points[:, k])
