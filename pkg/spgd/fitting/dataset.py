from __future__ import annotations

import dataclasses
import typing
import warnings

import numpy as np

from spgd.validator import DimensionMismatchError, ExtrapolationWarning, InvalidInputError, ValidationError


@dataclasses.dataclass(frozen=True, eq=False)
class Dataset:
    """``n`` sample points in ``d`` dimensions, their targets and the domain box.

    Points outside the box raise an ``ExtrapolationWarning`` unless
    ``extrapolate`` is set.
    """

    points: np.ndarray
    targets: np.ndarray
    domain: tuple[tuple[float, float], ...] = ()
    extrapolate: bool = False

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=float)
        targets = np.asarray(self.targets, dtype=float).reshape(-1)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2 or points.shape[0] < 1:
            raise InvalidInputError("A dataset needs at least one point.", field_name="points")
        if points.shape[0] != targets.size:
            raise DimensionMismatchError(
                f"{points.shape[0]} points but {targets.size} targets.", field_name="targets"
            )
        if not np.all(np.isfinite(points)):
            raise InvalidInputError("Points must be finite.", field_name="points")
        if not np.all(np.isfinite(targets)):
            raise InvalidInputError("Targets must be finite.", field_name="targets")
        domain = tuple(self.domain) or _bounding_box(points)
        domain = tuple((float(lo), float(hi)) for lo, hi in domain)
        if len(domain) != points.shape[1]:
            raise DimensionMismatchError(
                f"Domain has {len(domain)} intervals for {points.shape[1]} dimensions.", field_name="domain"
            )
        if any(not lo < hi for lo, hi in domain):
            raise ValidationError("Every domain interval needs lo < hi.", field_name="domain")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "targets", targets)
        object.__setattr__(self, "domain", domain)
        outside = 0 if self.extrapolate else int(np.count_nonzero(~self.inside_mask()))
        if outside:
            warnings.warn(f"{outside} points lie outside the domain box", ExtrapolationWarning, stacklevel=3)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def inside_mask(self) -> np.ndarray:
        lo = np.array([b[0] for b in self.domain])
        hi = np.array([b[1] for b in self.domain])
        return np.all((self.points >= lo) & (self.points <= hi), axis=1)

    def subset(self, index: typing.Sequence[int]) -> "Dataset":
        index = np.asarray(index, dtype=int)
        return Dataset(self.points[index], self.targets[index], self.domain, self.extrapolate)

    def with_targets(self, targets: np.ndarray) -> "Dataset":
        return Dataset(self.points, targets, self.domain, self.extrapolate)


def _bounding_box(points: np.ndarray) -> tuple[tuple[float, float], ...]:
    box = []
    for lo, hi in zip(points.min(axis=0), points.max(axis=0)):
        if lo == hi:
            lo, hi = lo - 1.0, hi + 1.0
        box.append((float(lo), float(hi)))
    return tuple(box)
