from __future__ import annotations

import dataclasses
import json
import typing
from pathlib import Path

import numpy as np

from spgd.validator import DimensionMismatchError, ValidationError

from .coupling import Coupling, DenseCoupling, coupling_from_dict
from .decomposition import ComponentTerms, TermKey
from .univariate import UnivariateTerm, term_from_dict


@dataclasses.dataclass(frozen=True, eq=False)
class AnovaModel:
    """``f0 + sum_i f_i(s_i) + f'(s)`` around the anchor ``c``."""

    anchor: np.ndarray
    f0: float
    univariate: tuple[UnivariateTerm, ...]
    coupling: Coupling
    box: tuple[tuple[float, float], ...]
    sobol: typing.Optional[dict[TermKey, float]] = None

    def __post_init__(self) -> None:
        anchor = np.asarray(self.anchor, dtype=float).reshape(-1)
        if len(self.univariate) != anchor.size or len(self.box) != anchor.size:
            raise DimensionMismatchError("Anchor, components and box must share the dimension.")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "univariate", tuple(self.univariate))
        object.__setattr__(self, "box", tuple((float(lo), float(hi)) for lo, hi in self.box))

    @property
    def d(self) -> int:
        return self.anchor.size

    def _check_points(self, points: typing.Any) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.d:
            raise DimensionMismatchError(f"Expected points with {self.d} columns, got {points.shape}.")
        return points

    def additive(self, points: typing.Any) -> np.ndarray:
        points = self._check_points(points)
        total = np.full(points.shape[0], self.f0)
        for k, term in enumerate(self.univariate):
            total += term(points[:, k])
        return total

    def evaluate_batch(self, points: typing.Any) -> np.ndarray:
        points = self._check_points(points)
        return self.additive(points) + self.coupling(points)

    def evaluate(self, point: typing.Sequence[float]) -> float:
        return float(self.evaluate_batch(np.asarray(point, dtype=float).reshape(1, -1))[0])

    __call__ = evaluate_batch

    def as_decomposition(self) -> ComponentTerms:
        """Term view for sensitivity analysis.

        A dense coupling contributes one term per pair; a separated one is
        reported as a single interaction term over all dimensions.
        """
        evaluators: dict[TermKey, typing.Callable[[np.ndarray], np.ndarray]] = {
            (k,): (lambda points, k=k: self.univariate[k](points[:, k])) for k in range(self.d)
        }
        if isinstance(self.coupling, DenseCoupling):
            for pair in self.coupling.pairs:
                evaluators[pair] = lambda points, pair=pair: self.coupling.pair_values(points)[pair]
        elif self.d > 1:
            evaluators[tuple(range(self.d))] = self.coupling
        return ComponentTerms(self.f0, self.box, evaluators)

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "anchor": self.anchor.tolist(),
            "f0": self.f0,
            "box": [list(b) for b in self.box],
            "splines": [term.to_dict() for term in self.univariate],
            "coupling": self.coupling.to_dict(),
            "sobol": None if self.sobol is None else [
                {"term": [k + 1 for k in key], "index": value} for key, value in self.sobol.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: typing.Mapping[str, typing.Any]) -> "AnovaModel":
        try:
            anchor = np.asarray(data["anchor"], dtype=float)
            sobol = data.get("sobol")
            return cls(
                anchor=anchor,
                f0=float(data["f0"]),
                univariate=tuple(term_from_dict(t) for t in data["splines"]),
                coupling=coupling_from_dict(data["coupling"], anchor),
                box=tuple(tuple(b) for b in data["box"]),
                sobol=None if sobol is None else {
                    tuple(k - 1 for k in item["term"]): float(item["index"]) for item in sobol
                },
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"Malformed ANOVA model document: {exc}.", field_name="model")

    def to_json(self, **kwargs: typing.Any) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "AnovaModel":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"Invalid ANOVA model JSON: {exc}.", field_name="model")

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(indent=2), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "AnovaModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))

