"""Separated (sum of rank-one products) model: storage, evaluation, JSON."""

from __future__ import annotations

import dataclasses
import itertools
import json
import typing
from pathlib import Path

import numpy as np

from spgd.basis import BasisSpec, eval_basis_matrix
from spgd.validator import DimensionMismatchError, InvalidInputError, ValidationError


@dataclasses.dataclass(frozen=True, eq=False)
class Mode:
    """One rank-one term: a coefficient vector per dimension."""

    coeffs: tuple[np.ndarray, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(np.array(c, dtype=float).reshape(-1) for c in self.coeffs)
        degrees = tuple(int(p) for p in self.degrees)
        if len(coeffs) != len(degrees):
            raise DimensionMismatchError(
                f"Mode has {len(coeffs)} coefficient vectors but {len(degrees)} degrees."
            )
        for k, (a, p) in enumerate(zip(coeffs, degrees)):
            if a.size != p + 1:
                raise DimensionMismatchError(
                    f"Dimension {k}: {a.size} coefficients for degree {p}.", field_name="coeffs"
                )
            if not np.all(np.isfinite(a)):
                raise InvalidInputError(f"Dimension {k}: non-finite coefficients.", field_name="coeffs")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "degrees", degrees)

    @property
    def d(self) -> int:
        return len(self.coeffs)

    @classmethod
    def ones(cls, degrees: typing.Sequence[int]) -> "Mode":
        return cls(tuple(np.ones(p + 1) for p in degrees), tuple(degrees))

    @classmethod
    def random(cls, degrees: typing.Sequence[int], rng: np.random.Generator) -> "Mode":
        return cls(tuple(rng.uniform(-1.0, 1.0, p + 1) for p in degrees), tuple(degrees))

    def replace_dim(self, k: int, coeffs: np.ndarray) -> "Mode":
        new = list(self.coeffs)
        new[k] = np.asarray(coeffs, dtype=float)
        return Mode(tuple(new), self.degrees)

    def is_zero(self) -> bool:
        return any(not np.any(a) for a in self.coeffs)

    def support(self, k: int, atol: float = 0.0) -> tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(np.abs(self.coeffs[k]) > atol))

    def to_dict(self) -> dict[str, typing.Any]:
        return {"degrees": list(self.degrees), "coeffs": [a.tolist() for a in self.coeffs]}

    @classmethod
    def from_dict(cls, data: typing.Mapping[str, typing.Any]) -> "Mode":
        return cls(tuple(np.asarray(a, dtype=float) for a in data["coeffs"]), tuple(data["degrees"]))


@dataclasses.dataclass(frozen=True, eq=False)
class SeparatedModel:
    """``f(s) ~ sum_m prod_k N_m^k(s^k)^T a_m^k``.

    ``specs`` carry the family and domain of every dimension; each mode
    evaluates with its own recorded degrees. Values are immutable:
    :meth:`push_mode` returns a new model.
    """

    specs: tuple[BasisSpec, ...]
    modes: tuple[Mode, ...] = ()
    meta: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "specs", tuple(self.specs))
        object.__setattr__(self, "modes", tuple(self.modes))
        if not self.specs:
            raise ValidationError("A model needs at least one dimension.", field_name="specs")
        for mode in self.modes:
            self._check_mode(mode)

    @property
    def d(self) -> int:
        return len(self.specs)

    @property
    def rank(self) -> int:
        return len(self.modes)

    def _check_mode(self, mode: Mode) -> None:
        if mode.d != self.d:
            raise DimensionMismatchError(f"Mode has {mode.d} dimensions, model has {self.d}.")

    def _check_points(self, points: typing.Any) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        if points.ndim == 1 and points.size == 0:
            points = points.reshape(0, self.d)
        if points.ndim != 2 or points.shape[1] != self.d:
            raise DimensionMismatchError(
                f"Expected points with {self.d} columns, got shape {points.shape}.", field_name="points"
            )
        if not np.all(np.isfinite(points)):
            raise InvalidInputError("Points must be finite.", field_name="points")
        return points

    def factor_values(self, points: np.ndarray, m: int) -> np.ndarray:
        """``(n, d)`` array of the one-dimensional functions of mode ``m``."""
        mode = self.modes[m]
        out = np.empty((points.shape[0], self.d))
        for k, spec in enumerate(self.specs):
            basis = eval_basis_matrix(spec.with_degree(mode.degrees[k]), points[:, k])
            out[:, k] = basis @ mode.coeffs[k]
        return out

    def evaluate_batch(self, points: typing.Any) -> np.ndarray:
        points = self._check_points(points)
        total = np.zeros(points.shape[0])
        if points.shape[0] == 0:
            return total
        for m in range(self.rank):
            total += np.prod(self.factor_values(points, m), axis=1)
        return total

    def evaluate(self, point: typing.Sequence[float]) -> float:
        point = np.asarray(point, dtype=float)
        if point.ndim != 1:
            raise DimensionMismatchError("evaluate takes a single point.", field_name="point")
        return float(self.evaluate_batch(point.reshape(1, -1))[0])

    __call__ = evaluate_batch

    def push_mode(self, mode: Mode) -> "SeparatedModel":
        self._check_mode(mode)
        return dataclasses.replace(self, modes=self.modes + (mode,))

    def replace_mode(self, m: int, mode: Mode) -> "SeparatedModel":
        self._check_mode(mode)
        modes = list(self.modes)
        modes[m] = mode
        return dataclasses.replace(self, modes=tuple(modes))

    def truncate(self, rank: int) -> "SeparatedModel":
        return dataclasses.replace(self, modes=self.modes[:rank])

    def partial_products(self, points: typing.Any, m: int, skip: int) -> np.ndarray:
        """Per-point ``prod_{j != skip} N_m^j(s^j)^T a_m^j``."""
        points = self._check_points(points)
        if not 0 <= m < self.rank:
            raise DimensionMismatchError(f"Mode index {m} out of range.", field_name="m")
        if not 0 <= skip < self.d:
            raise DimensionMismatchError(f"Dimension index {skip} out of range.", field_name="skip")
        values = self.factor_values(points, m)
        return np.prod(np.delete(values, skip, axis=1), axis=1)

    def expand_multilinear(self) -> dict[tuple[int, ...], float]:
        """Coefficients of ``prod_k s_k^{e_k}``, ``e_k in {0, 1}``.

        Only defined for degree-1 modes on the reference interval, where
        both families reduce to ``(1, s)``. Keys are the tuples of
        dimensions present in each monomial, ``()`` being the constant.
        """
        for spec in self.specs:
            if not spec.is_reference:
                raise ValidationError("Multilinear expansion needs [-1, 1] domains.", field_name="specs")
        terms: dict[tuple[int, ...], float] = {
            combo: 0.0
            for size in range(self.d + 1)
            for combo in itertools.combinations(range(self.d), size)
        }
        for mode in self.modes:
            if any(p > 1 for p in mode.degrees):
                raise ValidationError("Multilinear expansion needs degree-1 modes.", field_name="modes")
            for combo in terms:
                value = 1.0
                for k in range(self.d):
                    a = mode.coeffs[k]
                    if k in combo:
                        value *= a[1] if a.size > 1 else 0.0
                    else:
                        value *= a[0]
                terms[combo] += value
        return terms

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "d": self.d,
            "specs": [spec.to_dict() for spec in self.specs],
            "modes": [mode.to_dict() for mode in self.modes],
            "meta": {"method": str(self.meta.get("method", "")), "seed": int(self.meta.get("seed", 0))},
        }

    @classmethod
    def from_dict(cls, data: typing.Mapping[str, typing.Any]) -> "SeparatedModel":
        try:
            specs = tuple(BasisSpec.from_dict(s) for s in data["specs"])
            modes = tuple(Mode.from_dict(m) for m in data["modes"])
            meta = dict(data.get("meta") or {})
            d = int(data["d"])
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"Malformed model document: {exc}.", field_name="model")
        if d != len(specs):
            raise DimensionMismatchError(f"Model declares d={d} but lists {len(specs)} specs.")
        return cls(specs, modes, meta)

    def to_json(self, **kwargs: typing.Any) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "SeparatedModel":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"Invalid model JSON: {exc}.", field_name="model")
        return cls.from_dict(data)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(indent=2), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "SeparatedModel":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def empty_model(specs: typing.Sequence[BasisSpec], method: str = "", seed: int = 0) -> SeparatedModel:
    return SeparatedModel(tuple(specs), (), {"method": method, "seed": seed})
