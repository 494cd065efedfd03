from __future__ import annotations

import dataclasses
import json
import math
import typing
from pathlib import Path

from spgd.io.encoding import json_default


def _finite_or_none(value: float) -> typing.Optional[float]:
    value = float(value)
    return value if math.isfinite(value) else None


@dataclasses.dataclass
class ScoreTable:
    """Held-out scores of every (lambda, alpha) candidate at one enrichment step."""

    lambdas: list[float]
    alphas: list[float]
    mean: list[float]
    se: list[float]
    admissible: list[bool]
    chosen: int = 0
    evaluated: bool = True

    @property
    def best_mean(self) -> float:
        return self.mean[self.chosen]

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "lambda": self.lambdas,
            "alpha": self.alphas,
            "mean": [_finite_or_none(v) for v in self.mean],
            "se": [_finite_or_none(v) for v in self.se],
            "admissible": self.admissible,
            "chosen": self.chosen,
            "evaluated": self.evaluated,
        }


@dataclasses.dataclass
class ModeRecord:
    degrees: tuple[int, ...]
    iterations: int
    lam: float
    alpha: float
    score: float
    baseline_score: float
    supports: dict[int, tuple[int, ...]] = dataclasses.field(default_factory=dict)
    table: typing.Optional[ScoreTable] = None

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "degrees": list(self.degrees),
            "iterations": self.iterations,
            "lambda": self.lam,
            "alpha": self.alpha,
            "score": _finite_or_none(self.score),
            "baseline_score": _finite_or_none(self.baseline_score),
            "supports": {str(k + 1): list(v) for k, v in self.supports.items()},
            "scores": self.table.to_dict() if self.table else None,
        }


@dataclasses.dataclass
class FitReport:
    """What a fit did: accepted modes, error curves, selections and warnings.

    Dimension indices are 0-based in memory and 1-based in ``to_dict``.
    """

    method: str
    modes: list[ModeRecord] = dataclasses.field(default_factory=list)
    train_error: float = 1.0
    train_curve: list[float] = dataclasses.field(default_factory=list)
    validation_curve: list[float] = dataclasses.field(default_factory=list)
    rejected: int = 0
    penalized_dim: typing.Optional[int] = None
    scan_errors: dict[int, float] = dataclasses.field(default_factory=dict)
    warnings: list[str] = dataclasses.field(default_factory=list)
    seed: int = 0

    @property
    def rank(self) -> int:
        return len(self.modes)

    @property
    def failed(self) -> bool:
        return self.rank == 0

    @property
    def support_sets(self) -> dict[int, list[tuple[int, ...]]]:
        supports: dict[int, list[tuple[int, ...]]] = {}
        for record in self.modes:
            for k, support in record.supports.items():
                supports.setdefault(k, []).append(support)
        return supports

    def warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    def to_dict(self) -> dict[str, typing.Any]:
        return {
            "method": self.method,
            "rank": self.rank,
            "failed": self.failed,
            "train_error": _finite_or_none(self.train_error),
            "train_curve": [_finite_or_none(v) for v in self.train_curve],
            "validation_curve": [_finite_or_none(v) for v in self.validation_curve],
            "rejected": self.rejected,
            "penalized_dim": None if self.penalized_dim is None else self.penalized_dim + 1,
            "scan_errors": {str(k + 1): _finite_or_none(v) for k, v in self.scan_errors.items()},
            "support_sets": {
                str(k + 1): [list(s) for s in supports] for k, supports in self.support_sets.items()
            },
            "modes": [record.to_dict() for record in self.modes],
            "warnings": list(self.warnings),
            "seed": self.seed,
        }

    def to_json(self, **kwargs: typing.Any) -> str:
        return json.dumps(self.to_dict(), default=json_default, **kwargs)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(indent=2), encoding="utf-8")
