from __future__ import annotations

import dataclasses
import inspect
import typing
from pathlib import Path

from spgd.types import Family, Method, SelectionKind
from spgd.validator import ErrorStore, ValidationError


class BaseConfig:
    """Configuration held as annotated class attributes with defaults.

    Instances take keyword overrides and are read-only afterwards; use
    ``replace``. Reading an attribute that was never declared gives
    ``None`` instead of raising.
    """

    debug: bool = False

    seed: int = 0

    def __init__(self, **overrides: typing.Any) -> None:
        known = self.keys()
        store = ErrorStore()
        for key, value in overrides.items():
            if store.check(key in known, "Unknown configuration key.", key):
                object.__setattr__(self, key, value)
        store.raise_if_any()
        self.validate()

    def __getattribute__(self, name: str) -> typing.Any:
        try:
            return super().__getattribute__(name)

        except AttributeError:
            if name.startswith("__"):
                raise
            return None

    def __setattr__(self, name: str, value: typing.Any) -> None:
        raise ValidationError("Configuration is read-only, use replace().", field_name=name)

    @classmethod
    def keys(cls) -> tuple[str, ...]:
        names: list[str] = []
        for klass in reversed(cls.__mro__):
            for name in inspect.get_annotations(klass):
                if not name.startswith("_") and name not in names:
                    names.append(name)
        return tuple(names)

    def validate(self) -> None:
        """Override in subclasses; raise ``ValidationError`` on bad values."""

    def as_dict(self) -> dict[str, typing.Any]:
        return {key: getattr(self, key) for key in self.keys()}

    def replace(self, **changes: typing.Any):
        return type(self)(**{**self.as_dict(), **changes})

    def __repr__(self) -> str:
        fields = ", ".join(f"{key}={value!r}" for key, value in self.as_dict().items())
        return f"{type(self).__name__}({fields})"


@dataclasses.dataclass(frozen=True)
class Selection:
    """Held-out policy used to pick the penalty and to accept modes."""

    kind: SelectionKind = SelectionKind.KFOLD
    folds: int = 5
    ratio: float = 0.8

    @classmethod
    def parse(cls, text: str) -> "Selection":
        """Parse ``cv:K``, ``split:R``, ``one-se:K`` or ``train``."""
        name, _, arg = text.strip().partition(":")
        name = name.lower()
        try:
            if name in ("cv", "kfold"):
                return cls(SelectionKind.KFOLD, folds=int(arg or 5))
            if name in ("one-se", "one_se", "one_se_kfold"):
                return cls(SelectionKind.ONE_SE_KFOLD, folds=int(arg or 5))
            if name == "split":
                return cls(SelectionKind.SPLIT, ratio=float(arg or 0.8))
            if name == "train":
                return cls(SelectionKind.TRAIN)
        except ValueError:
            pass
        raise ValidationError(f"Invalid selection policy {text!r}.", field_name="select")

    def __str__(self) -> str:
        if self.kind == SelectionKind.KFOLD:
            return f"cv:{self.folds}"
        if self.kind == SelectionKind.ONE_SE_KFOLD:
            return f"one-se:{self.folds}"
        if self.kind == SelectionKind.SPLIT:
            return f"split:{self.ratio}"
        return "train"


class FitConfig(BaseConfig):
    """Everything ``spgd.fitting.fit`` needs besides the data."""

    method: Method = Method.SPGD

    family: Family = Family.CHEBYSHEV

    # modal adaptivity
    initial_degree: int = 1
    max_degree: int = 4
    mas_tol: float = 0.05
    mas_patience: int = 1

    max_modes: int = 20
    patience_modes: int = 2
    accept_tol: float = 1e-9

    # alternating directions
    tol_fp: float = 1e-6
    max_fp_iters: int = 50

    # penalties; None picks the method default
    lambda_grid: typing.Any = None
    alpha: typing.Any = 0.0
    per_dimension_lambda: bool = False
    selection: Selection = Selection()

    # doubly sparse
    sparse_dims: typing.Any = None
    sparse_degree: typing.Optional[int] = None
    chi_lim: typing.Any = None
    regularize_dense: bool = False
    scan_ratio: float = 0.8

    stls_threshold: typing.Optional[float] = None

    concurrent: bool = True

    def validate(self) -> None:
        store = ErrorStore()
        try:
            object.__setattr__(self, "method", Method(self.method))
        except ValueError:
            store.store_error([f"Unknown method {self.method!r}."], "method")
        try:
            object.__setattr__(self, "family", Family(self.family))
        except ValueError:
            store.store_error([f"Unknown basis family {self.family!r}."], "family")
        if isinstance(self.selection, str):
            object.__setattr__(self, "selection", Selection.parse(self.selection))

        store.check(self.initial_degree >= 0, "Must be non-negative.", "initial_degree")
        store.check(
            self.initial_degree <= self.max_degree,
            "initial_degree must not exceed max_degree.",
            "max_degree",
        )
        store.check(self.mas_tol >= 0, "Must be non-negative.", "mas_tol")
        store.check(self.mas_patience >= 1, "Must be at least 1.", "mas_patience")
        store.check(self.max_modes >= 1, "Must be at least 1.", "max_modes")
        store.check(self.patience_modes >= 1, "Must be at least 1.", "patience_modes")
        store.check(self.tol_fp > 0, "Must be positive.", "tol_fp")
        store.check(self.max_fp_iters >= 0, "Must be non-negative.", "max_fp_iters")
        store.check(0 < self.scan_ratio < 1, "Must lie in (0, 1).", "scan_ratio")
        if self.sparse_degree is not None:
            store.check(self.sparse_degree >= 0, "Must be non-negative.", "sparse_degree")

        selection = self.selection
        if selection.kind in (SelectionKind.KFOLD, SelectionKind.ONE_SE_KFOLD):
            store.check(selection.folds >= 2, "Need at least 2 folds.", "selection")
        if selection.kind == SelectionKind.SPLIT:
            store.check(0 < selection.ratio < 1, "Split ratio must lie in (0, 1).", "selection")

        for alpha in self.alphas:
            store.check(0 <= alpha <= 1, f"alpha {alpha} outside [0, 1].", "alpha")

        sparse = self.sparse_dims
        if sparse is not None and sparse != "auto":
            object.__setattr__(self, "sparse_dims", tuple(int(k) for k in sparse))
            store.check(all(k >= 0 for k in self.sparse_dims), "Dimensions are 0-based.", "sparse_dims")

        if self.stls_threshold is not None:
            store.check(self.stls_threshold > 0, "Must be positive.", "stls_threshold")
        store.raise_if_any()

    @property
    def alphas(self) -> tuple[float, ...]:
        if isinstance(self.alpha, (list, tuple)):
            return tuple(float(a) for a in self.alpha)
        return (float(self.alpha),)

    @property
    def scans_dimensions(self) -> bool:
        return self.method == Method.S2PGD and self.sparse_dims == "auto"

    def chi_limit(self, dim: int, size: int) -> int:
        """l0 cap on a sparse dimension holding ``size`` coefficients."""
        if self.chi_lim is None:
            return -(-size // 2)
        if isinstance(self.chi_lim, (list, tuple)):
            if dim < len(self.chi_lim):
                return int(self.chi_lim[dim])
            return -(-size // 2)
        return int(self.chi_lim)


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values: dict[str, str] = {}
    store = ErrorStore()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                store.store_error([f"Expected 'key = value': {raw.strip()!r}"], f"line {lineno}")
                continue
            values[key.strip().lstrip("-")] = value.strip()
    store.raise_if_any()
    return values
