"""Dataset CSV, prediction CSV and JSON files."""

from __future__ import annotations

import csv
import json
import logging
import typing
from pathlib import Path

import aiofiles
import numpy as np

from spgd.fitting.dataset import Dataset
from spgd.validator import ErrorStore, InvalidInputError, ValidationError

from .encoding import json_default

logger = logging.getLogger(__name__)

PathLike = typing.Union[str, Path]


class Table(typing.NamedTuple):
    """Columns ``s1..sd`` and the optional target column ``f``."""

    points: np.ndarray
    targets: typing.Optional[np.ndarray]
    header: tuple[str, ...]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def n(self) -> int:
        return self.points.shape[0]


def _check_header(header: list[str], path: PathLike) -> tuple[int, bool]:
    names = [h.strip() for h in header]
    has_target = bool(names) and names[-1] == "f"
    inputs = names[:-1] if has_target else names
    expected = [f"s{k}" for k in range(1, len(inputs) + 1)]
    if not inputs or inputs != expected:
        raise ValidationError(
            f"{path}: header must be s1..sd with an optional f column, got {','.join(names)!r}.",
            field_name="line 1",
        )
    return len(inputs), has_target


def read_table(path: PathLike) -> Table:
    """Read a comma separated file with a mandatory ``s1,...,sd[,f]`` header.

    Every malformed row is reported with its line number; an empty body
    gives zero rows.
    """
    path = Path(path)
    store = ErrorStore()
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{path}: missing header.", field_name="line 1")
        d, has_target = _check_header(header, path)
        width = d + int(has_target)
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != width:
                store.store_error([f"expected {width} values, got {len(row)}"], f"line {lineno}")
                continue
            try:
                values = [float(cell) for cell in row]
            except ValueError:
                store.store_error([f"non-numeric value in {row!r}"], f"line {lineno}")
                continue
            if not all(np.isfinite(values)):
                store.store_error(["non-finite value"], f"line {lineno}")
                continue
            rows.append(values)
    if store.errors:
        first = next(iter(store.errors.items()))
        raise InvalidInputError(f"{path}: {first[0]}: {first[1][0]}", field_name=first[0])
    data = np.asarray(rows, dtype=float).reshape(len(rows), width)
    targets = data[:, d] if has_target else None
    logger.debug(f"read {data.shape[0]} rows with {d} inputs from {path}")
    return Table(data[:, :d], targets, tuple(h.strip() for h in header))


def read_dataset(path: PathLike, domain: typing.Sequence[tuple[float, float]] = ()) -> Dataset:
    table = read_table(path)
    if table.targets is None:
        raise ValidationError(f"{path}: a dataset needs an f column.", field_name="f")
    if table.n == 0:
        raise InvalidInputError(f"{path}: no data rows.", field_name="points")
    return Dataset(table.points, table.targets, tuple(domain))


def _format(value: float) -> str:
    return repr(float(value))


def table_csv(points: np.ndarray, columns: typing.Mapping[str, np.ndarray]) -> str:
    points = np.asarray(points, dtype=float).reshape(len(points), -1)
    header = [f"s{k}" for k in range(1, points.shape[1] + 1)] + list(columns)
    lines = [",".join(header)]
    extra = [np.asarray(v, dtype=float).reshape(-1) for v in columns.values()]
    for i, row in enumerate(points):
        lines.append(",".join([_format(v) for v in row] + [_format(c[i]) for c in extra]))
    return "\n".join(lines) + "\n"


def write_dataset(path: PathLike, dataset: Dataset) -> None:
    Path(path).write_text(table_csv(dataset.points, {"f": dataset.targets}), encoding="utf-8")


def write_predictions(path: PathLike, table: Table, predicted: np.ndarray) -> None:
    """Input columns, the true ``f`` when present, then ``f_pred``."""
    columns = {} if table.targets is None else {"f": table.targets}
    columns["f_pred"] = predicted
    if table.n == 0:
        header = [f"s{k}" for k in range(1, table.d + 1)] + list(columns)
        Path(path).write_text(",".join(header) + "\n", encoding="utf-8")
        return
    Path(path).write_text(table_csv(table.points, columns), encoding="utf-8")


def dumps(document: typing.Any) -> str:
    return json.dumps(document, indent=2, default=json_default)


def write_json(path: PathLike, document: typing.Any) -> None:
    Path(path).write_text(dumps(document), encoding="utf-8")


def read_json(path: PathLike) -> typing.Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON: {exc}.", field_name="json")


async def write_text_async(path: PathLike, text: str) -> None:
    async with aiofiles.open(path, "w", encoding="utf-8") as fh:
        await fh.write(text)


async def write_json_async(path: PathLike, document: typing.Any) -> None:
    await write_text_async(path, dumps(document))
