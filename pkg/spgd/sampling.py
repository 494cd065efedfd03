"""Design-of-experiments generators.

Boxes are sequences of ``(lo, hi)`` pairs, one per dimension. All
generators are deterministic given their seed or level.
"""

from __future__ import annotations

import dataclasses
import itertools
import typing

import numpy as np

from spgd.types import PlanKind
from spgd.validator import DimensionMismatchError, DomainError, ValidationError

Box = typing.Sequence[typing.Tuple[float, float]]


def check_box(box: Box) -> tuple[tuple[float, float], ...]:
    checked = []
    for k, bounds in enumerate(box):
        lo, hi = (float(v) for v in bounds)
        if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
            raise ValidationError(f"Invalid interval [{lo}, {hi}] in dimension {k}.", field_name="box")
        checked.append((lo, hi))
    if not checked:
        raise ValidationError("The box has no dimensions.", field_name="box")
    return tuple(checked)


def from_reference(u: np.ndarray, box: Box) -> np.ndarray:
    """Map columns of ``u`` from ``[-1, 1]`` to the box; the reference box maps exactly."""
    out = np.array(u, dtype=float, copy=True)
    for k, (lo, hi) in enumerate(box):
        if (lo, hi) != (-1.0, 1.0):
            out[:, k] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * out[:, k]
    return out


def from_unit(u: np.ndarray, box: Box) -> np.ndarray:
    """Map columns of ``u`` from ``[0, 1]`` to the box."""
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    return lo + (hi - lo) * np.asarray(u, dtype=float)


def inside(points: np.ndarray, box: Box, atol: float = 0.0) -> np.ndarray:
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    return np.all((points >= lo - atol) & (points <= hi + atol), axis=1)


@dataclasses.dataclass(frozen=True, eq=False)
class SamplePlan:
    kind: PlanKind
    points: np.ndarray
    box: tuple[tuple[float, float], ...]
    seed: typing.Optional[int] = None
    level: typing.Optional[int] = None

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def evaluate(self, func: typing.Callable[[np.ndarray], float]) -> np.ndarray:
        return np.array([func(p) for p in self.points], dtype=float)

    def to_dataset(self, func: typing.Callable[[np.ndarray], float]):
        from spgd.fitting.dataset import Dataset

        return Dataset(self.points, self.evaluate(func), self.box)

    def provenance(self) -> dict[str, typing.Any]:
        return {"kind": self.kind.value, "seed": self.seed, "level": self.level, "box": [list(b) for b in self.box]}


def lhs(n: int, d: int, box: Box, seed: int) -> SamplePlan:
    """Plain Latin hypercube: one point per stratum in every marginal."""
    box = check_box(box)
    if n < 1:
        raise ValidationError("n must be at least 1.", field_name="n")
    if len(box) != d:
        raise DimensionMismatchError(f"Box has {len(box)} dimensions, expected {d}.", field_name="box")
    rng = np.random.default_rng(seed)
    u = np.empty((n, d))
    for k in range(d):
        u[:, k] = (rng.permutation(n) + rng.random(n)) / n
    points = from_unit(u, box)
    if np.unique(points, axis=0).shape[0] != n:
        raise ValidationError("Latin hypercube produced duplicate rows.", field_name="lhs")
    return SamplePlan(PlanKind.LHS, points, box, seed=seed)


def uniform(n: int, d: int, box: Box, seed: int) -> SamplePlan:
    box = check_box(box)
    if len(box) != d:
        raise DimensionMismatchError(f"Box has {len(box)} dimensions, expected {d}.", field_name="box")
    rng = np.random.default_rng(seed)
    return SamplePlan(PlanKind.UNIFORM, from_unit(rng.random((n, d)), box), box, seed=seed)


def full_grid(counts: typing.Sequence[int], box: Box) -> SamplePlan:
    """Tensor grid with ``counts[k]`` equispaced nodes per dimension, ends included."""
    box = check_box(box)
    if len(counts) != len(box):
        raise DimensionMismatchError("One count per dimension is required.", field_name="counts")
    axes = [np.linspace(lo, hi, int(c)) for c, (lo, hi) in zip(counts, box)]
    points = np.array(list(itertools.product(*axes)), dtype=float).reshape(-1, len(box))
    return SamplePlan(PlanKind.FULL_GRID, points, box)


def clenshaw_curtis_nodes(level: int) -> np.ndarray:
    """Nested Clenshaw-Curtis nodes on ``[-1, 1]``, ascending.

    Level 0 is ``{0}``; level ``l >= 1`` has ``2**l + 1`` nodes
    ``cos(j pi / 2**l)``. The nodes are symmetrized so that mirrored
    nodes are exact negatives and the midpoint is exactly zero.
    """
    if level < 0:
        raise ValidationError("Level must be non-negative.", field_name="level")
    if level == 0:
        return np.zeros(1)
    n = 2**level
    x = -np.cos(np.pi * np.arange(n + 1) / n)
    x = 0.5 * (x - x[::-1])
    x[n // 2] = 0.0
    return x


def _multi_indices(d: int, level: int) -> typing.Iterator[tuple[int, ...]]:
    for index in itertools.product(range(level + 1), repeat=d):
        if sum(index) <= level:
            yield index


def smolyak_grid(d: int, level: int, box: Box) -> SamplePlan:
    """Isotropic Smolyak sparse grid over nested Clenshaw-Curtis rules.

    Union over multi-indices ``|l|_1 <= level`` of the tensor products of
    ``clenshaw_curtis_nodes(l_k)``, deduplicated and sorted
    lexicographically on the reference box before mapping.
    """
    box = check_box(box)
    if d < 1:
        raise ValidationError("d must be at least 1.", field_name="d")
    if len(box) != d:
        raise DimensionMismatchError(f"Box has {len(box)} dimensions, expected {d}.", field_name="box")
    if level < 0:
        raise ValidationError("Level must be non-negative.", field_name="level")
    nodes = [clenshaw_curtis_nodes(l) for l in range(level + 1)]
    blocks = [
        np.array(list(itertools.product(*(nodes[l] for l in index))), dtype=float)
        for index in _multi_indices(d, level)
    ]
    reference = np.unique(np.vstack(blocks), axis=0)
    return SamplePlan(PlanKind.SMOLYAK, from_reference(reference, box), box, level=level)


@dataclasses.dataclass(frozen=True, eq=False)
class CrossPlan:
    """Anchor point, per-dimension cross coordinates and extra coupling samples."""

    anchor: np.ndarray
    axes: tuple[np.ndarray, ...]
    box: tuple[tuple[float, float], ...]
    coupling: np.ndarray = dataclasses.field(default_factory=lambda: np.empty((0, 0)))

    @property
    def d(self) -> int:
        return self.anchor.size

    def cross_points(self) -> np.ndarray:
        """The anchor followed by the cross samples, dimension by dimension."""
        rows = [self.anchor.copy()]
        for k, coords in enumerate(self.axes):
            for value in coords:
                row = self.anchor.copy()
                row[k] = value
                rows.append(row)
        return np.array(rows)

    def coupling_points(self) -> np.ndarray:
        if self.coupling.size == 0:
            return np.empty((0, self.d))
        return self.coupling

    def points(self) -> np.ndarray:
        return np.vstack([self.cross_points(), self.coupling_points()])

    @property
    def budget(self) -> int:
        return self.points().shape[0]

    def with_coupling(self, n: int, seed: int, push_to_boundary: bool = False) -> "CrossPlan":
        """Add ``n`` seeded LHS coupling samples, optionally pushed toward the faces."""
        if n == 0:
            return dataclasses.replace(self, coupling=np.empty((0, self.d)))
        u = lhs(n, self.d, [(0.0, 1.0)] * self.d, seed).points
        if push_to_boundary:
            u = push_toward_faces(u)
        return dataclasses.replace(self, coupling=from_unit(u, self.box))


def push_toward_faces(u: np.ndarray, power: float = 0.5) -> np.ndarray:
    """Monotone map of ``[0, 1]`` quantiles that moves them toward 0 and 1."""
    centred = 2.0 * np.asarray(u, dtype=float) - 1.0
    return 0.5 + 0.5 * np.sign(centred) * np.abs(centred) ** power


def cross_plan(
    anchor: typing.Sequence[float],
    counts: typing.Sequence[int],
    box: Box,
    seed: int = 0,
    spacing: str = "equispaced",
) -> CrossPlan:
    """A multidimensional cross centred at ``anchor``.

    Dimension ``i`` gets ``counts[i]`` coordinates besides the anchor's own:
    equispaced ones come from ``counts[i] + 1`` nodes spanning the interval
    with the node closest to the anchor coordinate removed; ``random``
    spacing draws them uniformly with ``seed``.
    """
    box = check_box(box)
    anchor = np.asarray(anchor, dtype=float).reshape(-1)
    if anchor.size != len(box) or len(counts) != len(box):
        raise DimensionMismatchError("Anchor, counts and box must share the dimension.")
    if not inside(anchor.reshape(1, -1), box)[0]:
        raise DomainError(f"Anchor {anchor.tolist()} lies outside the box.", field_name="anchor")
    rng = np.random.default_rng(seed)
    axes = []
    for k, ((lo, hi), count) in enumerate(zip(box, counts)):
        count = int(count)
        if count < 0:
            raise ValidationError("Counts must be non-negative.", field_name="counts")
        if count == 0:
            axes.append(np.empty(0))
            continue
        if spacing == "random":
            coords = np.sort(rng.uniform(lo, hi, count))
        else:
            nodes = np.linspace(lo, hi, count + 1)
            coords = np.delete(nodes, np.argmin(np.abs(nodes - anchor[k])))
        if np.any(np.isclose(coords, anchor[k], rtol=0.0, atol=1e-12)):
            raise ValidationError(f"Cross coordinate coincides with the anchor in dimension {k}.")
        axes.append(coords)
    return CrossPlan(anchor, tuple(axes), box, np.empty((0, len(box))))
