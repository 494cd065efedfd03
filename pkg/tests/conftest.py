import numpy as np
import pytest

from spgd.basis import BasisSpec
from spgd.fitting import Dataset
from spgd.model import Mode, SeparatedModel
from spgd.sampling import lhs
from spgd.types import Family


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-size benchmark acceptance gates")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def monomial_specs():
    return (BasisSpec(Family.MONOMIAL, 1), BasisSpec(Family.MONOMIAL, 1))


@pytest.fixture
def xy_model(monomial_specs):
    """``f(x, y) = x * y`` as a single monomial mode."""
    mode = Mode((np.array([0.0, 1.0]), np.array([0.0, 1.0])), (1, 1))
    return SeparatedModel(monomial_specs, (mode,))


@pytest.fixture
def xy_dataset():
    plan = lhs(25, 2, [(-1.0, 1.0), (-1.0, 1.0)], seed=3)
    points = plan.points
    return Dataset(points, points[:, 0] * points[:, 1], plan.box)


@pytest.fixture
def make_model(rng):
    """Random Chebyshev models of a given dimension and rank."""

    def build(d, rank, max_degree=3, family=Family.CHEBYSHEV):
        specs = tuple(BasisSpec(family, max_degree) for _ in range(d))
        modes = tuple(
            Mode.random(tuple(int(p) for p in rng.integers(0, max_degree + 1, d)), rng) for _ in range(rank)
        )
        return SeparatedModel(specs, modes)

    return build
