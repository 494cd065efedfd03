import numpy as np
import pytest

from spgd.sampling import (
    clenshaw_curtis_nodes,
    cross_plan,
    full_grid,
    inside,
    lhs,
    push_toward_faces,
    smolyak_grid,
    uniform,
)
from spgd.types import PlanKind
from spgd.validator import DimensionMismatchError, DomainError, ValidationError


class TestLhs:
    def test_one_point_per_stratum(self):
        points = lhs(4, 1, [(0.0, 1.0)], seed=0).points[:, 0]
        assert sorted(np.floor(points * 4).astype(int)) == [0, 1, 2, 3]

    @pytest.mark.parametrize("seed", range(10))
    @pytest.mark.parametrize("n, d", [(7, 3), (160, 5), (1000, 10)])
    def test_marginal_stratification(self, n, d, seed):
        box = [(-1.0, 1.0)] * d
        u = (lhs(n, d, box, seed).points + 1.0) / 2.0
        for k in range(d):
            strata = np.minimum(np.floor(u[:, k] * n), n - 1).astype(int)
            np.testing.assert_array_equal(np.sort(strata), np.arange(n))

    def test_same_seed_same_plan(self):
        a = lhs(20, 3, [(0.0, 2.0)] * 3, seed=5)
        b = lhs(20, 3, [(0.0, 2.0)] * 3, seed=5)
        np.testing.assert_array_equal(a.points, b.points)

    def test_single_point_inside_box(self):
        plan = lhs(1, 2, [(2.0, 3.0), (-1.0, 0.0)], seed=1)
        assert plan.n == 1 and inside(plan.points, plan.box).all()

    def test_provenance(self):
        assert lhs(3, 1, [(0.0, 1.0)], seed=9).provenance()["seed"] == 9

    def test_box_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            lhs(3, 2, [(0.0, 1.0)], seed=0)


class TestClenshawCurtis:
    def test_levels(self):
        np.testing.assert_array_equal(clenshaw_curtis_nodes(0), [0.0])
        np.testing.assert_allclose(clenshaw_curtis_nodes(1), [-1.0, 0.0, 1.0], atol=1e-15)
        r = np.sqrt(2.0) / 2.0
        np.testing.assert_allclose(clenshaw_curtis_nodes(2), [-1.0, -r, 0.0, r, 1.0], atol=1e-15)

    @pytest.mark.parametrize("level", range(1, 6))
    def test_nested(self, level):
        coarse, fine = clenshaw_curtis_nodes(level - 1), clenshaw_curtis_nodes(level)
        for x in coarse:
            assert np.min(np.abs(fine - x)) == 0.0

    @pytest.mark.parametrize("level", range(6))
    def test_symmetric(self, level):
        nodes = clenshaw_curtis_nodes(level)
        np.testing.assert_array_equal(nodes, -nodes[::-1])


class TestSmolyak:
    def test_one_dimension(self):
        plan = smolyak_grid(1, 2, [(0.0, 4.0)])
        np.testing.assert_allclose(plan.points[:, 0], 2.0 + 2.0 * clenshaw_curtis_nodes(2), atol=1e-14)

    def test_two_dimensions_level_one(self):
        points = smolyak_grid(2, 1, [(-1.0, 1.0)] * 2).points
        expected = {(-1.0, 0.0), (0.0, -1.0), (0.0, 0.0), (0.0, 1.0), (1.0, 0.0)}
        assert {tuple(np.round(p, 12)) for p in points} == expected

    def test_training_grid_size(self):
        plan = smolyak_grid(3, 3, [(-1.0, 1.0)] * 3)
        assert plan.n == 69
        assert plan.kind == PlanKind.SMOLYAK and plan.level == 3

    def test_invariant_under_coordinate_permutation(self):
        points = smolyak_grid(3, 3, [(-1.0, 1.0)] * 3).points
        as_set = {tuple(np.round(p, 12)) for p in points}
        for perm in ([1, 0, 2], [2, 1, 0], [1, 2, 0]):
            assert {tuple(np.round(p[perm], 12)) for p in points} == as_set

    def test_invariant_under_reflection(self):
        points = smolyak_grid(2, 3, [(-1.0, 1.0)] * 2).points
        assert {tuple(np.round(p, 12)) for p in points} == {tuple(np.round(-p, 12)) for p in points}


class TestCrossPlan:
    def test_two_dimensional_plan_with_coupling(self):
        box = [(0.0, 1.0), (0.0, 0.5)]
        plan = cross_plan([0.5, 0.25], [10, 10], box)
        assert plan.budget == 21
        assert plan.with_coupling(4, seed=0).budget == 25

    def test_anchor_only(self):
        plan = cross_plan([0.0, 0.0], [0, 0], [(-1.0, 1.0)] * 2)
        np.testing.assert_array_equal(plan.points(), [[0.0, 0.0]])

    def test_single_dimension(self):
        plan = cross_plan([0.5], [4], [(0.0, 1.0)])
        assert plan.points().shape == (5, 1)

    def test_cross_moves_one_coordinate(self):
        anchor = np.array([0.1, 0.2, 0.3])
        points = cross_plan(anchor, [3, 3, 3], [(0.0, 1.0)] * 3).cross_points()
        moved = (~np.isclose(points, anchor)).sum(axis=1)
        assert moved[0] == 0 and np.all(moved[1:] == 1)

    def test_coupling_inside_box(self):
        box = [(0.0, 1.0), (0.0, 0.5)]
        plan = cross_plan([0.5, 0.25], [10, 10], box).with_coupling(8, seed=2, push_to_boundary=True)
        assert inside(plan.coupling_points(), box).all()

    def test_anchor_outside_box(self):
        with pytest.raises(DomainError):
            cross_plan([2.0, 0.0], [1, 1], [(-1.0, 1.0)] * 2)

    def test_negative_count(self):
        with pytest.raises(ValidationError):
            cross_plan([0.0], [-1], [(-1.0, 1.0)])


class TestOtherPlans:
    def test_full_grid_size(self):
        assert full_grid([30, 30, 30], [(-1.0, 1.0)] * 3).n == 27000

    def test_uniform_inside_box(self):
        plan = uniform(50, 2, [(1.0, 2.0), (3.0, 5.0)], seed=0)
        assert inside(plan.points, plan.box).all()

    def test_push_toward_faces_is_monotone(self):
        u = np.linspace(0.0, 1.0, 11)
        pushed = push_toward_faces(u)
        assert np.all(np.diff(pushed) > 0)
        assert pushed[0] == 0.0 and pushed[-1] == 1.0

    def test_invalid_box(self):
        with pytest.raises(ValidationError):
            full_grid([2], [(1.0, 0.0)])
