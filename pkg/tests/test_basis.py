import numpy as np
import pytest

from spgd.basis import BasisSpec, design_matrix, design_row, eval_basis, eval_basis_matrix
from spgd.types import Family
from spgd.validator import DimensionMismatchError, InvalidInputError, ValidationError


class TestEvalBasis:
    @pytest.mark.parametrize(
        "spec, s, expected",
        [
            (BasisSpec(Family.CHEBYSHEV, 2), 0.5, [1.0, 0.5, -0.5]),
            (BasisSpec(Family.CHEBYSHEV, 5), 1.0, [1.0] * 6),
            (BasisSpec(Family.MONOMIAL, 3, 0.0, 2.0), 2.0, [1.0] * 4),
            (BasisSpec(Family.CHEBYSHEV, 4), 0.5, [1.0, 0.5, -0.5, -1.0, -0.5]),
            (BasisSpec(Family.MONOMIAL, 3), 0.5, [1.0, 0.5, 0.25, 0.125]),
        ],
    )
    def test_values(self, spec, s, expected):
        np.testing.assert_allclose(eval_basis(spec, s), expected, atol=1e-14)

    def test_degree_zero_is_constant(self):
        np.testing.assert_array_equal(eval_basis_matrix(BasisSpec(degree=0), [0.3, -0.7]), [[1.0], [1.0]])

    def test_chebyshev_is_cosine_of_multiple_angle(self, rng):
        spec = BasisSpec(Family.CHEBYSHEV, 7, 2.0, 5.0)
        s = rng.uniform(2.0, 5.0, 50)
        t = (2.0 * s - 7.0) / 3.0
        expected = np.cos(np.outer(np.arccos(np.clip(t, -1.0, 1.0)), np.arange(8)))
        np.testing.assert_allclose(eval_basis_matrix(spec, s), expected, atol=1e-12)

    def test_chebyshev_bounded_on_domain(self, rng):
        spec = BasisSpec(Family.CHEBYSHEV, 12, -3.0, 4.0)
        values = eval_basis_matrix(spec, rng.uniform(-3.0, 4.0, 500))
        assert np.all(np.abs(values) <= 1.0 + 1e-12)

    def test_extrapolates_without_clamping(self):
        spec = BasisSpec(Family.MONOMIAL, 2)
        np.testing.assert_allclose(eval_basis(spec, 2.0), [1.0, 2.0, 4.0])

    def test_rejects_non_finite(self):
        with pytest.raises(InvalidInputError):
            eval_basis_matrix(BasisSpec(), [np.nan])

    def test_rejects_array_in_scalar_form(self):
        with pytest.raises(InvalidInputError):
            eval_basis(BasisSpec(), np.array([0.1, 0.2]))


class TestBasisSpec:
    def test_invalid_domain(self):
        with pytest.raises(ValidationError):
            BasisSpec(lo=1.0, hi=1.0)

    def test_negative_degree(self):
        with pytest.raises(ValidationError):
            BasisSpec(degree=-1)

    def test_family_from_text(self):
        assert BasisSpec("monomial").family is Family.MONOMIAL

    def test_unknown_family(self):
        with pytest.raises(ValidationError):
            BasisSpec("legendre")

    def test_dict_round_trip(self):
        spec = BasisSpec(Family.MONOMIAL, 3, -0.5, 2.0)
        assert BasisSpec.from_dict(spec.to_dict()) == spec

    def test_with_degree(self):
        spec = BasisSpec(degree=2)
        assert spec.with_degree(2) is spec
        assert spec.with_degree(4).size == 5


class TestDesignRow:
    def test_selects_dimension(self):
        specs = [BasisSpec(degree=1), BasisSpec(degree=1)]
        np.testing.assert_allclose(design_row(specs, [0.3, 0.7], 1), [1.0, 0.7])
        np.testing.assert_allclose(design_row(specs, [0.3, 0.7], 0), [1.0, 0.3])

    def test_out_of_range_dimension(self):
        specs = [BasisSpec(degree=1), BasisSpec(degree=1)]
        with pytest.raises(DimensionMismatchError):
            design_row(specs, [0.3, 0.7], 2)

    def test_point_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            design_row([BasisSpec()], [0.1, 0.2], 0)

    def test_matrix_stacks_rows(self, rng):
        specs = [BasisSpec(degree=3), BasisSpec(Family.MONOMIAL, 2, 0.0, 1.0)]
        points = rng.uniform(0.0, 1.0, (6, 2))
        matrix = design_matrix(specs, points, 1)
        for i, point in enumerate(points):
            np.testing.assert_allclose(matrix[i], design_row(specs, point, 1))
