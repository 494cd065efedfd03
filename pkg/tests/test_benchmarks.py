import dataclasses
import json

import numpy as np
import pytest

from spgd.benchmarks import (
    CASES,
    CaseReport,
    LorenzConfig,
    SeedResult,
    Thresholds,
    anova_2d,
    build_sindy_dataset,
    case_function,
    case_ids,
    eval_case_function,
    get_case,
    integrate_rk4,
    run_case,
    run_seed,
    shadow_error,
)
from spgd.benchmarks import runner
from spgd.benchmarks.lorenz import library_matrix, lorenz_rhs
from spgd.metrics import reduction_pct, relative_l2_error
from spgd.types import CaseId
from spgd.validator import DimensionMismatchError, DomainError, InvalidInputError, UnknownCaseError, ValidationError


class TestFunctions:
    def test_ex1_at_origin(self):
        assert eval_case_function("ex1_poly5d", [0.0] * 5) == pytest.approx(-0.1)

    def test_s2_ex1_at_x2_one(self):
        assert eval_case_function("s2_ex1_cheb3d", [0.0, 1.0, 0.0]) == pytest.approx(-2.14)

    def test_ex2_at_origin(self):
        value = eval_case_function("ex2_triglog5d", [0.0] * 5)
        assert value == pytest.approx(-3.14 * np.log(1.5))
        assert value == pytest.approx(-1.27325, abs=2e-4)

    def test_batch_matches_single_points(self):
        f = case_function(CaseId.S2_EX2_CHEB5D)
        rng = np.random.default_rng(0)
        points = rng.uniform(-0.4, 0.4, (6, 5))
        np.testing.assert_allclose(f(points), [f(p) for p in points])

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatchError):
            eval_case_function("ex1_poly5d", [0.0] * 3)

    def test_log_domain(self):
        with pytest.raises(DomainError):
            eval_case_function("ex2_triglog5d", [0.0, 0.0, 0.0, -0.6, 0.0])
        with pytest.raises(DomainError):
            anova_2d([0.5, 0.6])

    def test_lorenz_has_no_closed_form(self):
        with pytest.raises(UnknownCaseError):
            case_function("lorenz_sindy")


class TestLorenz:
    @pytest.mark.parametrize(
        "state, expected",
        [
            ((-8.0, 7.0, 27.0), (150.0, -15.0, -128.0)),
            ((0.0, 0.0, 0.0), (0.0, 0.0, 0.0)),
            ((1.0, 1.0, 1.0), (0.0, 26.0, 1.0 - 8.0 / 3.0)),
        ],
    )
    def test_rhs(self, state, expected):
        np.testing.assert_allclose(lorenz_rhs(state), expected, atol=1e-12)

    def test_rk4_harmonic_oscillator(self):
        config = LorenzConfig(initial_state=(1.0, 0.0, 0.0), dt=1e-3, horizon=2.0 * np.pi)
        trajectory = integrate_rk4(config, rhs=lambda s: np.array([s[1], -s[0], 0.0]))
        np.testing.assert_allclose(trajectory.states[-1], [1.0, 0.0, 0.0], atol=1e-9)
        assert trajectory.times[-1] == pytest.approx(2.0 * np.pi)

    def test_rk4_is_fourth_order(self):
        def final(dt):
            return integrate_rk4(LorenzConfig(dt=dt, horizon=1.0)).states[-1]

        reference = final(0.01 / 16)
        coarse = np.linalg.norm(final(0.01) - reference)
        fine = np.linalg.norm(final(0.005) - reference)
        assert 10.0 < coarse / fine < 22.0

    def test_zero_horizon(self):
        trajectory = integrate_rk4(LorenzConfig(horizon=0.0))
        assert len(trajectory) == 1
        np.testing.assert_array_equal(trajectory.states[0], [-8.0, 7.0, 27.0])

    def test_blow_up_is_reported(self):
        config = LorenzConfig(initial_state=(1.0, 0.0, 0.0), dt=0.1, horizon=50.0)
        with pytest.raises(InvalidInputError):
            integrate_rk4(config, rhs=lambda s: s ** 3)

    def test_library_row(self):
        np.testing.assert_array_equal(library_matrix([1.0, 2.0, 3.0])[0], [1, 1, 2, 3, 2, 3, 6, 6])

    def test_library_spans_xdot(self):
        trajectory = integrate_rk4(LorenzConfig(horizon=1.0))
        features = library_matrix(trajectory.states[::50])
        coeffs, *_ = np.linalg.lstsq(features, trajectory.derivatives[::50, 0], rcond=None)
        np.testing.assert_allclose(coeffs, [0, -10, 10, 0, 0, 0, 0, 0], atol=1e-6)

    def test_sindy_split(self):
        data = build_sindy_dataset(integrate_rk4(LorenzConfig(horizon=1.0)), samples=50, seed=2)
        assert data.states.shape == (50, 3)
        assert data.construction.size == 40 and data.validation.size == 10
        assert not set(data.construction) & set(data.validation)

    def test_too_many_samples(self):
        trajectory = integrate_rk4(LorenzConfig(horizon=0.01))
        with pytest.raises(ValidationError):
            build_sindy_dataset(trajectory, samples=20)

    def test_shadow_error_of_true_coefficients(self):
        exact = np.zeros((3, 8))
        exact[0, [1, 2]] = -10.0, 10.0
        exact[1, [1, 2, 5]] = 28.0, -1.0, -1.0
        exact[2, [3, 4]] = -8.0 / 3.0, 1.0
        assert shadow_error(exact) < 1e-8

        perturbed = exact.copy()
        perturbed[1, 1] = 20.0
        assert shadow_error(perturbed) > 0.05


class TestMetrics:
    @pytest.mark.parametrize(
        "z, z_pred, expected",
        [
            ([1.0, 2.0], [1.0, 2.0], 0.0),
            ([3.0, 4.0], [0.0, 0.0], 1.0),
            ([1.0, 0.0], [0.0, 1.0], np.sqrt(2.0)),
        ],
    )
    def test_relative_l2_error(self, z, z_pred, expected):
        assert relative_l2_error(z, z_pred) == pytest.approx(expected)

    def test_zero_reference(self):
        with pytest.raises(InvalidInputError):
            relative_l2_error([0.0, 0.0], [1.0, 0.0])

    def test_reduction(self):
        assert reduction_pct(0.5, 0.25) == pytest.approx(50.0)
        assert reduction_pct(0.0, 0.1) == 0.0


class TestRegistry:
    def test_ids(self):
        assert case_ids() == [c.value for c in CaseId]
        assert set(CASES) == set(CaseId)

    def test_unknown_case(self):
        with pytest.raises(UnknownCaseError) as info:
            get_case("bogus")
        assert "bogus" in str(info.value)

    def test_anova_plan_budget(self):
        assert get_case("anova_2d").anova_plan(0).budget == 25

    def test_smolyak_case_is_deterministic(self):
        case = get_case("s2_ex1_cheb3d")
        assert case.deterministic
        assert case.train_plan(0).n == 69
        np.testing.assert_array_equal(case.train_plan(0).points, case.train_plan(5).points)


class TestReport:
    def _case(self, **limits):
        return dataclasses.replace(get_case("ex1_poly5d"), thresholds=Thresholds(**limits))

    def test_medians_and_checks(self):
        results = [
            SeedResult(seed=0, baseline_err=0.4, candidate_err=0.2),
            SeedResult(seed=1, baseline_err=0.5, candidate_err=0.1),
            SeedResult(seed=2, error="ValidationError: boom"),
        ]
        report = CaseReport(self._case(reduction_min=30.0, candidate_max=0.2), results)
        assert report.candidate_median == pytest.approx(0.15)
        assert report.reduction_median == pytest.approx(65.0)
        assert report.passed
        document = report.to_dict()
        assert document["errors"] == {"2": "ValidationError: boom"}
        assert document["candidate_spread"] == [0.1, 0.2]

    def test_fails_without_successful_seeds(self):
        report = CaseReport(self._case(), [SeedResult(seed=0, error="boom")])
        assert report.checks() == {"seeds_succeeded": False}
        assert not report.passed

    def test_penalized_dim_is_one_based_in_report(self):
        report = CaseReport(self._case(penalized_dim=1), [SeedResult(seed=0, baseline_err=1.0, candidate_err=0.01, penalized_dim=1)])
        assert report.passed
        assert report.to_dict()["penalized_dim"] == [2]

    def test_seed_failures_are_captured(self):
        result = run_seed(get_case("anova_2d"), 0, {"bogus_key": 1})
        assert not result.ok
        assert "ValidationError" in result.error

    def test_unexpected_errors_stay_with_their_seed(self, monkeypatch):
        def explode(case, seed, overrides):
            if seed == 1:
                raise ValueError("singular split")
            return SeedResult(seed=seed, baseline_err=1.0, candidate_err=0.5)

        monkeypatch.setattr(runner, "_regression_seed", explode)
        report = run_case("ex1_poly5d", seeds=[0, 1, 2])
        assert [r.error for r in report.results] == [None, "ValueError: singular split", None]
        assert report.candidate_median == pytest.approx(0.5)

    def test_sequential_seeds_nest_fold_scoring(self):
        overrides = {
            "n_train": 40, "n_test": 200, "max_modes": 2, "max_degree": 2,
            "selection": "cv:3", "lambda_grid": "log:1e-4:1e-1:3",
        }
        report = run_case("ex1_poly5d", seeds=[0], overrides=overrides, concurrent=False)
        assert [r.error for r in report.results] == [None]
        assert report.results[0].candidate_err is not None


@pytest.mark.slow
class TestAcceptance:
    def test_s2_ex1(self, tmp_path):
        report = run_case("s2_ex1_cheb3d", out=tmp_path / "report.json")
        assert report.candidate_median <= 0.02
        assert report.baseline_median >= 0.5
        assert report.passed
        document = json.loads((tmp_path / "report.json").read_text())
        assert document["penalized_dim"] == [2]

    def test_s2_ex2(self):
        assert run_case("s2_ex2_cheb5d").passed

    def test_ex1_rspgd(self):
        report = run_case("ex1_poly5d")
        assert report.reduction_median >= 30.0

    def test_ex2_rspgd(self):
        assert run_case("ex2_triglog5d").reduction_median >= 25.0

    def test_lorenz(self, tmp_path):
        report = run_case("lorenz_sindy", plots=tmp_path)
        assert report.passed
        assert report.candidate_median < 2e-4
        assert (tmp_path / "lorenz_coefficients.csv").exists()
        assert (tmp_path / "lorenz_trajectory.csv").exists()

    def test_lorenz_identified_system_shadows_truth(self):
        report = run_case("lorenz_sindy", seeds=[0])
        result = report.results[0]
        assert result.checks["shadow"]
        assert result.details["shadow_error"] <= 0.05

    def test_anova_2d(self):
        report = run_case("anova_2d")
        assert report.candidate_median <= 0.05
        assert report.baseline_median >= 2.0 * report.candidate_median
