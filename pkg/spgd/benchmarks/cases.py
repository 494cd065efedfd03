"""Registered benchmark cases: domains, sampling plans, method settings and pass gates."""

from __future__ import annotations

import dataclasses
import typing

from spgd.anova import AnovaConfig
from spgd.config.settings import FitConfig, Selection
from spgd.sampling import SamplePlan, cross_plan, full_grid, lhs, smolyak_grid
from spgd.types import CaseId, CouplingKind, Family, Method, SelectionKind
from spgd.validator import UnknownCaseError

from .functions import case_function
from .lorenz import LorenzConfig

TEST_SEED_OFFSET = 10_000

EX1_BOX = ((-0.51, 0.51),) * 5
# x4 stays above -0.5 so that log(3 x4 + 1.5) is defined
TRIGLOG_BOX = ((-1.0, 1.0),) * 3 + ((-0.45, 1.0),) + ((-1.0, 1.0),)
S2_EX1_BOX = ((-1.0, 1.0),) * 3
ANOVA_BOX = ((0.0, 1.0), (0.0, 0.5))


@dataclasses.dataclass(frozen=True)
class Thresholds:
    candidate_max: typing.Optional[float] = None
    baseline_min: typing.Optional[float] = None
    reduction_min: typing.Optional[float] = None
    baseline_factor: typing.Optional[float] = None
    penalized_dim: typing.Optional[int] = None


@dataclasses.dataclass(frozen=True)
class BenchmarkCase:
    id: CaseId
    description: str
    box: tuple[tuple[float, float], ...]
    n_train: int
    n_test: int
    baseline: typing.Optional[FitConfig]
    candidate: typing.Any
    thresholds: Thresholds
    paper_ref: str
    default_seeds: tuple[int, ...] = (0, 1, 2, 3, 4)
    deterministic: bool = False
    train_kind: str = "lhs"

    @property
    def d(self) -> int:
        return len(self.box)

    @property
    def function(self):
        return case_function(self.id)

    def train_plan(self, seed: int) -> SamplePlan:
        if self.train_kind == "smolyak":
            return smolyak_grid(self.d, 3, self.box)
        return lhs(self.n_train, self.d, self.box, seed)

    def test_plan(self, seed: int) -> SamplePlan:
        if self.train_kind == "smolyak":
            return full_grid([30] * self.d, self.box)
        return lhs(self.n_test, self.d, self.box, seed + TEST_SEED_OFFSET)

    def anova_plan(self, seed: int):
        anchor = [0.5 * (lo + hi) for lo, hi in self.box]
        return cross_plan(anchor, [10] * self.d, self.box, seed).with_coupling(4, seed)

    def with_sizes(self, n_train: typing.Optional[int] = None, n_test: typing.Optional[int] = None) -> "BenchmarkCase":
        return dataclasses.replace(
            self,
            n_train=self.n_train if n_train is None else n_train,
            n_test=self.n_test if n_test is None else n_test,
        )


def _spgd_baseline(**overrides: typing.Any) -> FitConfig:
    settings = dict(
        method=Method.SPGD,
        family=Family.CHEBYSHEV,
        initial_degree=1,
        max_degree=4,
        selection=Selection(SelectionKind.TRAIN),
    )
    settings.update(overrides)
    return FitConfig(**settings)


def _registry() -> dict[CaseId, BenchmarkCase]:
    split = Selection.parse("split:0.8")
    return {
        CaseId.EX1_POLY5D: BenchmarkCase(
            id=CaseId.EX1_POLY5D,
            description="five-dimensional polynomial, rs-PGD (alpha 0.1) against s-PGD",
            box=EX1_BOX,
            n_train=160,
            n_test=54_000,
            baseline=_spgd_baseline(),
            candidate=FitConfig(method=Method.RSPGD, max_degree=4, alpha=0.1, selection=split),
            thresholds=Thresholds(reduction_min=30.0),
            paper_ref="rs-PGD first example: 160 LHS points, 54000 test points, error reduced by 52.38% with alpha = 0.1",
            default_seeds=tuple(range(10)),
        ),
        CaseId.EX2_TRIGLOG5D: BenchmarkCase(
            id=CaseId.EX2_TRIGLOG5D,
            description="five-dimensional trigonometric/logarithmic function, rs-PGD (alpha 0.5) against s-PGD",
            box=TRIGLOG_BOX,
            n_train=290,
            n_test=2_000,
            baseline=_spgd_baseline(),
            candidate=FitConfig(method=Method.RSPGD, max_degree=4, alpha=0.5, selection=split),
            thresholds=Thresholds(reduction_min=25.0),
            paper_ref="rs-PGD second example: 290 LHS points, 2000 test points, about 47% reduction with alpha = 0.5",
        ),
        CaseId.LORENZ_SINDY: BenchmarkCase(
            id=CaseId.LORENZ_SINDY,
            description="Lorenz-63 identification with rs-PGD and sequential thresholded least squares",
            box=((-1.0, 1.0),) * 3,
            n_train=102,
            n_test=0,
            baseline=None,
            candidate=LorenzConfig(),
            thresholds=Thresholds(candidate_max=2e-4),
            paper_ref="Lorenz system: 102 samples on t in [0, 20], error below 0.02%, leading xdot terms -9.9997 and 9.9996",
            default_seeds=(0,),
        ),
        CaseId.S2_EX1_CHEB3D: BenchmarkCase(
            id=CaseId.S2_EX1_CHEB3D,
            description="three-dimensional function sparse in x2, s2-PGD dimension scan against s-PGD",
            box=S2_EX1_BOX,
            n_train=69,
            n_test=27_000,
            baseline=_spgd_baseline(),
            candidate=FitConfig(
                method=Method.S2PGD, sparse_dims="auto", sparse_degree=8, max_degree=4, selection=Selection()
            ),
            thresholds=Thresholds(candidate_max=0.02, baseline_min=0.5, penalized_dim=1),
            paper_ref="s2-PGD first example: level-3 Smolyak grid, 27000 test points, err_pgd = 141% and err_s2pgd = 0.56%, x2 penalized",
            default_seeds=(0,),
            deterministic=True,
            train_kind="smolyak",
        ),
        CaseId.S2_EX2_CHEB5D: BenchmarkCase(
            id=CaseId.S2_EX2_CHEB5D,
            description="five-dimensional function sparse in x1 and x2, s2-PGD dimension scan against s-PGD",
            box=TRIGLOG_BOX,
            n_train=290,
            n_test=2_000,
            baseline=_spgd_baseline(),
            candidate=FitConfig(
                method=Method.S2PGD, sparse_dims="auto", sparse_degree=6, max_degree=4, max_modes=60, selection=split
            ),
            thresholds=Thresholds(candidate_max=0.10, baseline_min=0.25, penalized_dim=0),
            paper_ref="s2-PGD second example: 290 LHS points, 2000 test points, err_pgd = 46.39% and err_s2pgd = 2.4%, x1 penalized",
        ),
        CaseId.ANOVA_2D: BenchmarkCase(
            id=CaseId.ANOVA_2D,
            description="two-dimensional ANOVA-PGD on an anchored cross against s-PGD with the same budget",
            box=ANOVA_BOX,
            n_train=25,
            n_test=2_000,
            baseline=_spgd_baseline(),
            candidate=AnovaConfig(coupling=CouplingKind.DENSE, coupling_degree=2),
            thresholds=Thresholds(candidate_max=0.05, baseline_factor=2.0),
            paper_ref="ANOVA-PGD example: anchor + 10 + 10 cross points + 4 coupling points against s-PGD on 25 LHS points",
        ),
    }


CASES = _registry()


def get_case(case_id: typing.Union[str, CaseId]) -> BenchmarkCase:
    try:
        return CASES[CaseId(case_id)]
    except ValueError:
        raise UnknownCaseError(str(case_id))


def case_ids() -> list[str]:
    return [case.value for case in CASES]
