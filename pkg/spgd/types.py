from enum import Enum


class Family(str, Enum):
    CHEBYSHEV = "chebyshev"
    MONOMIAL = "monomial"


class Method(str, Enum):
    SPGD = "spgd"
    RSPGD = "rspgd"
    S2PGD = "s2pgd"


class SelectionKind(str, Enum):
    KFOLD = "kfold"
    SPLIT = "split"
    ONE_SE_KFOLD = "one_se_kfold"
    TRAIN = "train"


class PlanKind(str, Enum):
    LHS = "lhs"
    SMOLYAK = "smolyak"
    CROSS = "cross"
    FULL_GRID = "full_grid"
    UNIFORM = "uniform"


class CouplingKind(str, Enum):
    DENSE = "dense"
    RSPGD = "rspgd"
    S2PGD = "s2pgd"


class UnivariateKind(str, Enum):
    SPLINE = "spline"
    POLYNOMIAL = "polynomial"


class CaseId(str, Enum):
    EX1_POLY5D = "ex1_poly5d"
    EX2_TRIGLOG5D = "ex2_triglog5d"
    LORENZ_SINDY = "lorenz_sindy"
    S2_EX1_CHEB3D = "s2_ex1_cheb3d"
    S2_EX2_CHEB5D = "s2_ex2_cheb5d"
    ANOVA_2D = "anova_2d"
