"""Closed-form test functions.

Every function takes a single point ``(d,)`` or a batch ``(n, d)`` and
returns a scalar or ``n`` values.
"""

from __future__ import annotations

import typing

import numpy as np
from numpy.polynomial import chebyshev

from spgd.types import CaseId
from spgd.validator import DimensionMismatchError, DomainError, UnknownCaseError


def _columns(x: typing.Any, d: int) -> tuple[np.ndarray, bool]:
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    if x.shape[1] != d:
        raise DimensionMismatchError(f"Expected {d} coordinates, got {x.shape[1]}.", field_name="point")
    return x, single


def _result(values: np.ndarray, single: bool):
    return float(values[0]) if single else values


def cheb(n: int, x: np.ndarray) -> np.ndarray:
    """Chebyshev polynomial ``T_n`` of the first kind."""
    return chebyshev.chebval(x, [0.0] * n + [1.0])


def _log_shifted(x4: np.ndarray) -> np.ndarray:
    argument = 3.0 * x4 + 1.5
    if np.any(argument <= 0.0):
        raise DomainError("log(3 x4 + 1.5) needs x4 > -0.5.", field_name="point")
    return np.log(argument)


def ex1_poly5d(x):
    x, single = _columns(x, 5)
    x1, x2, x3, x4, x5 = x.T
    values = (
        (8 * x1**3 - 6 * x1 - 0.5 * x2) ** 2
        + (4 * x3**3 - 3 * x3 - 0.25 * x4) ** 2
        + 0.1 * (2 * x5**2 - 1)
    )
    return _result(values, single)


def _trig_log_block(x3, x4, x5):
    return (np.sin(2 * x3) - 3.14) * _log_shifted(x4) * np.cos(x5) + np.exp(x4) * np.cosh(x3) * np.sinh(x5)


def ex2_triglog5d(x):
    x, single = _columns(x, 5)
    x1, x2, x3, x4, x5 = x.T
    return _result(np.cos(x1 * x2) * _trig_log_block(x3, x4, x5), single)


def s2_ex1_cheb3d(x):
    x, single = _columns(x, 3)
    x1, x2, x3 = x.T
    return _result((np.sin(2 * x1) - 3.14) * cheb(5, x2) + np.exp(x3) * np.cosh(x1), single)


def s2_ex2_cheb5d(x):
    x, single = _columns(x, 5)
    x1, x2, x3, x4, x5 = x.T
    values = (
        (cheb(5, x1) + 2 * cheb(1, x1))
        * (cheb(2, x2) + 2 * cheb(4, x2))
        * _trig_log_block(x3, x4, x5)
    )
    return _result(values, single)


def anova_2d(x):
    """``-2 cos(3 x^1.75) + 10 log((y - 0.6)^4) + 6 cos(x) (y - 0.3 y^2)``."""
    x, single = _columns(x, 2)
    u, v = x.T
    if np.any(u < 0.0):
        raise DomainError("x^1.75 needs x >= 0.", field_name="point")
    if np.any(v == 0.6):
        raise DomainError("log((y - 0.6)^4) is undefined at y = 0.6.", field_name="point")
    values = -2 * np.cos(3 * u**1.75) + 10 * np.log((v - 0.6) ** 4) + 6 * np.cos(u) * (v - 0.3 * v**2)
    return _result(values, single)


FUNCTIONS: dict[CaseId, typing.Callable[[typing.Any], typing.Any]] = {
    CaseId.EX1_POLY5D: ex1_poly5d,
    CaseId.EX2_TRIGLOG5D: ex2_triglog5d,
    CaseId.S2_EX1_CHEB3D: s2_ex1_cheb3d,
    CaseId.S2_EX2_CHEB5D: s2_ex2_cheb5d,
    CaseId.ANOVA_2D: anova_2d,
}


def case_function(case_id: typing.Union[str, CaseId]):
    try:
        return FUNCTIONS[CaseId(case_id)]
    except (ValueError, KeyError):
        raise UnknownCaseError(str(case_id))


def eval_case_function(case_id: typing.Union[str, CaseId], point: typing.Sequence[float]) -> float:
    return float(case_function(case_id)(np.asarray(point, dtype=float).reshape(-1)))
