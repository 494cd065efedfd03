"""Lorenz-63 data pipeline: RK4 trajectory, SINDy-style datasets and identification."""

from __future__ import annotations

import dataclasses
import logging
import typing
import warnings

import numpy as np
from sklearn.model_selection import train_test_split

from spgd.config.settings import BaseConfig, FitConfig, Selection
from spgd.fitting import Dataset, FitReport, fit
from spgd.metrics import relative_l2_error
from spgd.model import SeparatedModel
from spgd.solvers import stls_refit
from spgd.types import Family, Method
from spgd.validator import (
    ErrorStore,
    InvalidInputError,
    SparsityFilterWarning,
    UnderdeterminedWarning,
    ValidationError,
)

logger = logging.getLogger(__name__)

LIBRARY_TERMS = ("", "x", "y", "z", "xy", "xz", "yz", "xyz")
TARGET_NAMES = ("xdot", "ydot", "zdot")
REFERENCE_DOMAIN = ((-1.0, 1.0),) * 3


class LorenzConfig(BaseConfig):
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0

    initial_state: tuple = (-8.0, 7.0, 27.0)
    dt: float = 0.001
    horizon: float = 20.0

    samples: int = 102
    construction_ratio: float = 0.8
    stls_threshold: float = 0.1

    def validate(self) -> None:
        store = ErrorStore()
        store.check(self.dt > 0, "Must be positive.", "dt")
        store.check(self.horizon >= 0, "Must be non-negative.", "horizon")
        store.check(self.samples >= 1, "Must be at least 1.", "samples")
        store.check(0 < self.construction_ratio < 1, "Must lie in (0, 1).", "construction_ratio")
        store.check(self.stls_threshold > 0, "Must be positive.", "stls_threshold")
        store.raise_if_any()


def lorenz_rhs(state: typing.Sequence[float], sigma: float = 10.0, rho: float = 28.0, beta: float = 8.0 / 3.0) -> np.ndarray:
    x, y, z = np.asarray(state, dtype=float)
    return np.array([sigma * (y - x), x * (rho - z) - y, x * y - beta * z])


@dataclasses.dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    derivatives: np.ndarray

    def __len__(self) -> int:
        return self.times.size


def integrate_rk4(
    config: typing.Optional[LorenzConfig] = None,
    rhs: typing.Optional[typing.Callable[[np.ndarray], np.ndarray]] = None,
) -> Trajectory:
    """Classical fourth-order Runge-Kutta from ``config.initial_state``.

    The step is ``horizon / ceil(horizon / dt)`` so the grid ends exactly
    at the horizon. Derivatives are the right-hand side at every state.
    ``rhs`` defaults to the Lorenz field with the config's parameters.
    """
    config = config or LorenzConfig()
    if rhs is None:
        def rhs(state: np.ndarray) -> np.ndarray:
            return lorenz_rhs(state, config.sigma, config.rho, config.beta)

    state = np.asarray(config.initial_state, dtype=float).reshape(-1)
    steps = int(np.ceil(config.horizon / config.dt - 1e-9)) if config.horizon > 0 else 0
    h = config.horizon / steps if steps else 0.0
    states = np.empty((steps + 1, state.size))
    states[0] = state
    for i in range(steps):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * h * k1)
        k3 = rhs(state + 0.5 * h * k2)
        k4 = rhs(state + h * k3)
        state = state + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(state)):
            raise InvalidInputError(
                f"Integration blew up at step {i + 1} (t={(i + 1) * h:.4g}); last finite state {states[i].tolist()}."
            )
        states[i + 1] = state
    derivatives = np.array([rhs(s) for s in states])
    return Trajectory(np.linspace(0.0, config.horizon, steps + 1), states, derivatives)


def library_matrix(states: np.ndarray) -> np.ndarray:
    """Multilinear monomials ``1, x, y, z, xy, xz, yz, xyz`` per row."""
    states = np.atleast_2d(np.asarray(states, dtype=float))
    x, y, z = states.T
    return np.column_stack([np.ones_like(x), x, y, z, x * y, x * z, y * z, x * y * z])


@dataclasses.dataclass(frozen=True, eq=False)
class SindyData:
    """Sampled states with one dataset per derivative and the construction split."""

    times: np.ndarray
    datasets: tuple[Dataset, Dataset, Dataset]
    construction: np.ndarray
    validation: np.ndarray

    @property
    def states(self) -> np.ndarray:
        return self.datasets[0].points

    @property
    def features(self) -> np.ndarray:
        return library_matrix(self.states)


def build_sindy_dataset(
    trajectory: Trajectory, samples: int = 102, seed: int = 0, ratio: float = 0.8
) -> SindyData:
    """Draw ``samples`` grid times without replacement and split construction/validation."""
    if samples > len(trajectory):
        raise ValidationError(
            f"Cannot draw {samples} samples from a trajectory of {len(trajectory)} states.", field_name="samples"
        )
    rng = np.random.default_rng(seed)
    rows = np.sort(rng.choice(len(trajectory), size=samples, replace=False))
    states = trajectory.states[rows]
    datasets = tuple(
        Dataset(states, trajectory.derivatives[rows, j], REFERENCE_DOMAIN, extrapolate=True) for j in range(3)
    )
    construction, validation = train_test_split(np.arange(samples), train_size=ratio, random_state=seed, shuffle=True)
    return SindyData(trajectory.times[rows], datasets, np.sort(construction), np.sort(validation))


def identification_config(seed: int = 0, ratio: float = 0.8, **overrides: typing.Any) -> FitConfig:
    """rs-PGD with ridge penalties on degree-1 Chebyshev bases over ``[-1, 1]``."""
    settings = dict(
        method=Method.RSPGD,
        family=Family.CHEBYSHEV,
        initial_degree=1,
        max_degree=1,
        alpha=0.0,
        selection=Selection.parse(f"split:{ratio}"),
        max_modes=12,
        seed=seed,
    )
    settings.update(overrides)
    return FitConfig(**settings)


@dataclasses.dataclass
class Identification:
    models: list[SeparatedModel]
    reports: list[FitReport]
    initial: np.ndarray
    refit: np.ndarray
    supports: list[tuple[int, ...]]
    construction_error: list[float]
    validation_error: list[float]

    def coefficient_table(self) -> list[dict[str, typing.Any]]:
        """Rows of library term, initial and refitted coefficients per derivative."""
        return [
            {
                "term": term or "1",
                **{f"{name}_initial": float(self.initial[j, i]) for j, name in enumerate(TARGET_NAMES)},
                **{f"{name}_stls": float(self.refit[j, i]) for j, name in enumerate(TARGET_NAMES)},
            }
            for i, term in enumerate(LIBRARY_TERMS)
        ]


def identify(data: SindyData, config: typing.Optional[FitConfig] = None, threshold: float = 0.1) -> Identification:
    """Fit each derivative, expand to library coefficients, then threshold and refit."""
    config = config or identification_config()
    threshold = config.stls_threshold if config.stls_threshold is not None else threshold
    features = data.features
    if features.shape[0] < features.shape[1]:
        logger.warning(f"{features.shape[0]} samples for {features.shape[1]} library terms")
        warnings.warn(
            f"{features.shape[0]} samples for {features.shape[1]} library terms", UnderdeterminedWarning, stacklevel=2
        )
    models, reports, initial, refit, supports, errors_c, errors_v = [], [], [], [], [], [], []
    for j, dataset in enumerate(data.datasets):
        model, report = fit(dataset, config)
        terms = model.expand_multilinear()
        coeffs = np.array(list(terms.values()))
        support, refitted = stls_refit(features, dataset.targets, coeffs, threshold)
        if not support:
            logger.warning(f"{TARGET_NAMES[j]}: thresholding at {threshold} removed every library term")
            warnings.warn(f"{TARGET_NAMES[j]}: empty support after thresholding", SparsityFilterWarning, stacklevel=2)
        predicted = features @ refitted
        errors_c.append(relative_l2_error(dataset.targets[data.construction], predicted[data.construction]))
        errors_v.append(relative_l2_error(dataset.targets[data.validation], predicted[data.validation]))
        logger.info(
            f"{TARGET_NAMES[j]}: rank={model.rank} support={[LIBRARY_TERMS[i] or '1' for i in support]} "
            f"construction_err={errors_c[-1]:.2e} validation_err={errors_v[-1]:.2e}"
        )
        models.append(model)
        reports.append(report)
        initial.append(coeffs)
        refit.append(refitted)
        supports.append(support)
    return Identification(models, reports, np.array(initial), np.array(refit), supports, errors_c, errors_v)


def identified_rhs(coeffs: np.ndarray) -> typing.Callable[[np.ndarray], np.ndarray]:
    coeffs = np.asarray(coeffs, dtype=float)

    def rhs(state: np.ndarray) -> np.ndarray:
        return coeffs @ library_matrix(state)[0]

    return rhs


def simulate_identified(coeffs: np.ndarray, config: typing.Optional[LorenzConfig] = None) -> Trajectory:
    return integrate_rk4(config, rhs=identified_rhs(coeffs))



def shadow_error(coeffs: np.ndarray, config: typing.Optional[LorenzConfig] = None, horizon: float = 1.0) -> float:
    """Largest relative state error of the identified system over ``[0, horizon]``.

    Both systems start from ``config.initial_state``; the error at each step
    is ``|s_id - s_true| / |s_true|``. Chaos makes longer horizons meaningless.
    """
    config = (config or LorenzConfig()).replace(horizon=horizon)
    truth = integrate_rk4(config)
    model = simulate_identified(coeffs, config)
    scale = np.linalg.norm(truth.states, axis=1)
    return float(np.max(np.linalg.norm(model.states - truth.states, axis=1) / scale))
