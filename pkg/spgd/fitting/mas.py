from __future__ import annotations

import typing


def mas_next_degree(
    history: typing.Sequence[float],
    current: int,
    max_degree: int,
    tol: float = 0.05,
    patience: int = 1,
) -> int:
    """Modal adaptivity: raise the degree once the residual stagnates.

    ``history`` holds the training relative errors, starting with the
    error of the empty model. The degree goes up by one, capped at
    ``max_degree``, when each of the last ``patience`` steps improved the
    error by a relative factor below ``tol``.
    """
    history = [float(v) for v in history]
    if len(history) < patience + 1:
        return current
    recent = history[-(patience + 1):]
    for previous, latest in zip(recent, recent[1:]):
        if previous <= 0.0 or (previous - latest) / previous >= tol:
            return current
    return min(current + 1, max_degree)
