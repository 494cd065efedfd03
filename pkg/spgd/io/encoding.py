from __future__ import annotations

import enum
import typing

import numpy as np


def json_default(value: typing.Any) -> typing.Any:
    """``json.dumps`` fallback for numpy values and enums."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, enum.Enum):
        return value.value
    raise TypeError(f"{type(value).__name__} is not JSON serializable")
