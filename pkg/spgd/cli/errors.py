"""Maps exceptions raised by commands onto process exit codes."""

from __future__ import annotations

import functools
import logging
import typing

from spgd.validator import FitFailure, SpgdError, UnknownCaseError, ValidationError

logger = logging.getLogger("spgd.cli")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FIT_FAILURE = 2
EXIT_ACCEPTANCE = 3


def describe(exc: BaseException) -> str:
    if isinstance(exc, ValidationError):
        messages = exc.normalized_messages()
        parts = []
        for field, value in messages.items():
            text = "; ".join(str(v) for v in value) if isinstance(value, list) else str(value)
            parts.append(text if field == "_schema" else f"{field}: {text}")
        return ", ".join(parts)
    if isinstance(exc, UnknownCaseError):
        return f"unknown case {exc}"
    return str(exc)


def handle_errors(command: typing.Callable[..., int]) -> typing.Callable[..., int]:
    """Run a command and turn its failure into an exit code.

    Bad input, unreadable files and unknown cases exit with 1, a fit that
    produced no mode with 2. One line is logged at ERROR and the traceback
    at DEBUG.
    """

    @functools.wraps(command)
    def wrapper(*args: typing.Any, **kwargs: typing.Any) -> int:
        try:
            return command(*args, **kwargs)
        except FitFailure as exc:
            logger.error(f"fit failed: {exc}")
            logger.debug("traceback", exc_info=True)
            return EXIT_FIT_FAILURE
        except (ValidationError, UnknownCaseError, OSError) as exc:
            logger.error(describe(exc))
            logger.debug("traceback", exc_info=True)
            return EXIT_USAGE
        except SpgdError as exc:
            logger.error(f"{type(exc).__name__}: {exc}")
            logger.debug("traceback", exc_info=True)
            return EXIT_USAGE

    return wrapper
