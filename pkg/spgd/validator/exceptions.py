"""Exception classes for spgd-related errors."""

from __future__ import annotations

import typing

# Key used for errors that do not belong to a single field
SCHEMA = "_schema"


class SpgdError(Exception):
    """Base class for all spgd-related errors."""


class ValidationError(SpgdError, ValueError):
    """Raised when an input, a configuration value or a file row is invalid.

    :param message: An error message, list of error messages, or dict of
        error messages. If a dict, the keys are field names and the values are
        error messages.
    :param field_name: Field name to store the error on.
        If `None`, the error is stored as schema-level error.
    :param data: Raw input data.
    """

    def __init__(
        self,
        message: str | list | dict,
        field_name: str = SCHEMA,
        data: typing.Any = None,
        **kwargs,
    ):
        self.messages = [message] if isinstance(message, (str, bytes)) else message
        self.field_name = field_name
        self.data = data
        self.kwargs = kwargs
        super().__init__(message)

    def normalized_messages(self):
        if self.field_name == SCHEMA and isinstance(self.messages, dict):
            return self.messages
        return {self.field_name: self.messages}

    @property
    def messages_dict(self) -> dict[str, typing.Any]:
        if not isinstance(self.messages, dict):
            raise TypeError(
                "cannot access 'messages_dict' when 'messages' is of type "
                + type(self.messages).__name__
            )
        return self.messages


class InvalidInputError(ValidationError):
    """Raised for non-finite or ill-shaped numeric inputs."""


class DimensionMismatchError(ValidationError):
    """Raised when an array does not conform to the model or dataset dimension."""


class DomainError(ValidationError):
    """Raised when a point lies outside the domain where a function is defined."""


class FitFailure(SpgdError):
    """Raised when no mode could be accepted and the model is rank 0."""


class UnknownCaseError(SpgdError, KeyError):
    """Raised when a benchmark case id is not registered."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown case"
