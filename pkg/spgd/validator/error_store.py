"""Collects field-level error messages while validating configs and data files.

.. warning::

    This module is treated as private API.
    Users should not need to use this module directly.
"""

from __future__ import annotations

import typing

from .exceptions import SCHEMA, ValidationError


class ErrorStore:
    def __init__(self):
        #: field name (or row index) -> list of messages
        self.errors: dict = {}

    def store_error(self, messages, field_name=SCHEMA, index=None):
        # non-dict messages are filed under the field; dicts merge at top level
        if field_name != SCHEMA or not isinstance(messages, dict):
            messages = {field_name: messages}
        if index is not None:
            messages = {index: messages}
        self.errors = merge_errors(self.errors, messages)

    def check(self, condition: bool, message: str, field_name=SCHEMA, index=None) -> bool:
        if not condition:
            self.store_error([message], field_name, index)
        return condition

    def raise_if_any(self, exc_class: type[ValidationError] = ValidationError) -> None:
        if self.errors:
            raise exc_class(self.errors)


def _as_list(messages: typing.Any) -> list:
    return list(messages) if isinstance(messages, list) else [messages]


def merge_errors(errors1, errors2):
    """Deeply merge two error payloads.

    Both arguments follow the ``message`` format of
    :exc:`spgd.validator.exceptions.ValidationError`: a string, a list of
    strings or a dict keyed by field name. Lists concatenate, dicts merge
    key by key, and a list meeting a dict lands under the ``_schema`` key.
    """
    if not errors1:
        return errors2
    if not errors2:
        return errors1
    if isinstance(errors1, dict) and isinstance(errors2, dict):
        merged = dict(errors1)
        for key, value in errors2.items():
            merged[key] = merge_errors(merged[key], value) if key in merged else value
        return merged
    if isinstance(errors1, dict):
        return dict(errors1, **{SCHEMA: merge_errors(errors1.get(SCHEMA), errors2)})
    if isinstance(errors2, dict):
        return dict(errors2, **{SCHEMA: merge_errors(errors1, errors2.get(SCHEMA))})
    return _as_list(errors1) + _as_list(errors2)
