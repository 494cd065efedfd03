"""Flag parsing helpers and the ``key = value`` run configuration."""

from __future__ import annotations

import argparse
import typing

from spgd.config.settings import read_config_file
from spgd.validator import ErrorStore

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}")


def int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def seed_list(text: str) -> tuple[int, ...]:
    """``0,3,7`` or an inclusive range ``1..5``."""
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            return tuple(range(int(lo), int(hi) + 1))
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid seed range {text!r}")
    return int_list(text)


def box(text: str) -> tuple[tuple[float, float], ...]:
    """``lo:hi,lo:hi,...``."""
    intervals = []
    for part in text.split(","):
        lo, sep, hi = part.partition(":")
        try:
            if not sep:
                raise ValueError
            intervals.append((float(lo), float(hi)))
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected lo:hi intervals, got {part!r}")
    return tuple(intervals)


class CommandParser:
    """A subcommand parser that remembers its flags for the config file.

    Options are registered with ``None`` as argparse default so values
    given on the command line can be told apart from file values; the real
    defaults are filled in by ``finalize``.
    """

    def __init__(self, parser: argparse.ArgumentParser) -> None:
        self.parser = parser
        self.actions: dict[str, argparse.Action] = {}
        self.defaults: dict[str, typing.Any] = {}

    def add(self, flag: str, *aliases: str, default: typing.Any = None, **kwargs: typing.Any) -> argparse.Action:
        if kwargs.get("action") == "store_true":
            default = bool(default)
        else:
            kwargs.setdefault("default", None)
        if "help" in kwargs and default not in (None, False):
            kwargs["help"] += f" (default: {default})"
        action = self.parser.add_argument(flag, *aliases, **kwargs)
        self.actions[flag.lstrip("-")] = action
        self.defaults[action.dest] = default
        return action

    def _convert(self, key: str, text: str, store: ErrorStore) -> typing.Any:
        action = self.actions[key]
        if action.nargs == 0:
            lowered = text.lower()
            store.check(lowered in _TRUE | _FALSE, f"expected a boolean, got {text!r}", key)
            return lowered in _TRUE
        try:
            value = action.type(text) if action.type else text
        except (argparse.ArgumentTypeError, ValueError) as exc:
            store.store_error([str(exc) or f"invalid value {text!r}"], key)
            return None
        if action.choices is not None:
            store.check(value in action.choices, f"expected one of {sorted(action.choices)}, got {text!r}", key)
        return value

    def apply_config(self, args: argparse.Namespace, path: typing.Optional[str]) -> argparse.Namespace:
        """Fill options missing from the command line from a config file."""
        if not path:
            return args
        values = read_config_file(path)
        store = ErrorStore()
        for key, text in values.items():
            if not store.check(key in self.actions, "Unknown configuration key.", key):
                continue
            value = self._convert(key, text, store)
            dest = self.actions[key].dest
            current = getattr(args, dest)
            if current is None or current is False:
                setattr(args, dest, value)
        store.raise_if_any()
        return args

    def finalize(self, args: argparse.Namespace) -> argparse.Namespace:
        for dest, default in self.defaults.items():
            if getattr(args, dest) is None:
                setattr(args, dest, default)
        return args


def require(args: argparse.Namespace, *dests: str) -> None:
    store = ErrorStore()
    for dest in dests:
        store.check(getattr(args, dest) is not None, "This option is required.", "--" + dest.replace("_", "-"))
    store.raise_if_any()


def one_based(dims: typing.Sequence[int], d: int, field: str) -> tuple[int, ...]:
    """Convert user facing 1-based dimensions to 0-based indices."""
    store = ErrorStore()
    for k in dims:
        store.check(1 <= k <= d, f"dimension {k} outside 1..{d}", field)
    store.raise_if_any()
    return tuple(k - 1 for k in dims)
