"""Flat ``key = value`` run configuration with typed parameters."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

from . import arith
from .errors import DomainError


def rational(text) -> Fraction:
    return arith.parse_number(text)


def integer(text) -> int:
    q = arith.parse_number(text)
    if q.denominator != 1:
        raise DomainError(f"{text!r} is not an integer")
    return int(q)


def text(value) -> str:
    return str(value).strip()


@dataclass(frozen=True)
class Param:
    name: str
    parse: Callable
    default: object = None
    help: str = ""
    choices: tuple | None = None

    @property
    def flag(self) -> str:
        return "--" + self.name.replace("_", "-")

    def convert(self, raw):
        value = self.parse(raw)
        if self.choices is not None and value not in self.choices:
            raise DomainError(f"{self.name} must be one of {', '.join(self.choices)}; got {value!r}")
        return value


def read_config(path) -> dict[str, str]:
    """Parse a ``key = value`` file; ``#`` starts a comment, blank lines are skipped."""
    out: dict[str, str] = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise DomainError(f"cannot read config file {path}: {exc.strerror}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise DomainError(f"{path}:{lineno}: empty key")
        if key in out:
            raise DomainError(f"{path}:{lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def resolve(params, file_values: dict, cli_values: dict) -> dict:
    """Merge defaults, file values and command-line values, in rising priority.

    Keys in the file that name no parameter are rejected.
    """
    known = {p.name for p in params}
    unknown = sorted(set(file_values) - known)
    if unknown:
        raise DomainError(f"unknown config key(s): {', '.join(unknown)}")
    out = {}
    for p in params:
        if cli_values.get(p.name) is not None:
            out[p.name] = p.convert(cli_values[p.name])
        elif p.name in file_values:
            out[p.name] = p.convert(file_values[p.name])
        else:
            out[p.name] = None if p.default is None else p.convert(p.default)
    return out
