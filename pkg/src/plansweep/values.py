"""Scalar values bound to parameters, and their canonical text spellings."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class IntVal:
    value: int

    def __post_init__(self) -> None:
        if not (INT64_MIN <= self.value <= INT64_MAX):
            raise ValueError(f"integer value out of 64-bit range: {self.value}")


@dataclass(frozen=True)
class RealVal:
    value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"real value must be finite, got {self.value!r}")


@dataclass(frozen=True)
class TextVal:
    value: str


@dataclass(frozen=True)
class FileVal:
    path: str


Value = Union[IntVal, RealVal, TextVal, FileVal]


def is_numeric(v: Value) -> bool:
    return isinstance(v, (IntVal, RealVal))


def numeric_value(v: Value) -> float:
    """Numeric payload of an IntVal/RealVal as a float."""
    if isinstance(v, IntVal):
        return float(v.value)
    if isinstance(v, RealVal):
        return v.value
    raise TypeError(f"not a numeric value: {v!r}")


def shortest_real(x: float) -> str:
    """Shortest numeral denoting the double x (integral doubles drop the dot)."""
    r = repr(x)
    if x.is_integer():
        i = str(int(x))
        if len(i) <= len(r):
            return i
    return r


def tagged_real(x: float) -> str:
    """Shortest numeral that reparses as a real (always keeps `.` or `e`)."""
    return repr(x)


def quote(text: str) -> str:
    """Double-quote with backslash escapes for `\"` and `\\`."""
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def scalar_text(v: Value) -> str:
    """Bare rendering used for substitution and environment export (no quotes)."""
    if isinstance(v, IntVal):
        return str(v.value)
    if isinstance(v, RealVal):
        return shortest_real(v.value)
    if isinstance(v, TextVal):
        return v.value
    if isinstance(v, FileVal):
        return v.path
    raise TypeError(f"not a value: {v!r}")


def plan_literal(v: Value) -> str:
    """Canonical plan-file spelling; preserves the int/real distinction."""
    if isinstance(v, IntVal):
        return str(v.value)
    if isinstance(v, RealVal):
        return tagged_real(v.value)
    if isinstance(v, TextVal):
        return quote(v.value)
    if isinstance(v, FileVal):
        return quote(v.path)
    raise TypeError(f"not a value: {v!r}")


def run_literal(v: Value) -> str:
    """Run-specification spelling: shortest numerals, quoted text/file values."""
    if isinstance(v, IntVal):
        return str(v.value)
    if isinstance(v, RealVal):
        return shortest_real(v.value)
    if isinstance(v, TextVal):
        return quote(v.value)
    if isinstance(v, FileVal):
        return quote(v.path)
    raise TypeError(f"not a value: {v!r}")


def values_equivalent(a: Value, b: Value) -> bool:
    """Equality up to the numeric and text/file tag distinctions.

    Used when comparing run specifications that crossed a wire format which
    does not carry the tags (e.g. `0` for 0.0, plain strings for paths).
    """
    if is_numeric(a) and is_numeric(b):
        return numeric_value(a) == numeric_value(b)
    if isinstance(a, (TextVal, FileVal)) and isinstance(b, (TextVal, FileVal)):
        pa = a.value if isinstance(a, TextVal) else a.path
        pb = b.value if isinstance(b, TextVal) else b.path
        return pa == pb
    return False
