"""Placeholder scanning and substitution for skeleton files.

Placeholders are `${name}` or bare `$name`; `$$` escapes a dollar sign.
A dollar sign followed by anything else is literal text.  Substitution is
a single left-to-right pass, so replacement text is never re-scanned.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .diagnostics import (
    E_BAD_NAME,
    E_UNBOUND,
    E_UNTERMINATED,
    Diagnostic,
    DiagnosticError,
    Span,
    error,
    has_errors,
)
from .lexer import KEYWORDS
from .values import Value, scalar_text

_DOLLAR, _LBRACE, _RBRACE, _NL = ord("$"), ord("{"), ord("}"), ord("\n")


def _ident_start(c: int) -> bool:
    return 65 <= c <= 90 or 97 <= c <= 122 or c == 95


def _ident_char(c: int) -> bool:
    return _ident_start(c) or 48 <= c <= 57


@dataclass(frozen=True)
class Placeholder:
    """One occurrence of a placeholder; span covers `$name` or `${name}`."""

    name: str
    span: Span
    braced: bool


# Walker events: ("lit", bytes), ("esc",), ("ph", Placeholder), ("err", Diagnostic)


def _events(data: bytes) -> Iterator[tuple]:
    i, n = 0, len(data)
    lit_start = 0
    while i < n:
        if data[i] != _DOLLAR:
            i += 1
            continue
        if lit_start < i:
            yield ("lit", data[lit_start:i])
        nxt = data[i + 1] if i + 1 < n else None
        if nxt == _DOLLAR:
            yield ("esc",)
            i += 2
        elif nxt == _LBRACE:
            j = i + 2
            while j < n and data[j] not in (_RBRACE, _NL):
                j += 1
            if j >= n or data[j] == _NL:
                yield (
                    "err",
                    error(E_UNTERMINATED, "unterminated placeholder", Span(i, j)),
                )
                i = j
            else:
                name = data[i + 2 : j].decode("utf-8", errors="replace")
                yield from _named(name, Span(i, j + 1), True)
                i = j + 1
        elif nxt is not None and _ident_start(nxt):
            j = i + 1
            while j < n and _ident_char(data[j]):
                j += 1
            name = data[i + 1 : j].decode("utf-8")
            yield from _named(name, Span(i, j), False)
            i = j
        else:
            yield ("lit", b"$")
            i += 1
        lit_start = i
    if lit_start < n:
        yield ("lit", data[lit_start:])


def _named(name: str, span: Span, braced: bool) -> Iterator[tuple]:
    if not name or not all(_ident_char(ord(c)) for c in name) or not _ident_start(ord(name[0])):
        yield ("err", error(E_BAD_NAME, f"bad placeholder name {name!r}", span))
    elif name in KEYWORDS:
        yield (
            "err",
            error(E_BAD_NAME, f"placeholder name '{name}' is a reserved word", span),
        )
    else:
        yield ("ph", Placeholder(name, span, braced))


def scan_template(text: str) -> tuple[list[Placeholder], list[Diagnostic]]:
    """Find every placeholder; spans are byte offsets and never overlap."""
    placeholders: list[Placeholder] = []
    diags: list[Diagnostic] = []
    for event in _events(text.encode("utf-8")):
        if event[0] == "ph":
            placeholders.append(event[1])
        elif event[0] == "err":
            diags.append(event[1])
    return placeholders, diags


def substitute(text: str, env: Mapping[str, Value]) -> str:
    """Replace every placeholder with its bound value as bare text.

    Raises DiagnosticError listing every scan error and unbound name; the
    output contains no placeholder syntax except what replacement values
    themselves carry.
    """
    parts: list[str] = []
    diags: list[Diagnostic] = []
    for event in _events(text.encode("utf-8")):
        kind = event[0]
        if kind == "lit":
            parts.append(event[1].decode("utf-8"))
        elif kind == "esc":
            parts.append("$")
        elif kind == "ph":
            ph = event[1]
            if ph.name in env:
                parts.append(scalar_text(env[ph.name]))
            else:
                diags.append(
                    error(E_UNBOUND, f"placeholder '{ph.name}' is not bound", ph.span)
                )
        else:
            diags.append(event[1])
    if has_errors(diags):
        raise DiagnosticError(diags)
    return "".join(parts)
