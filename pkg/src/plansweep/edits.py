"""Batch text edits addressed by byte span.

Edits in one batch must lie inside the text, start and end on UTF-8
character boundaries, and not overlap one another.  They are applied
back to front so every span refers to the original text.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagnostics import (
    E_OVERLAP,
    E_SPAN,
    Diagnostic,
    DiagnosticError,
    Span,
    error,
)


@dataclass(frozen=True)
class Edit:
    span: Span
    text: str


def _boundary_ok(data: bytes, offset: int) -> bool:
    if offset == 0 or offset == len(data):
        return True
    return not (0x80 <= data[offset] < 0xC0)


def apply_edits(source: str, edits: list[Edit]) -> str:
    """Apply all edits to the source, or raise listing every bad edit."""
    data = source.encode("utf-8")
    diags: list[Diagnostic] = []
    for edit in edits:
        span = edit.span
        if not (0 <= span.start <= span.end <= len(data)):
            diags.append(
                error(E_SPAN, f"edit span {span.start}..{span.end} is out of bounds", span)
            )
        elif not (_boundary_ok(data, span.start) and _boundary_ok(data, span.end)):
            diags.append(
                error(
                    E_SPAN,
                    f"edit span {span.start}..{span.end} splits a character",
                    span,
                )
            )
    if diags:
        raise DiagnosticError(diags)
    ordered = sorted(edits, key=lambda e: (e.span.start, e.span.end))
    for prev, cur in zip(ordered, ordered[1:]):
        if prev.span.end > cur.span.start:
            diags.append(
                error(
                    E_OVERLAP,
                    f"edit spans {prev.span.start}..{prev.span.end} and "
                    f"{cur.span.start}..{cur.span.end} overlap",
                    cur.span,
                )
            )
    if diags:
        raise DiagnosticError(diags)
    out = bytearray(data)
    for edit in reversed(ordered):
        out[edit.span.start : edit.span.end] = edit.text.encode("utf-8")
    return out.decode("utf-8")
