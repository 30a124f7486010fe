"""Diagnostics, spans, and error codes shared by every layer of the engine."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

# Stable diagnostic codes. Tests and API clients match on these strings.
E_LEX = "E_LEX"
E_PARSE = "E_PARSE"
E_TYPE = "E_TYPE"
E_DUP_PARAM = "E_DUP_PARAM"
E_DUP_TASK = "E_DUP_TASK"
E_EMPTY_RANGE = "E_EMPTY_RANGE"
E_BAD_STEP = "E_BAD_STEP"
E_BAD_POINTS = "E_BAD_POINTS"
E_BAD_DEFAULT = "E_BAD_DEFAULT"
E_EMPTY_SELECT = "E_EMPTY_SELECT"
E_OVERFLOW = "E_OVERFLOW"
E_NO_SELECTION = "E_NO_SELECTION"
E_OVERRIDE = "E_OVERRIDE"
E_SPAN = "E_SPAN"
E_OVERLAP = "E_OVERLAP"
E_BAD_NAME = "E_BAD_NAME"
E_UNTERMINATED = "E_UNTERMINATED"
E_UNBOUND = "E_UNBOUND"
E_BINARY = "E_BINARY"
E_VERSION = "E_VERSION"
E_CORRUPT = "E_CORRUPT"
E_NO_MAIN = "E_NO_MAIN"
E_WORKDIR = "E_WORKDIR"
E_PATH = "E_PATH"
E_NO_FILE = "E_NO_FILE"
E_BIND = "E_BIND"
W_DUP_VALUE = "W_DUP_VALUE"


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Span:
    """Half-open byte-offset range [start, end) into a UTF-8 document."""

    start: int
    end: int

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: str
    message: str
    span: Span | None = None

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR


def error(code: str, message: str, span: Span | None = None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, span)


def warning(code: str, message: str, span: Span | None = None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, span)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diags)


def line_col(source: str, byte_offset: int) -> tuple[int, int]:
    """1-based (line, column) of a byte offset; column counts bytes."""
    data = source.encode("utf-8")
    prefix = data[: max(0, min(byte_offset, len(data)))]
    line = prefix.count(b"\n") + 1
    last_nl = prefix.rfind(b"\n")
    col = len(prefix) - last_nl if last_nl >= 0 else len(prefix) + 1
    return line, col


def format_diagnostic(diag: Diagnostic, source: str | None = None,
                      filename: str = "<plan>") -> str:
    """Render one diagnostic as `file:line:col: severity code: message`."""
    where = filename
    if diag.span is not None and source is not None:
        line, col = line_col(source, diag.span.start)
        where = f"{filename}:{line}:{col}"
    return f"{where}: {diag.severity.value} {diag.code}: {diag.message}"


class DiagnosticError(Exception):
    """Raised by operations whose failure carries diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic] | Diagnostic):
        if isinstance(diagnostics, Diagnostic):
            diagnostics = [diagnostics]
        self.diagnostics = diagnostics
        super().__init__("; ".join(f"{d.code}: {d.message}" for d in diagnostics))

    @property
    def code(self) -> str:
        return self.diagnostics[0].code
