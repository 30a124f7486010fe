"""Lexer for plan files.

Produces a token stream with byte-offset spans.  Inside `task … endtask`
blocks the lexer switches to a raw mode where each non-blank line becomes a
single RAWLINE token, so shell command lines survive verbatim.  `scan_all`
keeps whitespace/comment trivia so that every input byte is covered by
exactly one token or diagnostic span; `tokenize` filters trivia out for the
parser.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, auto

from .diagnostics import E_LEX, Diagnostic, Span, error


class TokenKind(Enum):
    # Keywords
    PARAMETER = auto()
    LABEL = auto()
    INTEGER = auto()
    FLOAT = auto()
    TEXT = auto()
    FILE = auto()
    DEFAULT = auto()
    RANGE = auto()
    FROM = auto()
    TO = auto()
    STEP = auto()
    POINTS = auto()
    SELECT = auto()
    ANYOF = auto()
    ONEOF = auto()
    RANDOM = auto()
    COMPUTE = auto()
    JITP = auto()
    TASK = auto()
    ENDTASK = auto()
    # Literals and names
    ID = auto()
    QUOTE = auto()
    NUM = auto()
    # Punctuation and operators
    SEMI = auto()
    LPAREN = auto()
    RPAREN = auto()
    PLUS = auto()
    MINUS = auto()
    TIMES = auto()
    # Structure
    NEWLINE = auto()
    RAWLINE = auto()
    EOF = auto()
    # Trivia (only present in scan_all output)
    WHITESPACE = auto()
    COMMENT = auto()


KEYWORDS: dict[str, TokenKind] = {
    "parameter": TokenKind.PARAMETER,
    "label": TokenKind.LABEL,
    "integer": TokenKind.INTEGER,
    "float": TokenKind.FLOAT,
    "text": TokenKind.TEXT,
    "file": TokenKind.FILE,
    "default": TokenKind.DEFAULT,
    "range": TokenKind.RANGE,
    "from": TokenKind.FROM,
    "to": TokenKind.TO,
    "step": TokenKind.STEP,
    "points": TokenKind.POINTS,
    "select": TokenKind.SELECT,
    "anyof": TokenKind.ANYOF,
    "oneof": TokenKind.ONEOF,
    "random": TokenKind.RANDOM,
    "compute": TokenKind.COMPUTE,
    "jitp": TokenKind.JITP,
    "task": TokenKind.TASK,
    "endtask": TokenKind.ENDTASK,
}

_PUNCT: dict[str, TokenKind] = {
    ";": TokenKind.SEMI,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "+": TokenKind.PLUS,
    "-": TokenKind.MINUS,
    "*": TokenKind.TIMES,
}

_TRIVIA = frozenset({TokenKind.WHITESPACE, TokenKind.COMMENT})
_HSPACE = " \t\r"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    span: Span

    def __repr__(self) -> str:
        return f"Token({self.kind.name}, {self.lexeme!r}, {self.span.start}..{self.span.end})"


def is_ident_start(ch: str) -> bool:
    return ch.isascii() and (ch.isalpha() or ch == "_")


def is_ident_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


def is_identifier(text: str) -> bool:
    return (
        len(text) > 0
        and is_ident_start(text[0])
        and all(is_ident_char(c) for c in text)
    )


def decode_quote(lexeme: str) -> str:
    """Decode a QUOTE lexeme (including its surrounding quotes)."""
    body = lexeme[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body) and body[i + 1] in ('"', "\\"):
            out.append(body[i + 1])
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _utf8_len(ch: str) -> int:
    o = ord(ch)
    if o < 0x80:
        return 1
    if o < 0x800:
        return 2
    if o < 0x10000:
        return 3
    return 4


class _Scanner:
    """One pass over the source; tracks the task-block raw mode."""

    def __init__(self, source: str):
        self.src = source
        self.n = len(source)
        self.i = 0
        self.tokens: list[Token] = []
        self.diags: list[Diagnostic] = []
        # Prefix table: byte offset of each character index.
        ofs = [0] * (self.n + 1)
        total = 0
        for idx, ch in enumerate(source):
            total += _utf8_len(ch)
            ofs[idx + 1] = total
        self.bofs = ofs
        self.raw_mode = False
        # 0 = nothing, 1 = saw `task`, 2 = saw `task <name>` (raw after newline)
        self.header = 0

    def span(self, a: int, b: int) -> Span:
        return Span(self.bofs[a], self.bofs[b])

    def emit(self, kind: TokenKind, a: int, b: int) -> None:
        self.tokens.append(Token(kind, self.src[a:b], self.span(a, b)))
        if kind in _TRIVIA:
            return
        if kind is TokenKind.NEWLINE:
            if self.header == 2:
                self.raw_mode = True
                self.header = 0
            return
        if kind is TokenKind.TASK:
            self.header = 1
        elif self.header == 1:
            self.header = 2 if kind is TokenKind.ID else 0
        elif self.header == 2:
            self.header = 0

    def scan(self) -> None:
        while self.i < self.n:
            if self.raw_mode:
                self._raw_line()
            else:
                self._normal_token()

    # ── Raw mode: one command line per token ───────────────────────────

    def _raw_line(self) -> None:
        src, n = self.src, self.n
        start = self.i
        while self.i < n and src[self.i] in _HSPACE:
            self.i += 1
        if self.i > start:
            self.emit(TokenKind.WHITESPACE, start, self.i)
        if self.i >= n:
            return
        ch = src[self.i]
        if ch == "\n":
            self.emit(TokenKind.NEWLINE, self.i, self.i + 1)
            self.i += 1
            return
        if ch == "#":
            start = self.i
            while self.i < n and src[self.i] != "\n":
                self.i += 1
            self.emit(TokenKind.COMMENT, start, self.i)
            return
        if src.startswith("endtask", self.i) and (
            self.i + 7 >= n or not is_ident_char(src[self.i + 7])
        ):
            self.emit(TokenKind.ENDTASK, self.i, self.i + 7)
            self.i += 7
            self.raw_mode = False
            return
        eol = src.find("\n", self.i)
        if eol < 0:
            eol = n
        end = eol
        while end > self.i and src[end - 1] in _HSPACE:
            end -= 1
        self.emit(TokenKind.RAWLINE, self.i, end)
        if end < eol:
            self.emit(TokenKind.WHITESPACE, end, eol)
        self.i = eol

    # ── Normal mode ────────────────────────────────────────────────────

    def _normal_token(self) -> None:
        src, n = self.src, self.n
        ch = src[self.i]
        if ch == "\n":
            self.emit(TokenKind.NEWLINE, self.i, self.i + 1)
            self.i += 1
        elif ch in _HSPACE:
            start = self.i
            while self.i < n and src[self.i] in _HSPACE:
                self.i += 1
            self.emit(TokenKind.WHITESPACE, start, self.i)
        elif ch == "#":
            start = self.i
            while self.i < n and src[self.i] != "\n":
                self.i += 1
            self.emit(TokenKind.COMMENT, start, self.i)
        elif ch == '"':
            self._string()
        elif ch.isdigit() or (ch == "." and self.i + 1 < n and src[self.i + 1].isdigit()):
            self._number()
        elif is_ident_start(ch):
            start = self.i
            while self.i < n and is_ident_char(src[self.i]):
                self.i += 1
            word = src[start : self.i]
            self.emit(KEYWORDS.get(word, TokenKind.ID), start, self.i)
        elif ch in _PUNCT:
            self.emit(_PUNCT[ch], self.i, self.i + 1)
            self.i += 1
        else:
            self.diags.append(
                error(E_LEX, f"illegal character {ch!r}", self.span(self.i, self.i + 1))
            )
            self.i += 1

    def _string(self) -> None:
        src, n = self.src, self.n
        start = self.i
        self.i += 1
        while self.i < n:
            ch = src[self.i]
            if ch == "\n":
                break
            if ch == "\\" and self.i + 1 < n and src[self.i + 1] in ('"', "\\"):
                self.i += 2
                continue
            self.i += 1
            if ch == '"':
                self.emit(TokenKind.QUOTE, start, self.i)
                return
        # Ran to end of line / end of input without a closing quote; the
        # consumed bytes are covered by the diagnostic span.
        self.diags.append(
            error(E_LEX, "unterminated quoted string", self.span(start, self.i))
        )

    def _number(self) -> None:
        src, n = self.src, self.n
        start = self.i
        while self.i < n and src[self.i].isdigit():
            self.i += 1
        if self.i < n and src[self.i] == ".":
            self.i += 1
            while self.i < n and src[self.i].isdigit():
                self.i += 1
        if (
            self.i < n
            and src[self.i] in "eE"
        ):
            j = self.i + 1
            if j < n and src[j] in "+-":
                j += 1
            if j < n and src[j].isdigit():
                self.i = j
                while self.i < n and src[self.i].isdigit():
                    self.i += 1
        self.emit(TokenKind.NUM, start, self.i)


def scan_all(source: str) -> tuple[list[Token], list[Diagnostic]]:
    """Scan including trivia tokens; token + diagnostic spans tile the input."""
    s = _Scanner(source)
    s.scan()
    return s.tokens, s.diags


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    """Scan for parsing: trivia dropped, zero-width EOF token appended."""
    tokens, diags = scan_all(source)
    out = [t for t in tokens if t.kind not in _TRIVIA]
    nbytes = len(source.encode("utf-8"))
    out.append(Token(TokenKind.EOF, "", Span(nbytes, nbytes)))
    return out, diags
