"""Recursive-descent parser for the plan language.

Statements are `parameter … ;` lines and `task <name> … endtask` blocks.
Parse errors use panic-mode recovery: the parser resynchronizes at the next
`;` or `endtask`, so several statements can be diagnosed in one run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .ast_nodes import (
    Add,
    Compute,
    Copy,
    Default,
    Domain,
    Execute,
    Expr,
    Jitp,
    Location,
    Mul,
    Num,
    Origin,
    ParamDef,
    ParamType,
    Plan,
    Points,
    Random,
    Range,
    Scope,
    SelectAny,
    SelectOne,
    Step,
    Sub,
    Substitute,
    TaskDef,
)
from .diagnostics import (
    E_DUP_PARAM,
    E_DUP_TASK,
    E_PARSE,
    Diagnostic,
    DiagnosticError,
    Span,
    error,
    has_errors,
)
from .lexer import Token, TokenKind, decode_quote, tokenize
from .values import INT64_MAX, INT64_MIN, FileVal, IntVal, RealVal, TextVal, Value

_TYPE_KINDS = {
    TokenKind.INTEGER: ParamType.INTEGER,
    TokenKind.FLOAT: ParamType.FLOAT,
    TokenKind.TEXT: ParamType.TEXT,
    TokenKind.FILE: ParamType.FILE,
}

_VALUE_START = {
    TokenKind.NUM,
    TokenKind.QUOTE,
    TokenKind.ID,
    TokenKind.PLUS,
    TokenKind.MINUS,
}


@dataclass
class ParseResult:
    """Outcome of parse_plan: a (possibly partial) plan plus diagnostics."""

    plan: Plan
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not has_errors(self.diagnostics)


def describe_token(tok: Token) -> str:
    if tok.kind is TokenKind.EOF:
        return "end of input"
    if tok.kind is TokenKind.NEWLINE:
        return "end of line"
    if tok.kind is TokenKind.ID:
        return f"identifier '{tok.lexeme}'"
    if tok.kind is TokenKind.NUM:
        return f"number '{tok.lexeme}'"
    if tok.kind is TokenKind.QUOTE:
        return "quoted string"
    return f"'{tok.lexeme}'"


class _Abort(Exception):
    """Statement-level bail-out; recovery happens in the statement loop."""


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0
        self.diags: list[Diagnostic] = []
        # Line breaks are trivia in statements but delimit task blocks.
        self.newline_significant = False

    # ── Token plumbing ──────────────────────────────────────────────────

    def cur(self) -> Token:
        while (
            not self.newline_significant
            and self.toks[self.pos].kind is TokenKind.NEWLINE
        ):
            self.pos += 1
        return self.toks[self.pos]

    def at(self, kind: TokenKind) -> bool:
        return self.cur().kind is kind

    def advance(self) -> Token:
        tok = self.cur()
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def fail(self, message: str, span: Span) -> _Abort:
        self.diags.append(error(E_PARSE, message, span))
        return _Abort()

    def expect(self, kind: TokenKind, what: str) -> Token:
        if self.at(kind):
            return self.advance()
        tok = self.cur()
        raise self.fail(f"expected {what}, found {describe_token(tok)}", tok.span)

    def recover(self) -> None:
        """Skip forward to just past the next `;` or `endtask`."""
        self.newline_significant = False
        while not self.at(TokenKind.EOF):
            tok = self.advance()
            if tok.kind in (TokenKind.SEMI, TokenKind.ENDTASK):
                return

    # ── Statements ──────────────────────────────────────────────────────

    def parse(self) -> Plan:
        params: list[ParamDef] = []
        tasks: list[TaskDef] = []
        seen_params: set[str] = set()
        seen_tasks: set[str] = set()
        while True:
            if self.at(TokenKind.EOF):
                break
            try:
                if self.at(TokenKind.PARAMETER):
                    param, name_span = self.plan_step()
                    if param.name in seen_params:
                        self.diags.append(
                            error(
                                E_DUP_PARAM,
                                f"duplicate parameter name '{param.name}'",
                                name_span,
                            )
                        )
                    else:
                        seen_params.add(param.name)
                        params.append(param)
                elif self.at(TokenKind.TASK):
                    task, name_span = self.task_block()
                    if task.name in seen_tasks:
                        self.diags.append(
                            error(
                                E_DUP_TASK,
                                f"duplicate task name '{task.name}'",
                                name_span,
                            )
                        )
                    else:
                        seen_tasks.add(task.name)
                        tasks.append(task)
                else:
                    tok = self.cur()
                    raise self.fail(
                        f"expected 'parameter' or 'task', found {describe_token(tok)}",
                        tok.span,
                    )
            except _Abort:
                self.recover()
        return Plan(tuple(params), tuple(tasks))

    def plan_step(self) -> tuple[ParamDef, Span]:
        kw = self.expect(TokenKind.PARAMETER, "'parameter'")
        name_tok = self.expect(TokenKind.ID, "parameter name")
        label: str | None = None
        if self.at(TokenKind.LABEL):
            self.advance()
            label = decode_quote(self.expect(TokenKind.QUOTE, "quoted label").lexeme)
        tok = self.cur()
        ptype = _TYPE_KINDS.get(tok.kind)
        if ptype is None:
            raise self.fail(
                "expected parameter type (integer, float, text or file), "
                f"found {describe_token(tok)}",
                tok.span,
            )
        self.advance()
        domain = self.parse_domain(ptype)
        semi = self.expect(TokenKind.SEMI, "';'")
        param = ParamDef(
            name=name_tok.lexeme,
            ptype=ptype,
            domain=domain,
            label=label,
            origin=Origin.IMPORTED,
            span=Span(kw.span.start, semi.span.end),
        )
        return param, name_tok.span

    # ── Values and domains ──────────────────────────────────────────────

    def parse_value(self, ptype: ParamType) -> Value:
        tok = self.cur()
        if tok.kind in (TokenKind.PLUS, TokenKind.MINUS):
            sign = -1 if tok.kind is TokenKind.MINUS else 1
            self.advance()
            num = self.expect(TokenKind.NUM, "number after sign")
            return self.number_value(num, sign)
        if tok.kind is TokenKind.NUM:
            self.advance()
            return self.number_value(tok, 1)
        if tok.kind is TokenKind.QUOTE:
            self.advance()
            text = decode_quote(tok.lexeme)
            return FileVal(text) if ptype is ParamType.FILE else TextVal(text)
        if tok.kind is TokenKind.ID:
            self.advance()
            word = tok.lexeme
            return FileVal(word) if ptype is ParamType.FILE else TextVal(word)
        raise self.fail(f"expected a value, found {describe_token(tok)}", tok.span)

    def number_value(self, tok: Token, sign: int) -> Value:
        text = tok.lexeme
        if all(c.isdigit() for c in text):
            n = sign * int(text)
            if not (INT64_MIN <= n <= INT64_MAX):
                raise self.fail("integer literal out of 64-bit range", tok.span)
            return IntVal(n)
        x = sign * float(text)
        if x in (float("inf"), float("-inf")):
            raise self.fail("numeric literal out of range", tok.span)
        return RealVal(x)

    def parse_values(self, ptype: ParamType) -> list[Value]:
        values = [self.parse_value(ptype)]
        while self.cur().kind in _VALUE_START:
            values.append(self.parse_value(ptype))
        return values

    def parse_domain(self, ptype: ParamType) -> Domain:
        tok = self.cur()
        if tok.kind is TokenKind.DEFAULT:
            self.advance()
            return Default(self.parse_value(ptype))
        if tok.kind is TokenKind.RANGE:
            self.advance()
            self.expect(TokenKind.FROM, "'from'")
            start = self.parse_value(ptype)
            self.expect(TokenKind.TO, "'to'")
            stop = self.parse_value(ptype)
            refine = None
            if self.at(TokenKind.STEP):
                self.advance()
                refine = Step(self.parse_value(ptype))
            elif self.at(TokenKind.POINTS):
                self.advance()
                refine = Points(self.parse_value(ptype))
            return Range(start, stop, refine)
        if tok.kind is TokenKind.SELECT:
            self.advance()
            if self.at(TokenKind.ANYOF):
                self.advance()
                values = self.parse_values(ptype)
                defaults: list[Value] = []
                if self.at(TokenKind.DEFAULT):
                    self.advance()
                    defaults = self.parse_values(ptype)
                return SelectAny(tuple(values), tuple(defaults))
            if self.at(TokenKind.ONEOF):
                self.advance()
                values = self.parse_values(ptype)
                default = None
                if self.at(TokenKind.DEFAULT):
                    self.advance()
                    default = self.parse_value(ptype)
                return SelectOne(tuple(values), default)
            bad = self.cur()
            raise self.fail(
                f"expected 'anyof' or 'oneof' after 'select', found {describe_token(bad)}",
                bad.span,
            )
        if tok.kind is TokenKind.RANDOM:
            self.advance()
            self.expect(TokenKind.FROM, "'from'")
            start = self.parse_value(ptype)
            self.expect(TokenKind.TO, "'to'")
            stop = self.parse_value(ptype)
            points = None
            if self.at(TokenKind.POINTS):
                self.advance()
                points = self.parse_value(ptype)
            return Random(start, stop, points)
        if tok.kind is TokenKind.COMPUTE:
            self.advance()
            return Compute(self.parse_expr())
        if tok.kind is TokenKind.JITP:
            self.advance()
            raw = decode_quote(self.expect(TokenKind.QUOTE, "quoted jitp expression").lexeme)
            return Jitp(raw)
        raise self.fail(
            "expected a domain (default, range, select, random, compute or jitp), "
            f"found {describe_token(tok)}",
            tok.span,
        )

    # ── Expressions ─────────────────────────────────────────────────────

    def parse_expr(self) -> Expr:
        left = self.parse_term()
        while self.cur().kind in (TokenKind.PLUS, TokenKind.MINUS):
            op = self.advance()
            right = self.parse_term()
            left = Add(left, right) if op.kind is TokenKind.PLUS else Sub(left, right)
        return left

    def parse_term(self) -> Expr:
        left = self.parse_factor()
        while self.at(TokenKind.TIMES):
            self.advance()
            left = Mul(left, self.parse_factor())
        return left

    def parse_factor(self) -> Expr:
        tok = self.cur()
        if tok.kind is TokenKind.LPAREN:
            self.advance()
            inner = self.parse_expr()
            self.expect(TokenKind.RPAREN, "')'")
            return inner
        sign = 1.0
        if tok.kind in (TokenKind.PLUS, TokenKind.MINUS):
            sign = -1.0 if tok.kind is TokenKind.MINUS else 1.0
            self.advance()
        num = self.expect(TokenKind.NUM, "a number or '('")
        x = sign * float(num.lexeme)
        if x in (float("inf"), float("-inf")):
            raise self.fail("numeric literal out of range", num.span)
        return Num(x)

    # ── Task blocks ─────────────────────────────────────────────────────

    def task_block(self) -> tuple[TaskDef, Span]:
        kw = self.expect(TokenKind.TASK, "'task'")
        name_tok = self.expect(TokenKind.ID, "task name")
        self.newline_significant = True
        self.expect(TokenKind.NEWLINE, "end of line after task header")
        commands = []
        while True:
            if self.at(TokenKind.NEWLINE):
                self.advance()
            elif self.at(TokenKind.RAWLINE):
                line = self.advance()
                cmd = self.parse_command(line)
                if cmd is not None:
                    commands.append(cmd)
            elif self.at(TokenKind.ENDTASK):
                end = self.advance()
                self.newline_significant = False
                break
            elif self.at(TokenKind.EOF):
                raise self.fail(
                    f"missing 'endtask' for task '{name_tok.lexeme}'",
                    self.cur().span,
                )
            else:
                tok = self.cur()
                raise self.fail(
                    f"unexpected {describe_token(tok)} inside task block", tok.span
                )
        task = TaskDef(
            name=name_tok.lexeme,
            commands=tuple(commands),
            span=Span(kw.span.start, end.span.end),
        )
        return task, name_tok.span

    def parse_command(self, tok: Token):
        """Parse one raw command line; on error, diagnose and return None."""
        text = tok.lexeme
        split = text.split(None, 1)
        word = split[0]
        rest = split[1] if len(split) > 1 else ""
        word_span = _sub_span(tok, text, 0, len(word))
        if word in ("execute", "node:execute"):
            command = rest.strip()
            if not command:
                self.diags.append(
                    error(E_PARSE, f"'{word}' requires a command line", word_span)
                )
                return None
            return Execute(command, on_node=(word == "node:execute"))
        if word in ("copy", "substitute"):
            try:
                args = _split_args(rest)
            except ValueError as exc:
                self.diags.append(error(E_PARSE, str(exc), tok.span))
                return None
            if len(args) != 2:
                self.diags.append(
                    error(E_PARSE, f"'{word}' takes exactly two paths", tok.span)
                )
                return None
            if word == "copy":
                try:
                    return Copy(parse_location(args[0]), parse_location(args[1]))
                except ValueError as exc:
                    self.diags.append(error(E_PARSE, str(exc), tok.span))
                    return None
            if not args[0] or not args[1]:
                self.diags.append(error(E_PARSE, "empty path", tok.span))
                return None
            return Substitute(args[0], args[1])
        self.diags.append(
            error(E_PARSE, f"unknown task command '{word}'", word_span)
        )
        return None


def _sub_span(tok: Token, text: str, a: int, b: int) -> Span:
    """Byte span of text[a:b] within a RAWLINE token."""
    base = tok.span.start
    pre = len(text[:a].encode("utf-8"))
    body = len(text[a:b].encode("utf-8"))
    return Span(base + pre, base + pre + body)


def _split_args(text: str) -> list[str]:
    """Split path arguments on whitespace; double quotes group and escape."""
    args: list[str] = []
    i, n = 0, len(text)
    while i < n:
        if text[i] in " \t":
            i += 1
            continue
        if text[i] == '"':
            buf = []
            i += 1
            while i < n and text[i] != '"':
                if text[i] == "\\" and i + 1 < n and text[i + 1] in ('"', "\\"):
                    buf.append(text[i + 1])
                    i += 2
                else:
                    buf.append(text[i])
                    i += 1
            if i >= n:
                raise ValueError("unterminated quoted path")
            i += 1
            args.append("".join(buf))
        else:
            j = i
            while j < n and text[j] not in " \t":
                j += 1
            args.append(text[i:j])
            i = j
    return args


def parse_location(text: str) -> Location:
    """Split an optional root:/node: prefix off a task path."""
    if text.startswith("root:"):
        scope, path = Scope.ROOT, text[5:]
    elif text.startswith("node:"):
        scope, path = Scope.NODE, text[5:]
    else:
        scope, path = Scope.LOCAL, text
    if not path:
        raise ValueError(f"empty path in location '{text}'")
    return Location(scope, path)


def parse_plan(source: str) -> ParseResult:
    """Parse plan text into a Plan; diagnostics cover lexing and parsing.

    The returned plan is partial when errors occurred; `ok` is True only
    for a clean parse.
    """
    tokens, lex_diags = tokenize(source)
    parser = _Parser(tokens)
    plan = parser.parse()
    diags = lex_diags + parser.diags
    diags.sort(key=lambda d: d.span.start if d.span else 1 << 62)
    return ParseResult(plan=plan, diagnostics=diags)


def parse_expr_text(source: str) -> Expr:
    """Parse a bare arithmetic expression (the `compute` dialog payload)."""
    tokens, lex_diags = tokenize(source)
    if has_errors(lex_diags):
        raise DiagnosticError(lex_diags)
    parser = _Parser(tokens)
    try:
        expr = parser.parse_expr()
        if not parser.at(TokenKind.EOF):
            tok = parser.cur()
            parser.fail(
                f"unexpected {describe_token(tok)} after expression", tok.span
            )
            raise _Abort()
    except _Abort:
        raise DiagnosticError(parser.diags) from None
    return expr
