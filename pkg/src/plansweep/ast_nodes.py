"""AST for the plan language: expressions, domains, parameters, tasks, plans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .diagnostics import E_OVERFLOW, DiagnosticError, Span, error
from .values import Value

# ── Arithmetic expressions (the `compute` domain) ───────────────────────────


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


Expr = Union[Num, Add, Sub, Mul]


def eval_expr(expr: Expr) -> float:
    """Evaluate an expression tree; multiplication binds tighter than +/-.

    Precedence and associativity are already encoded in the tree shape, so
    evaluation is a plain post-order fold.  Raises on a non-finite result.
    """
    if isinstance(expr, Num):
        result = expr.value
    elif isinstance(expr, Add):
        result = eval_expr(expr.left) + eval_expr(expr.right)
    elif isinstance(expr, Sub):
        result = eval_expr(expr.left) - eval_expr(expr.right)
    elif isinstance(expr, Mul):
        result = eval_expr(expr.left) * eval_expr(expr.right)
    else:
        raise TypeError(f"not an expression node: {expr!r}")
    if not math.isfinite(result):
        raise DiagnosticError(error(E_OVERFLOW, "expression result is not finite"))
    return result


# ── Parameter domains ───────────────────────────────────────────────────────


@dataclass(frozen=True)
class Step:
    value: Value


@dataclass(frozen=True)
class Points:
    value: Value


Refine = Union[Step, Points, None]


@dataclass(frozen=True)
class Default:
    value: Value


@dataclass(frozen=True)
class Range:
    start: Value
    stop: Value
    refine: Refine = None


@dataclass(frozen=True)
class SelectAny:
    values: tuple[Value, ...]
    defaults: tuple[Value, ...] = ()


@dataclass(frozen=True)
class SelectOne:
    values: tuple[Value, ...]
    default: Value | None = None


@dataclass(frozen=True)
class Random:
    start: Value
    stop: Value
    points: Value | None = None


@dataclass(frozen=True)
class Compute:
    expr: Expr


@dataclass(frozen=True)
class Jitp:
    raw: str


Domain = Union[Default, Range, SelectAny, SelectOne, Random, Compute, Jitp]


# ── Parameters, tasks, plans ────────────────────────────────────────────────


class ParamType(Enum):
    INTEGER = "integer"
    FLOAT = "float"
    TEXT = "text"
    FILE = "file"


class Origin(Enum):
    """How a parameter came to exist in a project."""

    FILE_DEPENDENT = "file_dependent"
    FILE_INDEPENDENT = "file_independent"
    IMPORTED = "imported"


@dataclass(frozen=True)
class ParamDef:
    name: str
    ptype: ParamType
    domain: Domain
    label: str | None = None
    # Provenance and source position are metadata: excluded from structural
    # equality so round-tripping through canonical text compares clean.
    origin: Origin = field(default=Origin.IMPORTED, compare=False)
    span: Span | None = field(default=None, compare=False)


class Scope(Enum):
    """Where a task path resolves: shared staging, the node's shared
    directory, or the directory the current phase runs in."""

    ROOT = "root"
    NODE = "node"
    LOCAL = "local"


@dataclass(frozen=True)
class Location:
    scope: Scope
    path: str


@dataclass(frozen=True)
class Copy:
    src: Location
    dst: Location


@dataclass(frozen=True)
class Execute:
    command_line: str
    on_node: bool = False


@dataclass(frozen=True)
class Substitute:
    skeleton: str
    output: str


TaskCommand = Union[Copy, Execute, Substitute]


@dataclass(frozen=True)
class TaskDef:
    name: str
    commands: tuple[TaskCommand, ...] = ()
    span: Span | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Plan:
    params: tuple[ParamDef, ...] = ()
    tasks: tuple[TaskDef, ...] = ()

    def find_param(self, name: str) -> ParamDef | None:
        for p in self.params:
            if p.name == name:
                return p
        return None

    def find_task(self, name: str) -> TaskDef | None:
        for t in self.tasks:
            if t.name == name:
                return t
        return None
