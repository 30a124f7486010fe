"""Canonical plan formatter.

Printing is the inverse of parsing up to layout: parse-print-parse yields
the same tree, and print-parse-print yields the same bytes.  Expressions
are printed with minimal parentheses; a right operand at the same
precedence level keeps its parentheses so the tree shape survives.
"""

from __future__ import annotations

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
from .values import plan_literal, quote, shortest_real

_PTYPE_WORD = {t: t.name.lower() for t in ParamType}


def _precedence(expr: Expr) -> int:
    if isinstance(expr, (Add, Sub)):
        return 1
    if isinstance(expr, Mul):
        return 2
    return 3


def print_expr(expr: Expr) -> str:
    if isinstance(expr, Num):
        return shortest_real(expr.value)
    if isinstance(expr, Add):
        op = "+"
    elif isinstance(expr, Sub):
        op = "-"
    else:
        op = "*"
    level = _precedence(expr)
    left = print_expr(expr.left)
    if _precedence(expr.left) < level:
        left = f"({left})"
    right = print_expr(expr.right)
    if _precedence(expr.right) <= level and not isinstance(expr.right, Num):
        right = f"({right})"
    return f"{left}{op}{right}"


def _values(values) -> str:
    return " ".join(plan_literal(v) for v in values)


def _domain(domain: Domain) -> str:
    if isinstance(domain, Default):
        return f"default {plan_literal(domain.value)}"
    if isinstance(domain, Range):
        out = f"range from {plan_literal(domain.start)} to {plan_literal(domain.stop)}"
        if isinstance(domain.refine, Step):
            out += f" step {plan_literal(domain.refine.value)}"
        elif isinstance(domain.refine, Points):
            out += f" points {plan_literal(domain.refine.value)}"
        return out
    if isinstance(domain, SelectAny):
        out = f"select anyof {_values(domain.values)}"
        if domain.defaults:
            out += f" default {_values(domain.defaults)}"
        return out
    if isinstance(domain, SelectOne):
        out = f"select oneof {_values(domain.values)}"
        if domain.default is not None:
            out += f" default {plan_literal(domain.default)}"
        return out
    if isinstance(domain, Random):
        out = f"random from {plan_literal(domain.start)} to {plan_literal(domain.stop)}"
        if domain.points is not None:
            out += f" points {plan_literal(domain.points)}"
        return out
    if isinstance(domain, Compute):
        return f"compute {print_expr(domain.expr)}"
    if isinstance(domain, Jitp):
        return f"jitp {quote(domain.raw)}"
    raise TypeError(f"unknown domain {domain!r}")


def _param(param: ParamDef) -> str:
    out = f"parameter {param.name}"
    if param.label is not None:
        out += f" label {quote(param.label)}"
    out += f" {_PTYPE_WORD[param.ptype]} {_domain(param.domain)};"
    return out


def _path(text: str) -> str:
    if any(c in ' \t"\\' for c in text):
        return quote(text)
    return text


def _location(loc: Location) -> str:
    if loc.scope is Scope.ROOT:
        full = f"root:{loc.path}"
    elif loc.scope is Scope.NODE:
        full = f"node:{loc.path}"
    else:
        full = loc.path
    return _path(full)


def _command(cmd) -> str:
    if isinstance(cmd, Copy):
        return f"copy {_location(cmd.src)} {_location(cmd.dst)}"
    if isinstance(cmd, Substitute):
        return f"substitute {_path(cmd.skeleton)} {_path(cmd.output)}"
    if isinstance(cmd, Execute):
        word = "node:execute" if cmd.on_node else "execute"
        return f"{word} {cmd.command_line}"
    raise TypeError(f"unknown task command {cmd!r}")


def _task(task: TaskDef) -> str:
    lines = [f"task {task.name}"]
    lines.extend(f"    {_command(cmd)}" for cmd in task.commands)
    lines.append("endtask")
    return "\n".join(lines)


def print_plan(plan: Plan) -> str:
    """Render a plan as canonical text, one statement per line."""
    parts = [_param(p) for p in plan.params]
    parts.extend(_task(t) for t in plan.tasks)
    if not parts:
        return ""
    return "\n".join(parts) + "\n"
