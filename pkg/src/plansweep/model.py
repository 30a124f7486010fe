"""Semantic checks and domain expansion.

A validated parameter expands into an axis: the ordered tuple of values it
contributes to the sweep.  Random domains draw from one shared
deterministic generator, in declaration order, so a seed fixes the whole
expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ast_nodes import (
    Compute,
    Default,
    Jitp,
    ParamDef,
    ParamType,
    Plan,
    Points,
    Random,
    Range,
    SelectAny,
    SelectOne,
    Step,
    eval_expr,
)
from .diagnostics import (
    E_BAD_DEFAULT,
    E_BAD_POINTS,
    E_BAD_STEP,
    E_EMPTY_RANGE,
    E_EMPTY_SELECT,
    E_NO_SELECTION,
    E_OVERFLOW,
    E_TYPE,
    W_DUP_VALUE,
    Diagnostic,
    DiagnosticError,
    error,
    has_errors,
    warning,
)
from .values import (
    INT64_MAX,
    FileVal,
    IntVal,
    RealVal,
    TextVal,
    Value,
    is_numeric,
    numeric_value,
    values_equivalent,
)

# ── Deterministic generator ─────────────────────────────────────────────
#
# xorshift64* with a fixed odd multiplier.  The seed is whitened by xor
# with the golden-ratio constant; an all-zero state (which xorshift cannot
# leave) falls back to the constant itself.

_MASK = (1 << 64) - 1
_WHITEN = 0x9E3779B97F4A7C15
_MULT = 2685821657736338717


class Prng:
    """Seeded xorshift64* stream yielding doubles in [0, 1)."""

    def __init__(self, seed: int):
        state = (seed ^ _WHITEN) & _MASK
        self.state = state if state != 0 else _WHITEN

    def next_unit(self) -> float:
        s = self.state
        s ^= s >> 12
        s = (s ^ (s << 25)) & _MASK
        s ^= s >> 27
        self.state = s
        out = ((s * _MULT) & _MASK) >> 11
        return out / 9007199254740992.0  # 2**53

    def next_int(self, lo: int, hi: int) -> int:
        u = self.next_unit()
        return min(hi, lo + math.floor(u * (hi - lo + 1)))

    def next_float(self, lo: float, hi: float) -> float:
        return lo + self.next_unit() * (hi - lo)


# ── Axes ────────────────────────────────────────────────────────────────


@dataclass(frozen=True)
class Axis:
    """One parameter's contribution to the sweep: its expanded values."""

    name: str
    ptype: ParamType
    values: tuple[Value, ...]

    @property
    def cardinality(self) -> int:
        return len(self.values)

    @property
    def swept(self) -> bool:
        return len(self.values) > 1


# ── Validation ──────────────────────────────────────────────────────────

_NUMERIC_TYPES = (ParamType.INTEGER, ParamType.FLOAT)


def _check_value(
    param: ParamDef, v: Value, what: str, diags: list[Diagnostic]
) -> bool:
    if param.ptype is ParamType.INTEGER:
        if isinstance(v, IntVal):
            return True
        kind = "a float" if isinstance(v, RealVal) else "a non-numeric value"
        diags.append(
            error(
                E_TYPE,
                f"integer parameter '{param.name}' has {kind} as {what}",
                param.span,
            )
        )
        return False
    if param.ptype is ParamType.FLOAT:
        if is_numeric(v):
            return True
        diags.append(
            error(
                E_TYPE,
                f"float parameter '{param.name}' has a non-numeric {what}",
                param.span,
            )
        )
        return False
    want = TextVal if param.ptype is ParamType.TEXT else FileVal
    if isinstance(v, want):
        return True
    diags.append(
        error(
            E_TYPE,
            f"{param.ptype.name.lower()} parameter '{param.name}' has an "
            f"incompatible {what}",
            param.span,
        )
    )
    return False


def _positive_int(param: ParamDef, v: Value, what: str, diags) -> int | None:
    if not isinstance(v, IntVal):
        diags.append(
            error(E_TYPE, f"{what} of '{param.name}' must be an integer", param.span)
        )
        return None
    if v.value < 1:
        code = E_BAD_POINTS if what == "points" else E_BAD_STEP
        diags.append(
            error(code, f"{what} of '{param.name}' must be positive", param.span)
        )
        return None
    return v.value


def _validate_range(param: ParamDef, dom: Range, diags: list[Diagnostic]) -> None:
    if param.ptype not in _NUMERIC_TYPES:
        diags.append(
            error(
                E_TYPE,
                f"range domain needs a numeric type, but '{param.name}' is "
                f"{param.ptype.name.lower()}",
                param.span,
            )
        )
        return
    ok = _check_value(param, dom.start, "range start", diags)
    ok = _check_value(param, dom.stop, "range end", diags) and ok
    if not ok:
        return
    lo, hi = numeric_value(dom.start), numeric_value(dom.stop)
    if lo > hi:
        diags.append(
            error(E_EMPTY_RANGE, f"range of '{param.name}' is empty", param.span)
        )
        return
    if isinstance(dom.refine, Step):
        if param.ptype is ParamType.INTEGER:
            _positive_int(param, dom.refine.value, "step", diags)
        else:
            if not _check_value(param, dom.refine.value, "step", diags):
                return
            if numeric_value(dom.refine.value) <= 0:
                diags.append(
                    error(E_BAD_STEP, f"step of '{param.name}' must be positive", param.span)
                )
    elif isinstance(dom.refine, Points):
        n = _positive_int(param, dom.refine.value, "points", diags)
        if n is None:
            return
        if n == 1 and lo != hi:
            diags.append(
                error(
                    E_BAD_POINTS,
                    f"'{param.name}' needs at least 2 points to span its range",
                    param.span,
                )
            )
        elif param.ptype is ParamType.INTEGER and n > 1:
            if lo == hi:
                diags.append(
                    error(
                        E_BAD_POINTS,
                        f"points on '{param.name}' would repeat a single value",
                        param.span,
                    )
                )
            elif (hi - lo) % (n - 1) != 0:
                diags.append(
                    error(
                        E_BAD_POINTS,
                        f"points of '{param.name}' does not divide the integer "
                        "range evenly",
                        param.span,
                    )
                )
    elif param.ptype is ParamType.FLOAT:
        diags.append(
            error(
                E_BAD_STEP,
                f"float range of '{param.name}' needs a step or points refinement",
                param.span,
            )
        )


def _validate_select(param: ParamDef, values, diags: list[Diagnostic]) -> None:
    if not values:
        diags.append(
            error(E_EMPTY_SELECT, f"'{param.name}' has no values to select from", param.span)
        )
        return
    for v in values:
        _check_value(param, v, "select value", diags)
    for i in range(len(values)):
        if any(values_equivalent(values[i], values[j]) for j in range(i)):
            diags.append(
                warning(
                    W_DUP_VALUE,
                    f"duplicate select value in '{param.name}'",
                    param.span,
                )
            )
            break


def _validate_param(param: ParamDef, diags: list[Diagnostic]) -> None:
    dom = param.domain
    if isinstance(dom, Default):
        _check_value(param, dom.value, "default", diags)
    elif isinstance(dom, Range):
        _validate_range(param, dom, diags)
    elif isinstance(dom, SelectAny):
        _validate_select(param, dom.values, diags)
        for v in dom.defaults:
            if not any(values_equivalent(v, w) for w in dom.values):
                diags.append(
                    error(
                        E_BAD_DEFAULT,
                        f"selection of '{param.name}' is not among its values",
                        param.span,
                    )
                )
    elif isinstance(dom, SelectOne):
        _validate_select(param, dom.values, diags)
        if dom.default is not None and not any(
            values_equivalent(dom.default, w) for w in dom.values
        ):
            diags.append(
                error(
                    E_BAD_DEFAULT,
                    f"selection of '{param.name}' is not among its values",
                    param.span,
                )
            )
    elif isinstance(dom, Random):
        if param.ptype not in _NUMERIC_TYPES:
            diags.append(
                error(
                    E_TYPE,
                    f"random domain needs a numeric type, but '{param.name}' is "
                    f"{param.ptype.name.lower()}",
                    param.span,
                )
            )
            return
        ok = _check_value(param, dom.start, "range start", diags)
        ok = _check_value(param, dom.stop, "range end", diags) and ok
        if ok and numeric_value(dom.start) > numeric_value(dom.stop):
            diags.append(
                error(E_EMPTY_RANGE, f"range of '{param.name}' is empty", param.span)
            )
        if dom.points is not None:
            _positive_int(param, dom.points, "points", diags)
    elif isinstance(dom, Compute):
        if param.ptype not in _NUMERIC_TYPES:
            diags.append(
                error(
                    E_TYPE,
                    f"compute domain needs a numeric type, but '{param.name}' is "
                    f"{param.ptype.name.lower()}",
                    param.span,
                )
            )
            return
        try:
            x = eval_expr(dom.expr)
        except DiagnosticError:
            diags.append(
                error(E_OVERFLOW, f"compute expression of '{param.name}' overflows", param.span)
            )
            return
        if param.ptype is ParamType.INTEGER:
            if x != int(x):
                diags.append(
                    error(
                        E_TYPE,
                        f"compute result of integer parameter '{param.name}' is "
                        "not an integer",
                        param.span,
                    )
                )
            elif abs(x) > INT64_MAX:
                diags.append(
                    error(
                        E_OVERFLOW,
                        f"compute result of '{param.name}' exceeds 64-bit range",
                        param.span,
                    )
                )
    # Jitp expressions are opaque text for a downstream evaluator; nothing
    # to check here.


def validate_plan(plan: Plan) -> list[Diagnostic]:
    """Type and domain checks over an already-parsed plan."""
    diags: list[Diagnostic] = []
    for param in plan.params:
        _validate_param(param, diags)
    return diags


# ── Cardinality without materializing ───────────────────────────────────


def _float_step_count(lo: float, hi: float, step: float) -> int:
    count = max(1, math.floor((hi - lo) / step) + 1)
    while lo + (count - 1) * step > hi:
        count -= 1
    while lo + count * step <= hi:
        count += 1
    return count


def axis_cardinality(param: ParamDef) -> int:
    """Number of values the parameter expands to, computed in O(1).

    Assumes the plan validated cleanly; raises DiagnosticError for
    conditions that only surface at expansion time (missing selection,
    oversized axes).
    """
    dom = param.domain
    if isinstance(dom, (Default, Compute, Jitp)):
        return 1
    if isinstance(dom, Range):
        lo, hi = numeric_value(dom.start), numeric_value(dom.stop)
        if isinstance(dom.refine, Points):
            return dom.refine.value.value
        if param.ptype is ParamType.INTEGER:
            step = dom.refine.value.value if isinstance(dom.refine, Step) else 1
            count = (int(hi) - int(lo)) // step + 1
            if count > INT64_MAX:
                raise DiagnosticError(
                    [error(E_OVERFLOW, f"axis '{param.name}' exceeds 2^63-1 values", param.span)]
                )
            return count
        step = numeric_value(dom.refine.value)
        span = float(hi) - float(lo)
        if not math.isfinite(span) or span / step > INT64_MAX:
            raise DiagnosticError(
                [error(E_OVERFLOW, f"axis '{param.name}' exceeds 2^63-1 values", param.span)]
            )
        return _float_step_count(float(lo), float(hi), step)
    if isinstance(dom, SelectAny):
        if not dom.defaults:
            raise DiagnosticError(
                [error(E_NO_SELECTION, f"'{param.name}' has no selected values", param.span)]
            )
        return len(dom.defaults)
    if isinstance(dom, SelectOne):
        if dom.default is None:
            raise DiagnosticError(
                [error(E_NO_SELECTION, f"'{param.name}' has no selected value", param.span)]
            )
        return 1
    if isinstance(dom, Random):
        return dom.points.value if dom.points is not None else 1
    raise TypeError(f"unknown domain {dom!r}")


# ── Expansion ───────────────────────────────────────────────────────────


def _coerce(param: ParamDef, v: Value) -> Value:
    if param.ptype is ParamType.FLOAT:
        return RealVal(float(numeric_value(v)))
    return v


def expand_param(param: ParamDef, prng: Prng) -> tuple[Value, ...]:
    """Materialize the parameter's axis, consuming prng draws as needed."""
    dom = param.domain
    if isinstance(dom, Default):
        return (_coerce(param, dom.value),)
    if isinstance(dom, Jitp):
        return (TextVal(dom.raw),)
    if isinstance(dom, Compute):
        x = eval_expr(dom.expr)
        if param.ptype is ParamType.INTEGER:
            return (IntVal(int(x)),)
        return (RealVal(x),)
    if isinstance(dom, (SelectAny, SelectOne)):
        axis_cardinality(param)  # raises when nothing is selected
        if isinstance(dom, SelectOne):
            return (_coerce(param, dom.default),)
        return tuple(_coerce(param, v) for v in dom.defaults)
    if isinstance(dom, Random):
        n = dom.points.value if dom.points is not None else 1
        if param.ptype is ParamType.INTEGER:
            lo, hi = dom.start.value, dom.stop.value
            return tuple(IntVal(prng.next_int(lo, hi)) for _ in range(n))
        lo, hi = numeric_value(dom.start), numeric_value(dom.stop)
        return tuple(RealVal(prng.next_float(float(lo), float(hi))) for _ in range(n))
    if isinstance(dom, Range):
        count = axis_cardinality(param)
        if param.ptype is ParamType.INTEGER:
            lo, hi = dom.start.value, dom.stop.value
            if isinstance(dom.refine, Points):
                if count == 1:
                    return (IntVal(lo),)
                s = (hi - lo) // (count - 1)
                return tuple(IntVal(lo + i * s) for i in range(count))
            step = dom.refine.value.value if isinstance(dom.refine, Step) else 1
            return tuple(IntVal(lo + i * step) for i in range(count))
        lo, hi = float(numeric_value(dom.start)), float(numeric_value(dom.stop))
        if isinstance(dom.refine, Points):
            if count == 1:
                return (RealVal(lo),)
            vals = []
            for i in range(count):
                if i == 0:
                    x = lo
                elif i == count - 1:
                    x = hi
                else:
                    x = lo + (hi - lo) * i / (count - 1)
                vals.append(RealVal(_finite(x, param)))
            return tuple(vals)
        step = numeric_value(dom.refine.value)
        return tuple(
            RealVal(_finite(lo + i * step, param)) for i in range(count)
        )
    raise TypeError(f"unknown domain {dom!r}")


def _finite(x: float, param: ParamDef) -> float:
    if not math.isfinite(x):
        raise DiagnosticError(
            [error(E_OVERFLOW, f"axis value of '{param.name}' overflows", param.span)]
        )
    return x


def expand_plan(plan: Plan, seed: int) -> list[Axis]:
    """Validate and expand every parameter, in declaration order.

    One generator seeded once serves all random domains, so expansion is a
    pure function of (plan, seed).
    """
    diags = validate_plan(plan)
    if has_errors(diags):
        raise DiagnosticError(diags)
    prng = Prng(seed)
    return [
        Axis(p.name, p.ptype, expand_param(p, prng)) for p in plan.params
    ]
