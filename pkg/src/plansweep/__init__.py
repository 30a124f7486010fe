"""Plan language tooling: parse, validate, expand, run, serve."""

from .ast_nodes import (
    Compute,
    Copy,
    Default,
    Execute,
    Jitp,
    Location,
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
    Substitute,
    TaskDef,
    eval_expr,
)
from .diagnostics import (
    Diagnostic,
    DiagnosticError,
    Severity,
    Span,
    format_diagnostic,
    line_col,
)
from .executor import RunReport, run_sweep
from .jobs import (
    Job,
    RunSpec,
    build_runspec,
    count_jobs,
    parse_json_v1,
    parse_text_v1,
    runspec_equal,
    to_json_v1,
    to_text_v1,
)
from .model import Axis, Prng, expand_plan, validate_plan
from .parser import ParseResult, parse_expr_text, parse_plan
from .printer import print_expr, print_plan
from .project import Project, load_project, save_project
from .templating import Placeholder, scan_template, substitute
from .values import FileVal, IntVal, RealVal, TextVal, Value

__all__ = [
    "Axis",
    "Compute",
    "Copy",
    "Default",
    "Diagnostic",
    "DiagnosticError",
    "Execute",
    "FileVal",
    "IntVal",
    "Jitp",
    "Job",
    "Location",
    "Origin",
    "ParamDef",
    "ParamType",
    "ParseResult",
    "Placeholder",
    "Plan",
    "Points",
    "Prng",
    "Project",
    "Random",
    "Range",
    "RealVal",
    "RunReport",
    "RunSpec",
    "Scope",
    "SelectAny",
    "SelectOne",
    "Severity",
    "Span",
    "Step",
    "Substitute",
    "TaskDef",
    "TextVal",
    "Value",
    "build_runspec",
    "count_jobs",
    "eval_expr",
    "expand_plan",
    "format_diagnostic",
    "line_col",
    "load_project",
    "parse_expr_text",
    "parse_json_v1",
    "parse_plan",
    "parse_text_v1",
    "print_expr",
    "print_plan",
    "run_sweep",
    "runspec_equal",
    "save_project",
    "scan_template",
    "substitute",
    "to_json_v1",
    "to_text_v1",
    "validate_plan",
]
