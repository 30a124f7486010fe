"""Command-line front end.

Exit codes: 0 success, 1 errors in the input or run setup, 2 usage
errors, 3 sweep finished but jobs or phases failed.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .diagnostics import DiagnosticError, format_diagnostic, has_errors
from .executor import OK, run_sweep
from .jobs import build_runspec, count_jobs, to_json_v1, to_text_v1
from .model import expand_plan, validate_plan
from .parser import parse_plan
from .printer import print_plan
from .project import Project, load_project
from .values import run_literal


def _read_source(path: str) -> tuple[str, str]:
    """Return (source, display name); path '-' reads standard input."""
    if path == "-":
        return sys.stdin.read(), "<stdin>"
    return Path(path).read_text(encoding="utf-8"), path


def _emit(diagnostics, source: str, filename: str) -> None:
    for diag in diagnostics:
        print(format_diagnostic(diag, source, filename), file=sys.stderr)


def _seed_default() -> int:
    raw = os.environ.get("VPT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        print(f"plansweep: bad VPT_SEED value {raw!r}", file=sys.stderr)
        raise SystemExit(2) from None


def _parse_checked(path: str):
    """Parse and validate; returns (plan, source, name) or exits 1."""
    source, name = _read_source(path)
    result = parse_plan(source)
    diags = list(result.diagnostics)
    if result.ok:
        diags.extend(validate_plan(result.plan))
    _emit(diags, source, name)
    if has_errors(diags):
        raise SystemExit(1)
    return result.plan, source, name


def _cmd_validate(args) -> int:
    _parse_checked(args.plan)
    return 0


def _cmd_canon(args) -> int:
    source, name = _read_source(args.plan)
    result = parse_plan(source)
    _emit(result.diagnostics, source, name)
    if not result.ok:
        return 1
    sys.stdout.write(print_plan(result.plan))
    return 0


def _cmd_expand(args) -> int:
    plan, source, name = _parse_checked(args.plan)
    try:
        axes = expand_plan(plan, args.seed)
    except DiagnosticError as exc:
        _emit(exc.diagnostics, source, name)
        return 1
    for ax in axes:
        print(ax.name, *[run_literal(v) for v in ax.values])
    return 0


def _cmd_jobs(args) -> int:
    plan, source, name = _parse_checked(args.plan)
    try:
        if args.count:
            print(count_jobs(plan))
            return 0
        spec = build_runspec(plan, args.seed)
    except DiagnosticError as exc:
        _emit(exc.diagnostics, source, name)
        return 1
    if args.format == "json":
        sys.stdout.write(to_json_v1(spec))
    else:
        sys.stdout.write(to_text_v1(spec))
    return 0


def _cmd_run(args) -> int:
    try:
        project = load_project(args.project)
    except DiagnosticError as exc:
        _emit(exc.diagnostics, "", args.project)
        return 1
    if args.seed is not None:
        project.seed = args.seed
    elif os.environ.get("VPT_SEED") is not None:
        project.seed = _seed_default()
    try:
        report = run_sweep(
            project,
            args.workdir,
            workers=args.workers,
            timeout=args.timeout,
        )
    except DiagnosticError as exc:
        _emit(exc.diagnostics, project.plan_text, args.project)
        return 1
    for job in report.jobs:
        line = f"{job.job_id} node{job.node} {job.status}"
        if job.detail:
            line += f" {job.detail}"
        print(line)
    for err in report.phase_errors:
        where = f"node{err.node}" if err.node is not None else "root"
        print(f"phase {err.phase} {where} failed: {err.detail}", file=sys.stderr)
    failed = sum(1 for j in report.jobs if j.status != OK)
    print(f"{len(report.jobs) - failed}/{len(report.jobs)} jobs ok", file=sys.stderr)
    return 0 if report.ok else 3


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    project = None
    if args.project is not None:
        project = load_project(args.project)
    app = create_app(project)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plansweep",
        description="Parse, expand and run parameter sweep plans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and type-check a plan")
    p.add_argument("plan", help="plan file, or - for stdin")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("canon", help="print the canonical form of a plan")
    p.add_argument("plan", help="plan file, or - for stdin")
    p.set_defaults(func=_cmd_canon)

    p = sub.add_parser("expand", help="print every parameter axis")
    p.add_argument("plan", help="plan file, or - for stdin")
    p.add_argument("--seed", type=int, default=_seed_default())
    p.set_defaults(func=_cmd_expand)

    p = sub.add_parser("jobs", help="enumerate jobs as a run spec")
    p.add_argument("plan", help="plan file, or - for stdin")
    p.add_argument("--seed", type=int, default=_seed_default())
    p.add_argument("--count", action="store_true", help="print only the job count")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_jobs)

    p = sub.add_parser("run", help="execute a project's sweep")
    p.add_argument("project", help="project file (.vptproj)")
    p.add_argument("--workdir", required=True, help="fresh working directory")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=None, help="override the project seed")
    p.add_argument("--timeout", type=float, default=None, help="per-task seconds")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("serve", help="serve the plan editor over HTTP")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8462)
    p.add_argument("--project", default=None, help="project file to open")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        parser = build_arg_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 1
    except FileNotFoundError as exc:
        print(f"plansweep: {exc}", file=sys.stderr)
        return 1
    except UnicodeDecodeError:
        print("plansweep: input is not UTF-8 text", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
