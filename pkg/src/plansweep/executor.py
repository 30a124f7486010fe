"""Sweep execution: staging, per-node sandboxes, and phase tasks.

Layout under the working directory:

    workdir/
      runspec.txt          frozen run spec for this sweep
      root/                shared staging (project attachments; read-only)
      node1/               one directory per worker
        j001/              one directory per job

Tasks named rootstart, nodestart, main, nodefinish and rootfinish are the
sweep phases; only main is required.  rootstart and rootfinish run once in
root/, nodestart and nodefinish once per node in its directory, and main
once per job in the job's directory.  Jobs go to nodes round-robin by
ordinal, one thread per node.
"""

from __future__ import annotations

import os
import re
import shutil
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .ast_nodes import Copy, Execute, Location, Scope, Substitute, TaskDef
from .diagnostics import (
    E_NO_MAIN,
    E_WORKDIR,
    DiagnosticError,
    error,
    format_diagnostic,
)
from .jobs import Job, build_runspec, job_environment, to_text_v1
from .parser import parse_location, parse_plan
from .project import Project, check_file_name
from .templating import substitute
from .values import TextVal, Value, scalar_text

OK = "ok"
FAILED = "failed"
SKIPPED = "skipped"


@dataclass
class JobResult:
    job_id: str
    node: int
    status: str
    detail: str = ""
    duration: float = 0.0


@dataclass
class PhaseError:
    phase: str
    node: int | None
    detail: str


@dataclass
class RunReport:
    workdir: Path
    jobs: list[JobResult] = field(default_factory=list)
    phase_errors: list[PhaseError] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.phase_errors and all(j.status == OK for j in self.jobs)


class _CommandFailure(Exception):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


@dataclass
class _Context:
    """Directories and bindings one task runs against."""

    root_dir: Path
    node_dir: Path | None
    local_dir: Path
    env: dict[str, Value]


def _env_var_name(name: str) -> str:
    return "VPT_" + re.sub(r"[^A-Za-z0-9]", "_", name).upper()


def _process_env(env: dict[str, Value]) -> dict[str, str]:
    out = dict(os.environ)
    for name, value in env.items():
        out[_env_var_name(name)] = scalar_text(value)
    return out


def _resolve(loc: Location, ctx: _Context, writing: bool) -> Path:
    if loc.scope is Scope.ROOT:
        if writing:
            raise _CommandFailure(f"root:{loc.path}: shared staging is read-only")
        base = ctx.root_dir
    elif loc.scope is Scope.NODE:
        if ctx.node_dir is None:
            raise _CommandFailure(f"node:{loc.path}: no node in this phase")
        base = ctx.node_dir
    else:
        base = ctx.local_dir
    if loc.path.startswith("/"):
        raise _CommandFailure(f"{loc.path}: absolute paths are not allowed")
    resolved = os.path.normpath(os.path.join(base, loc.path))
    if resolved != str(base) and not resolved.startswith(str(base) + os.sep):
        raise _CommandFailure(f"{loc.path}: path escapes its sandbox")
    return Path(resolved)


def _run_one(cmd, ctx: _Context, remaining: float | None) -> None:
    if isinstance(cmd, Copy):
        src = _resolve(cmd.src, ctx, writing=False)
        dst = _resolve(cmd.dst, ctx, writing=True)
        if not src.exists():
            raise _CommandFailure(f"copy source '{cmd.src.path}' not found")
        dst.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy(src, dst)
        return
    if isinstance(cmd, Substitute):
        try:
            skel_loc = parse_location(cmd.skeleton)
            out_loc = parse_location(cmd.output)
        except ValueError as exc:
            raise _CommandFailure(str(exc)) from None
        skel = _resolve(skel_loc, ctx, writing=False)
        out = _resolve(out_loc, ctx, writing=True)
        if not skel.exists():
            raise _CommandFailure(f"skeleton '{cmd.skeleton}' not found")
        try:
            text = skel.read_text(encoding="utf-8")
        except UnicodeDecodeError:
            raise _CommandFailure(f"skeleton '{cmd.skeleton}' is not text") from None
        try:
            rendered = substitute(text, ctx.env)
        except DiagnosticError as exc:
            messages = "; ".join(
                format_diagnostic(d, text, cmd.skeleton) for d in exc.diagnostics
            )
            raise _CommandFailure(messages) from None
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(rendered, encoding="utf-8")
        return
    if isinstance(cmd, Execute):
        if cmd.on_node:
            if ctx.node_dir is None:
                raise _CommandFailure("node:execute outside a node phase")
            cwd = ctx.node_dir
        else:
            cwd = ctx.local_dir
        try:
            proc = subprocess.run(
                cmd.command_line,
                shell=True,
                cwd=cwd,
                env=_process_env(ctx.env),
                capture_output=True,
                timeout=remaining,
            )
        except subprocess.TimeoutExpired:
            raise _CommandFailure(
                f"'{cmd.command_line}' timed out"
            ) from None
        with open(cwd / "task.log", "ab") as log:
            log.write(proc.stdout)
            log.write(proc.stderr)
        if proc.returncode != 0:
            raise _CommandFailure(
                f"'{cmd.command_line}' exited with status {proc.returncode}"
            )
        return
    raise _CommandFailure(f"unsupported task command {cmd!r}")


def _run_task(task: TaskDef, ctx: _Context, timeout: float | None) -> str | None:
    """Run all commands under one time budget; return failure detail or None."""
    started = time.perf_counter()
    for cmd in task.commands:
        remaining = None
        if timeout is not None:
            remaining = timeout - (time.perf_counter() - started)
            if remaining <= 0:
                return f"task '{task.name}' timed out"
        try:
            _run_one(cmd, ctx, remaining)
        except _CommandFailure as exc:
            return exc.detail
    return None


@dataclass
class _NodePlan:
    index: int
    jobs: list[Job]


def run_sweep(
    project: Project,
    workdir: str | Path,
    *,
    workers: int = 1,
    timeout: float | None = None,
) -> RunReport:
    """Execute the project's sweep into a fresh working directory."""
    if workers < 1:
        raise ValueError("workers must be at least 1")
    result = parse_plan(project.plan_text)
    if not result.ok:
        raise DiagnosticError(result.diagnostics)
    plan = result.plan
    if plan.find_task("main") is None:
        raise DiagnosticError(
            [error(E_NO_MAIN, "plan defines no 'main' task to run")]
        )
    spec = build_runspec(plan, project.seed)

    workdir = Path(workdir)
    if workdir.exists() and any(workdir.iterdir()):
        raise DiagnosticError(
            [error(E_WORKDIR, f"working directory {workdir} is not empty")]
        )
    root_dir = workdir / "root"
    root_dir.mkdir(parents=True, exist_ok=True)
    for name, content in project.files.items():
        check_file_name(name)
        target = root_dir / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(content, encoding="utf-8")
    (workdir / "runspec.txt").write_text(to_text_v1(spec), encoding="utf-8")

    constants = {
        ax.name: ax.values[0] for ax in spec.axes if len(ax.values) == 1
    }
    report = RunReport(workdir=workdir)

    def phase_ctx() -> _Context:
        return _Context(root_dir, None, root_dir, dict(constants))

    rootstart = plan.find_task("rootstart")
    if rootstart is not None:
        detail = _run_task(rootstart, phase_ctx(), timeout)
        if detail is not None:
            report.phase_errors.append(PhaseError("rootstart", None, detail))
            for job in spec.jobs:
                node = (job.ordinal - 1) % workers + 1
                report.jobs.append(
                    JobResult(job.job_id, node, SKIPPED, "rootstart failed")
                )
            return report

    nodes: dict[int, _NodePlan] = {}
    for job in spec.jobs:
        k = (job.ordinal - 1) % workers + 1
        nodes.setdefault(k, _NodePlan(k, [])).jobs.append(job)

    main_task = plan.find_task("main")
    nodestart = plan.find_task("nodestart")
    nodefinish = plan.find_task("nodefinish")

    def run_node(node_plan: _NodePlan) -> tuple[list[JobResult], list[PhaseError]]:
        k = node_plan.index
        node_name = f"node{k}"
        node_dir = workdir / node_name
        node_dir.mkdir(parents=True, exist_ok=True)
        node_env = dict(constants)
        node_env["nodename"] = TextVal(node_name)
        results: list[JobResult] = []
        perrors: list[PhaseError] = []
        if nodestart is not None:
            ctx = _Context(root_dir, node_dir, node_dir, dict(node_env))
            detail = _run_task(nodestart, ctx, timeout)
            if detail is not None:
                perrors.append(PhaseError("nodestart", k, detail))
                for job in node_plan.jobs:
                    results.append(
                        JobResult(job.job_id, k, SKIPPED, "nodestart failed")
                    )
                return results, perrors
        for job in node_plan.jobs:
            job_dir = node_dir / job.job_id
            job_dir.mkdir(parents=True, exist_ok=True)
            env = job_environment(spec, job)
            env["jobname"] = TextVal(job.job_id)
            env["nodename"] = TextVal(node_name)
            ctx = _Context(root_dir, node_dir, job_dir, env)
            started = time.perf_counter()
            detail = _run_task(main_task, ctx, timeout)
            duration = time.perf_counter() - started
            if detail is None:
                results.append(JobResult(job.job_id, k, OK, "", duration))
            else:
                results.append(JobResult(job.job_id, k, FAILED, detail, duration))
        if nodefinish is not None:
            ctx = _Context(root_dir, node_dir, node_dir, dict(node_env))
            detail = _run_task(nodefinish, ctx, timeout)
            if detail is not None:
                perrors.append(PhaseError("nodefinish", k, detail))
        return results, perrors

    ordered_nodes = [nodes[k] for k in sorted(nodes)]
    if len(ordered_nodes) <= 1:
        outcomes = [run_node(np) for np in ordered_nodes]
    else:
        with ThreadPoolExecutor(max_workers=len(ordered_nodes)) as pool:
            outcomes = list(pool.map(run_node, ordered_nodes))

    for results, perrors in outcomes:
        report.jobs.extend(results)
        report.phase_errors.extend(perrors)
    report.jobs.sort(key=lambda r: r.job_id)

    rootfinish = plan.find_task("rootfinish")
    if rootfinish is not None:
        detail = _run_task(rootfinish, phase_ctx(), timeout)
        if detail is not None:
            report.phase_errors.append(PhaseError("rootfinish", None, detail))
    return report
