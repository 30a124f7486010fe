"""HTTP editor service for a single plan-editing session.

State is one project guarded by a condition variable.  Every mutation
bumps a revision counter; GET /api/events long-polls until the revision
passes the caller's, so editors refresh without polling loops.  Writes
may carry if_revision for optimistic concurrency (mismatch is 409).
Domain errors surface as 400 with serialized diagnostics.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .ast_nodes import (
    Compute,
    Default,
    Jitp,
    Random,
    Range,
    SelectAny,
    SelectOne,
    eval_expr,
)
from .diagnostics import (
    E_BAD_NAME,
    E_BINARY,
    E_DUP_PARAM,
    E_NO_FILE,
    Diagnostic,
    DiagnosticError,
    Span,
    error,
    line_col,
)
from .edits import Edit, apply_edits
from .jobs import count_jobs
from .lexer import KEYWORDS, is_identifier
from .model import axis_cardinality, expand_plan, validate_plan
from .parser import parse_expr_text, parse_plan
from .printer import print_expr
from .project import Project, check_file_name, load_project, save_project
from .values import quote, run_literal, shortest_real

_MAX_POLL_SECONDS = 25.0
_PREVIEW_VALUES = 8

_DOMAIN_KIND = {
    Default: "default",
    Range: "range",
    SelectAny: "selectany",
    SelectOne: "selectone",
    Random: "random",
    Compute: "compute",
    Jitp: "jitp",
}


class RevisionConflict(Exception):
    def __init__(self, revision: int):
        super().__init__(f"revision is {revision}")
        self.revision = revision


class SessionState:
    """One project plus a monotonically increasing revision."""

    def __init__(self, project: Project | None = None):
        self._project = project if project is not None else Project()
        self._revision = 1
        self._origins: dict[str, str] = {}
        self._cond = threading.Condition()

    def snapshot(self) -> tuple[int, Project, dict[str, str]]:
        with self._cond:
            copy = Project(
                plan_text=self._project.plan_text,
                files=dict(self._project.files),
                seed=self._project.seed,
            )
            return self._revision, copy, dict(self._origins)

    def mutate(self, fn, if_revision: int | None = None) -> int:
        """Run fn(project, origins) under the lock and bump the revision."""
        with self._cond:
            if if_revision is not None and if_revision != self._revision:
                raise RevisionConflict(self._revision)
            fn(self._project, self._origins)
            self._revision += 1
            self._cond.notify_all()
            return self._revision

    def wait_past(self, since: int, timeout: float) -> int:
        with self._cond:
            self._cond.wait_for(lambda: self._revision > since, timeout=timeout)
            return self._revision


# ── Request bodies ──────────────────────────────────────────────────────


class PlanBody(BaseModel):
    text: str
    if_revision: int | None = None


class EditSpan(BaseModel):
    start: int
    end: int
    text: str


class EditsBody(BaseModel):
    edits: list[EditSpan]
    if_revision: int | None = None


class ParameterizeBody(BaseModel):
    name: str
    type: str
    domain: str
    label: str | None = None
    file: str | None = None
    start: int | None = None
    end: int | None = None
    if_revision: int | None = None


class FileBody(BaseModel):
    text: str
    if_revision: int | None = None


class SeedBody(BaseModel):
    seed: int
    if_revision: int | None = None


class ComputeBody(BaseModel):
    expr: str


class PathBody(BaseModel):
    path: str
    if_revision: int | None = None


# ── Serialization helpers ───────────────────────────────────────────────


def _diag_json(diag: Diagnostic, source: str) -> dict:
    out = {
        "severity": diag.severity.value,
        "code": diag.code,
        "message": diag.message,
        "start": None,
        "end": None,
        "line": None,
        "col": None,
    }
    if diag.span is not None:
        out["start"] = diag.span.start
        out["end"] = diag.span.end
        line, col = line_col(source, diag.span.start)
        out["line"] = line
        out["col"] = col
    return out


def _fail(code: str, message: str, span: Span | None = None) -> DiagnosticError:
    return DiagnosticError([error(code, message, span)])


def _state_payload(revision: int, project: Project, origins: dict[str, str]) -> dict:
    source = project.plan_text
    result = parse_plan(source)
    diags = list(result.diagnostics)
    if result.ok:
        diags.extend(validate_plan(result.plan))
    axes_by_name = {}
    if result.ok:
        try:
            axes_by_name = {
                ax.name: ax for ax in expand_plan(result.plan, project.seed)
            }
        except DiagnosticError:
            axes_by_name = {}
    params = []
    for p in result.plan.params:
        cardinality = None
        try:
            cardinality = axis_cardinality(p)
        except DiagnosticError:
            pass
        preview = None
        ax = axes_by_name.get(p.name)
        if ax is not None:
            preview = [run_literal(v) for v in ax.values[:_PREVIEW_VALUES]]
        params.append(
            {
                "name": p.name,
                "label": p.label,
                "type": p.ptype.value,
                "kind": _DOMAIN_KIND[type(p.domain)],
                "span": {"start": p.span.start, "end": p.span.end}
                if p.span
                else None,
                "origin": origins.get(p.name, "imported"),
                "cardinality": cardinality,
                "preview": preview,
            }
        )
    job_count = None
    job_count_error = None
    if result.ok and not any(d.is_error for d in diags):
        try:
            job_count = count_jobs(result.plan)
        except DiagnosticError as exc:
            job_count_error = exc.diagnostics[0].message
    else:
        job_count_error = "plan has errors"
    return {
        "revision": revision,
        "seed": project.seed,
        "plan_text": source,
        "diagnostics": [_diag_json(d, source) for d in diags],
        "params": params,
        "files": sorted(project.files),
        "job_count": job_count,
        "job_count_error": job_count_error,
    }


# ── Application ─────────────────────────────────────────────────────────


def create_app(
    project: Project | None = None, frontend_dir: Path | None = None
) -> FastAPI:
    app = FastAPI(title="plansweep editor")
    state = SessionState(project)
    app.state.session = state

    @app.exception_handler(DiagnosticError)
    def _on_diagnostics(_req: Request, exc: DiagnosticError):
        return JSONResponse(
            status_code=400,
            content={
                "code": exc.code,
                "message": "; ".join(d.message for d in exc.diagnostics),
                "diagnostics": [_diag_json(d, "") for d in exc.diagnostics],
            },
        )

    @app.exception_handler(RevisionConflict)
    def _on_conflict(_req: Request, exc: RevisionConflict):
        return JSONResponse(status_code=409, content={"revision": exc.revision})

    @app.get("/api/state")
    def get_state():
        revision, proj, origins = state.snapshot()
        return _state_payload(revision, proj, origins)

    @app.get("/api/events")
    def get_events(since: int = 0, timeout: float = _MAX_POLL_SECONDS):
        timeout = min(max(timeout, 0.0), _MAX_POLL_SECONDS)
        revision = state.wait_past(since, timeout)
        return {"revision": revision}

    @app.post("/api/plan")
    def post_plan(body: PlanBody):
        def apply(proj: Project, _origins):
            proj.plan_text = body.text

        return {"revision": state.mutate(apply, body.if_revision)}

    @app.post("/api/edit")
    def post_edit(body: EditsBody):
        def apply(proj: Project, _origins):
            edits = [Edit(Span(e.start, e.end), e.text) for e in body.edits]
            proj.plan_text = apply_edits(proj.plan_text, edits)

        return {"revision": state.mutate(apply, body.if_revision)}

    @app.post("/api/seed")
    def post_seed(body: SeedBody):
        def apply(proj: Project, _origins):
            proj.seed = body.seed

        return {"revision": state.mutate(apply, body.if_revision)}

    @app.post("/api/parameterize")
    def post_parameterize(body: ParameterizeBody):
        def apply(proj: Project, origins):
            name = body.name
            if not is_identifier(name) or name in KEYWORDS:
                raise _fail(E_BAD_NAME, f"bad parameter name {name!r}")
            statement = f"parameter {name}"
            if body.label is not None:
                statement += f" label {quote(body.label)}"
            statement += f" {body.type} {body.domain};"
            parsed = parse_plan(statement)
            if not parsed.ok or len(parsed.plan.params) != 1:
                raise DiagnosticError(
                    [d for d in parsed.diagnostics if d.is_error]
                    or [error(E_BAD_NAME, "domain text did not parse")]
                )
            existing = parse_plan(proj.plan_text)
            if existing.plan.find_param(name) is not None:
                raise _fail(E_DUP_PARAM, f"parameter '{name}' already exists")
            new_content = None
            if body.file is not None:
                if body.file not in proj.files:
                    raise _fail(E_NO_FILE, f"no attached file {body.file!r}")
                if body.start is None or body.end is None:
                    raise _fail(E_BAD_NAME, "file edits need start and end")
                new_content = apply_edits(
                    proj.files[body.file],
                    [Edit(Span(body.start, body.end), "${" + name + "}")],
                )
            plan_text = proj.plan_text
            if plan_text and not plan_text.endswith("\n"):
                plan_text += "\n"
            plan_text += statement + "\n"
            if new_content is not None:
                proj.files[body.file] = new_content
                origins[name] = "file_dependent"
            else:
                origins[name] = "file_independent"
            proj.plan_text = plan_text

        return {"revision": state.mutate(apply, body.if_revision)}

    @app.get("/api/file/{name:path}")
    def get_file(name: str):
        _revision, proj, _origins = state.snapshot()
        if name not in proj.files:
            return JSONResponse(status_code=404, content={"message": f"no file {name!r}"})
        return {"name": name, "text": proj.files[name]}

    @app.put("/api/file/{name:path}")
    def put_file(name: str, body: FileBody):
        def apply(proj: Project, _origins):
            check_file_name(name)
            if "\x00" in body.text:
                raise _fail(E_BINARY, f"attachment {name!r} contains NUL bytes")
            proj.files[name] = body.text

        return {"revision": state.mutate(apply, body.if_revision)}

    @app.delete("/api/file/{name:path}")
    def delete_file(name: str, if_revision: int | None = None):
        def apply(proj: Project, _origins):
            if name not in proj.files:
                raise _fail(E_NO_FILE, f"no attached file {name!r}")
            del proj.files[name]

        return {"revision": state.mutate(apply, if_revision)}

    @app.post("/api/compute")
    def post_compute(body: ComputeBody):
        expr = parse_expr_text(body.expr)
        value = eval_expr(expr)
        return {
            "value": value,
            "text": shortest_real(value),
            "canonical": print_expr(expr),
        }

    @app.post("/api/save")
    def post_save(body: PathBody):
        _revision, proj, _origins = state.snapshot()
        save_project(proj, body.path)
        return {"path": body.path}

    @app.post("/api/open")
    def post_open(body: PathBody):
        loaded = load_project(body.path)

        def apply(proj: Project, origins):
            proj.plan_text = loaded.plan_text
            proj.files = dict(loaded.files)
            proj.seed = loaded.seed
            origins.clear()

        return {"revision": state.mutate(apply, body.if_revision)}

    if frontend_dir is None:
        frontend_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if frontend_dir.is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return (
                "<!doctype html><title>plansweep</title>"
                "<p>The editor UI is not built. Use the /api endpoints.</p>"
            )

    return app
