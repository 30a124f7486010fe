"""Project files: plan text plus attached text files plus the seed.

A project is a single JSON document.  Attached files are stored inline as
text; binary payloads are rejected when attached and when loaded.  Saving
is atomic (write to a temporary file, then rename over the target).
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

from .diagnostics import (
    E_BINARY,
    E_CORRUPT,
    E_NO_FILE,
    E_PATH,
    E_VERSION,
    DiagnosticError,
    error,
)

_FORMAT = "vptproj"


@dataclass
class Project:
    plan_text: str = ""
    files: dict[str, str] = field(default_factory=dict)
    seed: int = 0


def _fail(code: str, message: str) -> DiagnosticError:
    return DiagnosticError([error(code, message)])


def check_file_name(name: str) -> None:
    """Reject absolute, escaping, or otherwise unsafe attachment names."""
    if not name or "\x00" in name:
        raise _fail(E_PATH, f"bad attachment name {name!r}")
    if name.startswith("/") or "\\" in name:
        raise _fail(E_PATH, f"attachment name {name!r} must be a relative path")
    for segment in name.split("/"):
        if segment in ("", ".", ".."):
            raise _fail(E_PATH, f"attachment name {name!r} must not escape the project")
    if any(ord(c) < 32 for c in name):
        raise _fail(E_PATH, f"attachment name {name!r} contains control characters")


def attach_file(project: Project, name: str, data: bytes) -> None:
    """Add an attachment after checking the name and that data is text."""
    check_file_name(name)
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise _fail(E_BINARY, f"attachment {name!r} is not UTF-8 text") from None
    if "\x00" in text:
        raise _fail(E_BINARY, f"attachment {name!r} contains NUL bytes")
    project.files[name] = text


def to_project_json(project: Project) -> str:
    doc = {
        "format": _FORMAT,
        "version": 1,
        "plan": project.plan_text,
        "files": dict(sorted(project.files.items())),
        "seed": project.seed,
    }
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def parse_project_json(text: str) -> Project:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _fail(E_CORRUPT, f"project is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != _FORMAT:
        raise _fail(E_CORRUPT, "not a project file")
    if doc.get("version") != 1:
        raise DiagnosticError(
            [error(E_VERSION, f"unsupported project version {doc.get('version')!r}")]
        )
    plan = doc.get("plan")
    if not isinstance(plan, str):
        raise _fail(E_CORRUPT, "project plan must be text")
    files = doc.get("files", {})
    if not isinstance(files, dict):
        raise _fail(E_CORRUPT, "project files must be an object")
    for name, content in files.items():
        if not isinstance(name, str) or not isinstance(content, str):
            raise _fail(E_CORRUPT, "project files must map names to text")
        check_file_name(name)
        if "\x00" in content:
            raise _fail(E_BINARY, f"attachment {name!r} contains NUL bytes")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise _fail(E_CORRUPT, "project seed must be an integer")
    return Project(plan_text=plan, files=dict(files), seed=seed)


def save_project(project: Project, path: str | Path) -> None:
    path = Path(path)
    text = to_project_json(project)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def load_project(path: str | Path) -> Project:
    path = Path(path)
    if not path.exists():
        raise _fail(E_NO_FILE, f"no such project: {path}")
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError:
        raise _fail(E_BINARY, f"project {path} is not UTF-8 text") from None
    return parse_project_json(text)
