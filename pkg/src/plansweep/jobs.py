"""Job enumeration and run-spec serialization.

Axes with more than one value are swept; their cross product is walked in
declaration order with the last swept axis varying fastest.  A run spec
records the seed, every axis, and every job, and can be written as a line
format (text v1) or JSON (json v1).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .ast_nodes import Plan
from .diagnostics import (
    E_CORRUPT,
    E_OVERFLOW,
    E_VERSION,
    DiagnosticError,
    error,
)
from .lexer import decode_quote, is_identifier
from .model import Axis, axis_cardinality, expand_plan
from .values import (
    INT64_MAX,
    FileVal,
    IntVal,
    RealVal,
    TextVal,
    Value,
    run_literal,
    values_equivalent,
)


@dataclass(frozen=True)
class SpecAxis:
    name: str
    values: tuple[Value, ...]


@dataclass(frozen=True)
class Job:
    job_id: str
    ordinal: int
    bindings: tuple[tuple[str, Value], ...]


@dataclass(frozen=True)
class RunSpec:
    seed: int
    axes: tuple[SpecAxis, ...]
    jobs: tuple[Job, ...]


def _corrupt(message: str) -> DiagnosticError:
    return DiagnosticError([error(E_CORRUPT, message)])


# ── Enumeration ─────────────────────────────────────────────────────────


def count_jobs(plan: Plan) -> int:
    """Total job count, computed without materializing any axis."""
    total = 1
    for param in plan.params:
        total *= axis_cardinality(param)
        if total > INT64_MAX:
            raise DiagnosticError(
                [error(E_OVERFLOW, "job count exceeds 2^63-1", param.span)]
            )
    return total


def generate_jobs(axes: list[Axis] | tuple[Axis, ...]) -> tuple[Job, ...]:
    swept = [ax for ax in axes if ax.swept]
    total = 1
    for ax in swept:
        total *= ax.cardinality
        if total > INT64_MAX:
            raise DiagnosticError([error(E_OVERFLOW, "job count exceeds 2^63-1")])
    width = len(str(total))
    jobs = []
    for ordinal in range(1, total + 1):
        rem = ordinal - 1
        indices = [0] * len(swept)
        for k in range(len(swept) - 1, -1, -1):
            indices[k] = rem % swept[k].cardinality
            rem //= swept[k].cardinality
        bindings = tuple(
            (ax.name, ax.values[indices[k]]) for k, ax in enumerate(swept)
        )
        jobs.append(Job(f"j{ordinal:0{width}d}", ordinal, bindings))
    return tuple(jobs)


def build_runspec(plan: Plan, seed: int) -> RunSpec:
    """Expand the plan under the seed and enumerate its jobs."""
    axes = expand_plan(plan, seed)
    jobs = generate_jobs(axes)
    return RunSpec(
        seed=seed,
        axes=tuple(SpecAxis(ax.name, ax.values) for ax in axes),
        jobs=jobs,
    )


def job_environment(spec: RunSpec, job: Job) -> dict[str, Value]:
    """Full name-to-value binding for one job, in axis order."""
    bound = dict(job.bindings)
    env: dict[str, Value] = {}
    for ax in spec.axes:
        if len(ax.values) > 1:
            if ax.name not in bound:
                raise _corrupt(f"job {job.job_id} does not bind axis '{ax.name}'")
            env[ax.name] = bound[ax.name]
        else:
            env[ax.name] = ax.values[0]
    return env


# ── Text format ─────────────────────────────────────────────────────────

_HEADER = re.compile(r"runspec v(\d+) seed=(-?\d+)")


def to_text_v1(spec: RunSpec) -> str:
    lines = [f"runspec v1 seed={spec.seed}"]
    for ax in spec.axes:
        vals = " ".join(run_literal(v) for v in ax.values)
        lines.append(f"values {ax.name} {vals}")
    for job in spec.jobs:
        binds = "".join(f" {n}={run_literal(v)}" for n, v in job.bindings)
        lines.append(f"job {job.job_id}{binds}")
    return "\n".join(lines) + "\n"


def _split_spec_words(line: str) -> list[str]:
    """Whitespace-split keeping double-quoted segments (raw, quotes kept)."""
    words = []
    i, n = 0, len(line)
    while i < n:
        if line[i] in " \t":
            i += 1
            continue
        start = i
        while i < n and line[i] not in " \t":
            if line[i] == '"':
                i += 1
                while i < n and line[i] != '"':
                    if line[i] == "\\" and i + 1 < n:
                        i += 2
                    else:
                        i += 1
                if i >= n:
                    raise _corrupt("unterminated quote in run spec")
            i += 1
        words.append(line[start:i])
    return words


def _parse_literal(word: str) -> Value:
    if word.startswith('"'):
        if len(word) < 2 or not word.endswith('"'):
            raise _corrupt(f"malformed quoted value {word!r}")
        return TextVal(decode_quote(word))
    try:
        return IntVal(int(word))
    except ValueError:
        pass
    try:
        x = float(word)
    except ValueError:
        raise _corrupt(f"malformed value {word!r}") from None
    return RealVal(x)


def parse_text_v1(text: str) -> RunSpec:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise _corrupt("empty run spec")
    m = _HEADER.fullmatch(lines[0].strip())
    if not m:
        raise _corrupt("missing run spec header")
    if m.group(1) != "1":
        raise DiagnosticError(
            [error(E_VERSION, f"unsupported run spec version v{m.group(1)}")]
        )
    seed = int(m.group(2))
    axes: list[SpecAxis] = []
    jobs: list[Job] = []
    for line in lines[1:]:
        words = _split_spec_words(line)
        if words[0] == "values":
            if len(words) < 3:
                raise _corrupt(f"values line needs a name and at least one value: {line!r}")
            name = words[1]
            if not is_identifier(name):
                raise _corrupt(f"bad axis name {name!r}")
            axes.append(SpecAxis(name, tuple(_parse_literal(w) for w in words[2:])))
        elif words[0] == "job":
            if len(words) < 2:
                raise _corrupt(f"job line needs an id: {line!r}")
            job_id = words[1]
            bindings = []
            for word in words[2:]:
                name, eq, lit = word.partition("=")
                if not eq or not is_identifier(name):
                    raise _corrupt(f"malformed binding {word!r}")
                bindings.append((name, _parse_literal(lit)))
            jobs.append(Job(job_id, len(jobs) + 1, tuple(bindings)))
        else:
            raise _corrupt(f"unrecognized run spec line: {line!r}")
    return RunSpec(seed, tuple(axes), tuple(jobs))


# ── JSON format ─────────────────────────────────────────────────────────


def _value_to_json(v: Value):
    if isinstance(v, IntVal):
        return v.value
    if isinstance(v, RealVal):
        return v.value
    if isinstance(v, TextVal):
        return v.value
    return {"file": v.path}


def _value_from_json(x) -> Value:
    if isinstance(x, bool):
        raise _corrupt("boolean is not a run spec value")
    if isinstance(x, int):
        return IntVal(x)
    if isinstance(x, float):
        return RealVal(x)
    if isinstance(x, str):
        return TextVal(x)
    if isinstance(x, dict) and set(x) == {"file"} and isinstance(x["file"], str):
        return FileVal(x["file"])
    raise _corrupt(f"malformed run spec value {x!r}")


def to_json_v1(spec: RunSpec) -> str:
    doc = {
        "version": 1,
        "seed": spec.seed,
        "axes": [
            {"name": ax.name, "values": [_value_to_json(v) for v in ax.values]}
            for ax in spec.axes
        ],
        "jobs": [
            {
                "id": job.job_id,
                "bindings": {n: _value_to_json(v) for n, v in job.bindings},
            }
            for job in spec.jobs
        ],
    }
    return json.dumps(doc, allow_nan=False) + "\n"


def parse_json_v1(text: str) -> RunSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _corrupt(f"run spec is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise _corrupt("run spec must be a JSON object")
    version = doc.get("version")
    if version != 1:
        raise DiagnosticError(
            [error(E_VERSION, f"unsupported run spec version {version!r}")]
        )
    seed = doc.get("seed")
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise _corrupt("run spec seed must be an integer")
    try:
        axes = tuple(
            SpecAxis(ax["name"], tuple(_value_from_json(v) for v in ax["values"]))
            for ax in doc.get("axes", [])
        )
        jobs = tuple(
            Job(
                job["id"],
                ordinal,
                tuple((n, _value_from_json(v)) for n, v in job["bindings"].items()),
            )
            for ordinal, job in enumerate(doc.get("jobs", []), 1)
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise _corrupt(f"malformed run spec structure: {exc!r}") from None
    for ax in axes:
        if not isinstance(ax.name, str) or not is_identifier(ax.name):
            raise _corrupt(f"bad axis name {ax.name!r}")
    return RunSpec(seed, axes, jobs)


# ── Equality across formats ─────────────────────────────────────────────


def runspec_equal(a: RunSpec, b: RunSpec) -> bool:
    """Structural equality that tolerates wire-format tag loss.

    The text format cannot distinguish file values from text values, so
    comparison uses value equivalence rather than dataclass equality.
    """
    if a.seed != b.seed or len(a.axes) != len(b.axes) or len(a.jobs) != len(b.jobs):
        return False
    for ax_a, ax_b in zip(a.axes, b.axes):
        if ax_a.name != ax_b.name or len(ax_a.values) != len(ax_b.values):
            return False
        if not all(
            values_equivalent(x, y) for x, y in zip(ax_a.values, ax_b.values)
        ):
            return False
    for j_a, j_b in zip(a.jobs, b.jobs):
        if j_a.job_id != j_b.job_id or len(j_a.bindings) != len(j_b.bindings):
            return False
        for (n_a, v_a), (n_b, v_b) in zip(j_a.bindings, j_b.bindings):
            if n_a != n_b or not values_equivalent(v_a, v_b):
                return False
    return True
