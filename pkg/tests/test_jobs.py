"""Job enumeration and run spec wire format tests."""

import itertools
import json
import random

import pytest

from plansweep.diagnostics import DiagnosticError
from plansweep.jobs import (
    Job,
    RunSpec,
    SpecAxis,
    build_runspec,
    count_jobs,
    generate_jobs,
    job_environment,
    parse_json_v1,
    parse_text_v1,
    runspec_equal,
    to_json_v1,
    to_text_v1,
)
from plansweep.model import expand_plan
from plansweep.parser import parse_plan
from plansweep.values import FileVal, IntVal, RealVal, TextVal


def plan_of(src):
    result = parse_plan(src)
    assert result.ok, [str(d) for d in result.diagnostics]
    return result.plan


SWEEP_2X3 = (
    "parameter a integer range from 1 to 2;"
    "parameter b integer select anyof 10 20 30 default 10 20 30;"
)


# ── Enumeration ─────────────────────────────────────────────────────────


def test_last_swept_axis_varies_fastest():
    jobs = generate_jobs(expand_plan(plan_of(SWEEP_2X3), 0))
    got = [tuple(v.value for _, v in j.bindings) for j in jobs]
    assert got == [(1, 10), (1, 20), (1, 30), (2, 10), (2, 20), (2, 30)]


def test_job_ids_are_one_based_and_padded():
    jobs = generate_jobs(expand_plan(plan_of(SWEEP_2X3), 0))
    assert [j.job_id for j in jobs] == ["j1", "j2", "j3", "j4", "j5", "j6"]
    assert [j.ordinal for j in jobs] == [1, 2, 3, 4, 5, 6]

    src = (
        "parameter a integer range from 1 to 4;"
        "parameter b integer range from 1 to 3;"
    )
    jobs = generate_jobs(expand_plan(plan_of(src), 0))
    assert jobs[0].job_id == "j01"
    assert jobs[9].job_id == "j10"
    assert jobs[-1].job_id == "j12"


def test_width_covers_rollover_to_powers_of_ten():
    src = (
        "parameter a integer range from 1 to 10;"
        "parameter b integer range from 1 to 10;"
    )
    jobs = generate_jobs(expand_plan(plan_of(src), 0))
    assert jobs[0].job_id == "j001"
    assert jobs[-1].job_id == "j100"


def test_constant_axes_are_not_bound_per_job():
    src = "parameter fixed integer default 7;" + SWEEP_2X3
    spec = build_runspec(plan_of(src), 0)
    assert all(
        [n for n, _ in j.bindings] == ["a", "b"] for j in spec.jobs
    )
    env = job_environment(spec, spec.jobs[0])
    assert env["fixed"] == IntVal(7)
    assert env["a"] == IntVal(1) and env["b"] == IntVal(10)
    assert list(env) == ["fixed", "a", "b"]


def test_plan_with_no_swept_axes_yields_one_job():
    src = "parameter a integer default 1; parameter b float compute 2+3;"
    jobs = generate_jobs(expand_plan(plan_of(src), 0))
    assert len(jobs) == 1
    assert jobs[0] == Job("j1", 1, ())


def test_enumeration_matches_cartesian_product():
    src = (
        "parameter x integer range from 0 to 2;"
        'parameter s text select anyof "p" "q" default "p" "q";'
        "parameter y integer range from 5 to 6;"
    )
    axes = expand_plan(plan_of(src), 0)
    jobs = generate_jobs(axes)
    expected = list(
        itertools.product(*[[v for v in ax.values] for ax in axes if ax.swept])
    )
    assert [tuple(v for _, v in j.bindings) for j in jobs] == expected


def test_count_jobs_matches_enumeration():
    rng = random.Random(4)
    from gens import rand_plan_text

    for _ in range(30):
        plan = plan_of(rand_plan_text(rng))
        try:
            count = count_jobs(plan)
        except DiagnosticError as exc:
            assert exc.code == "E_NO_SELECTION"
            continue
        assert count == len(generate_jobs(expand_plan(plan, 3)))


def test_count_jobs_is_closed_form():
    src = (
        "parameter a integer range from 1 to 1000000000;"
        "parameter b integer range from 1 to 1000000000;"
    )
    assert count_jobs(plan_of(src)) == 10**18


def test_count_jobs_overflow():
    src = (
        "parameter a integer range from 1 to 1000000000;"
        "parameter b integer range from 1 to 1000000000;"
        "parameter c integer range from 1 to 1000000000;"
    )
    with pytest.raises(DiagnosticError) as exc:
        count_jobs(plan_of(src))
    assert exc.value.code == "E_OVERFLOW"


def test_job_environment_missing_binding():
    spec = build_runspec(plan_of(SWEEP_2X3), 0)
    broken = Job("jX", 1, (("a", IntVal(1)),))
    with pytest.raises(DiagnosticError) as exc:
        job_environment(spec, broken)
    assert exc.value.code == "E_CORRUPT"


# ── Text format ─────────────────────────────────────────────────────────


def test_text_golden():
    src = (
        "parameter t float range from 0 to 1 step 0.5;"
        'parameter tag text default "x y";'
    )
    spec = build_runspec(plan_of(src), 5)
    assert to_text_v1(spec) == (
        "runspec v1 seed=5\n"
        "values t 0 0.5 1\n"
        'values tag "x y"\n'
        "job j1 t=0\n"
        "job j2 t=0.5\n"
        "job j3 t=1\n"
    )


def test_text_roundtrip_tolerates_tag_loss():
    src = (
        'parameter lig file select anyof "a.pdb" "b.pdb" default "a.pdb" "b.pdb";'
        "parameter t float range from 0 to 1 step 0.5;"
        "parameter n integer random from 1 to 100 points 2;"
    )
    spec = build_runspec(plan_of(src), 42)
    back = parse_text_v1(to_text_v1(spec))
    assert runspec_equal(spec, back)
    # File values come back as text and whole floats as integers, so
    # strict dataclass equality is deliberately weaker than wire equality.
    assert back != spec
    assert back.axes[0].values[0] == TextVal("a.pdb")
    assert back.axes[1].values[0] == IntVal(0)


def test_text_roundtrip_exact_for_fractional_floats():
    src = "parameter t float range from 0.25 to 0.75 step 0.25;"
    spec = build_runspec(plan_of(src), 0)
    assert parse_text_v1(to_text_v1(spec)) == spec


def test_text_parses_quoted_values_with_spaces_and_escapes():
    text = (
        "runspec v1 seed=0\n"
        'values s "a b" "say \\"hi\\""\n'
        'job j1 s="a b"\n'
        'job j2 s="say \\"hi\\""\n'
    )
    spec = parse_text_v1(text)
    assert spec.axes[0].values == (TextVal("a b"), TextVal('say "hi"'))
    assert spec.jobs[1].bindings == (("s", TextVal('say "hi"')),)


def test_text_ignores_blank_lines():
    text = "runspec v1 seed=3\n\nvalues a 1\n\n\njob j1\n"
    spec = parse_text_v1(text)
    assert spec.seed == 3 and len(spec.axes) == 1 and len(spec.jobs) == 1


TEXT_CORRUPT = [
    "",
    "\n\n",
    "not a runspec\n",
    "runspec v1\n",
    "runspec v1 seed=x\n",
    "runspec v1 seed=1\nvalues a\n",
    "runspec v1 seed=1\nvalues 5x 1\n",
    "runspec v1 seed=1\nwhat a 1\n",
    "runspec v1 seed=1\njob\n",
    "runspec v1 seed=1\njob j1 a=\n",
    "runspec v1 seed=1\njob j1 noequals\n",
    'runspec v1 seed=1\nvalues a "open\n',
    'runspec v1 seed=1\nvalues a "bad\tquote\n',
]


@pytest.mark.parametrize("text", TEXT_CORRUPT)
def test_text_corrupt(text):
    with pytest.raises(DiagnosticError) as exc:
        parse_text_v1(text)
    assert exc.value.code == "E_CORRUPT"


def test_text_version_gate():
    with pytest.raises(DiagnosticError) as exc:
        parse_text_v1("runspec v2 seed=1\n")
    assert exc.value.code == "E_VERSION"


# ── JSON format ─────────────────────────────────────────────────────────


def test_json_roundtrip_is_exact():
    src = (
        'parameter lig file select anyof "a.pdb" "b.pdb" default "a.pdb" "b.pdb";'
        "parameter t float range from 0 to 1 step 0.5;"
        "parameter note text default hello;"
        "parameter n integer random from 1 to 100 points 2;"
    )
    spec = build_runspec(plan_of(src), 42)
    back = parse_json_v1(to_json_v1(spec))
    assert back == spec


def test_json_shape():
    spec = build_runspec(plan_of(SWEEP_2X3), 9)
    doc = json.loads(to_json_v1(spec))
    assert doc["version"] == 1 and doc["seed"] == 9
    assert doc["axes"][0] == {"name": "a", "values": [1, 2]}
    assert doc["jobs"][0] == {"id": "j1", "bindings": {"a": 1, "b": 10}}
    assert len(doc["jobs"]) == 6


def test_json_file_values_are_tagged_objects():
    src = 'parameter lig file default "l.pdb";'
    doc = json.loads(to_json_v1(build_runspec(plan_of(src), 0)))
    assert doc["axes"][0]["values"] == [{"file": "l.pdb"}]
    spec = parse_json_v1(to_json_v1(build_runspec(plan_of(src), 0)))
    assert spec.axes[0].values == (FileVal("l.pdb"),)


JSON_CORRUPT = [
    "",
    "[]",
    '{"version": 1}',
    '{"version": 1, "seed": true}',
    '{"version": 1, "seed": "x"}',
    '{"version": 1, "seed": 0, "axes": [{"name": "a"}]}',
    '{"version": 1, "seed": 0, "axes": [{"name": "5x", "values": [1]}]}',
    '{"version": 1, "seed": 0, "axes": [], "jobs": [{"id": "j1"}]}',
    '{"version": 1, "seed": 0, "axes": [{"name": "a", "values": [true]}]}',
    '{"version": 1, "seed": 0, "axes": [{"name": "a", "values": [[1]]}]}',
    '{"version": 1, "seed": 0, "axes": [{"name": "a", "values": [{"file": 3}]}]}',
]


@pytest.mark.parametrize("text", JSON_CORRUPT)
def test_json_corrupt(text):
    with pytest.raises(DiagnosticError) as exc:
        parse_json_v1(text)
    assert exc.value.code == "E_CORRUPT"


def test_json_version_gate():
    with pytest.raises(DiagnosticError) as exc:
        parse_json_v1('{"version": 2, "seed": 0}')
    assert exc.value.code == "E_VERSION"
    # A document without a version field is treated as an unknown version.
    with pytest.raises(DiagnosticError) as exc:
        parse_json_v1("{}")
    assert exc.value.code == "E_VERSION"


def test_json_rejects_nonfinite_on_write():
    spec = RunSpec(0, (SpecAxis("a", (RealVal(1.0),)),), ())
    assert "1.0" in to_json_v1(spec)


# ── Cross-format equality ───────────────────────────────────────────────


def test_both_formats_describe_the_same_runspec():
    rng = random.Random(11)
    from gens import rand_plan_text

    checked = 0
    for _ in range(20):
        plan = plan_of(rand_plan_text(rng))
        try:
            spec = build_runspec(plan, 77)
        except DiagnosticError as exc:
            assert exc.code == "E_NO_SELECTION"
            continue
        if len(spec.jobs) > 2000:
            continue
        assert runspec_equal(parse_text_v1(to_text_v1(spec)), spec)
        assert parse_json_v1(to_json_v1(spec)) == spec
        checked += 1
    assert checked >= 10


def test_runspec_equal_detects_differences():
    spec = build_runspec(plan_of(SWEEP_2X3), 0)
    other = build_runspec(plan_of(SWEEP_2X3), 1)
    assert not runspec_equal(spec, other)
    renamed = RunSpec(
        spec.seed,
        (SpecAxis("z", spec.axes[0].values),) + spec.axes[1:],
        spec.jobs,
    )
    assert not runspec_equal(spec, renamed)
    fewer = RunSpec(spec.seed, spec.axes, spec.jobs[:-1])
    assert not runspec_equal(spec, fewer)
    assert runspec_equal(spec, build_runspec(plan_of(SWEEP_2X3), 0))