"""Sweep executor tests, run against temporary working directories."""

import pytest

from plansweep.diagnostics import DiagnosticError
from plansweep.executor import FAILED, OK, SKIPPED, run_sweep
from plansweep.jobs import build_runspec, parse_text_v1, runspec_equal
from plansweep.parser import parse_plan
from plansweep.project import Project

PLAN_2X2 = (
    "parameter alpha integer range from 1 to 2;\n"
    "parameter beta integer select anyof 10 20 default 10 20;\n"
    "task main\n"
    "    substitute root:conf.skel conf.run\n"
    "endtask\n"
)


def project_2x2(seed=0):
    return Project(
        plan_text=PLAN_2X2,
        files={"conf.skel": "a=${alpha} b=${beta} job=${jobname}\n"},
        seed=seed,
    )


def test_happy_path_layout_and_artifacts(tmp_path):
    wd = tmp_path / "run"
    report = run_sweep(project_2x2(), wd)
    assert report.ok
    assert [j.job_id for j in report.jobs] == ["j1", "j2", "j3", "j4"]
    assert all(j.status == OK and j.node == 1 for j in report.jobs)
    assert all(j.duration >= 0 for j in report.jobs)

    assert (wd / "root" / "conf.skel").exists()
    expect = {
        "j1": "a=1 b=10 job=j1\n",
        "j2": "a=1 b=20 job=j2\n",
        "j3": "a=2 b=10 job=j3\n",
        "j4": "a=2 b=20 job=j4\n",
    }
    for job_id, content in expect.items():
        assert (wd / "node1" / job_id / "conf.run").read_text() == content

    spec = parse_text_v1((wd / "runspec.txt").read_text())
    wanted = build_runspec(parse_plan(PLAN_2X2).plan, 0)
    assert runspec_equal(spec, wanted)


def test_round_robin_node_assignment(tmp_path):
    report = run_sweep(project_2x2(), tmp_path / "run", workers=3)
    assert report.ok
    assert [(j.job_id, j.node) for j in report.jobs] == [
        ("j1", 1),
        ("j2", 2),
        ("j3", 3),
        ("j4", 1),
    ]
    assert (tmp_path / "run" / "node2" / "j2" / "conf.run").exists()


def test_worker_count_does_not_change_job_outputs(tmp_path):
    outputs = []
    for workers in (1, 3):
        wd = tmp_path / f"w{workers}"
        report = run_sweep(project_2x2(seed=5), wd, workers=workers)
        assert report.ok
        got = {}
        for job in report.jobs:
            path = wd / f"node{job.node}" / job.job_id / "conf.run"
            got[job.job_id] = path.read_text()
        outputs.append(got)
    assert outputs[0] == outputs[1]


def test_environment_export(tmp_path):
    proj = Project(
        plan_text=(
            'parameter n_atoms integer default 42;\n'
            'parameter tag text default "x y";\n'
            "task main\n"
            '    execute printf \'%s|%s|%s|%s\\n\' "$VPT_N_ATOMS" "$VPT_TAG" '
            '"$VPT_JOBNAME" "$VPT_NODENAME" > env.out\n'
            "endtask\n"
        ),
    )
    wd = tmp_path / "run"
    report = run_sweep(proj, wd)
    assert report.ok
    assert (wd / "node1" / "j1" / "env.out").read_text() == "42|x y|j1|node1\n"


def test_all_phases_in_order(tmp_path):
    proj = Project(
        plan_text=(
            "parameter i integer range from 1 to 4;\n"
            "task rootstart\n"
            "    execute echo shared > staged.txt\n"
            "endtask\n"
            "task nodestart\n"
            "    copy root:staged.txt local.txt\n"
            "endtask\n"
            "task main\n"
            "    copy node:local.txt got.txt\n"
            "endtask\n"
            "task nodefinish\n"
            "    execute ls -d j*/got.txt | wc -l > count.txt\n"
            "endtask\n"
            "task rootfinish\n"
            "    execute echo done > finished.txt\n"
            "endtask\n"
        ),
    )
    wd = tmp_path / "run"
    report = run_sweep(proj, wd, workers=2)
    assert report.ok, (report.phase_errors, report.jobs)
    assert (wd / "root" / "staged.txt").read_text() == "shared\n"
    for node in ("node1", "node2"):
        assert (wd / node / "local.txt").read_text() == "shared\n"
        assert (wd / node / "count.txt").read_text().strip() == "2"
    for job in report.jobs:
        assert (wd / f"node{job.node}" / job.job_id / "got.txt").exists()
    assert (wd / "root" / "finished.txt").read_text() == "done\n"


def test_main_failure_is_contained(tmp_path):
    proj = Project(
        plan_text=(
            "parameter i integer range from 1 to 3;\n"
            "task main\n"
            "    execute test \"$VPT_I\" != 2\n"
            "    execute echo ran > out.txt\n"
            "endtask\n"
        ),
    )
    report = run_sweep(proj, tmp_path / "run")
    assert not report.ok
    statuses = {j.job_id: j.status for j in report.jobs}
    assert statuses == {"j1": OK, "j2": FAILED, "j3": OK}
    failed = next(j for j in report.jobs if j.status == FAILED)
    assert "exited with status 1" in failed.detail
    assert not (tmp_path / "run" / "node1" / "j2" / "out.txt").exists()
    assert (tmp_path / "run" / "node1" / "j3" / "out.txt").exists()


def test_nodestart_failure_skips_that_node_only(tmp_path):
    proj = Project(
        plan_text=(
            "parameter i integer range from 1 to 4;\n"
            "task nodestart\n"
            "    execute test \"$VPT_NODENAME\" != node2\n"
            "    execute echo ok > started.txt\n"
            "endtask\n"
            "task main\n"
            "    execute echo ran > out.txt\n"
            "endtask\n"
            "task nodefinish\n"
            "    execute echo fin > finished.txt\n"
            "endtask\n"
        ),
    )
    wd = tmp_path / "run"
    report = run_sweep(proj, wd, workers=2)
    by_id = {j.job_id: j for j in report.jobs}
    assert by_id["j1"].status == OK and by_id["j3"].status == OK
    assert by_id["j2"].status == SKIPPED and by_id["j4"].status == SKIPPED
    assert by_id["j2"].detail == "nodestart failed"
    assert [(e.phase, e.node) for e in report.phase_errors] == [("nodestart", 2)]
    # The failed node ran neither its jobs nor its finish phase.
    assert not (wd / "node2" / "j2").exists()
    assert not (wd / "node2" / "finished.txt").exists()
    assert (wd / "node1" / "finished.txt").exists()


def test_rootstart_failure_skips_everything(tmp_path):
    proj = Project(
        plan_text=(
            "parameter i integer range from 1 to 4;\n"
            "task rootstart\n"
            "    execute false\n"
            "endtask\n"
            "task main\n"
            "    execute echo ran > out.txt\n"
            "endtask\n"
        ),
    )
    wd = tmp_path / "run"
    report = run_sweep(proj, wd, workers=2)
    assert [e.phase for e in report.phase_errors] == ["rootstart"]
    assert [j.status for j in report.jobs] == [SKIPPED] * 4
    # Jobs keep their node assignment even when skipped.
    assert [j.node for j in report.jobs] == [1, 2, 1, 2]
    assert not (wd / "node1").exists()


def test_rootfinish_failure_reported_after_jobs_ran(tmp_path):
    proj = Project(
        plan_text=(
            "task main\n"
            "    execute echo ran > out.txt\n"
            "endtask\n"
            "task rootfinish\n"
            "    execute false\n"
            "endtask\n"
        ),
    )
    report = run_sweep(proj, tmp_path / "run")
    assert [j.status for j in report.jobs] == [OK]
    assert [e.phase for e in report.phase_errors] == ["rootfinish"]
    assert not report.ok


def test_missing_main_task(tmp_path):
    proj = Project(plan_text="parameter i integer default 1;\n")
    with pytest.raises(DiagnosticError) as exc:
        run_sweep(proj, tmp_path / "run")
    assert exc.value.code == "E_NO_MAIN"


def test_invalid_plan_text(tmp_path):
    with pytest.raises(DiagnosticError) as exc:
        run_sweep(Project(plan_text="parameter ;"), tmp_path / "run")
    assert exc.value.code == "E_PARSE"


def test_workdir_must_be_empty(tmp_path):
    wd = tmp_path / "run"
    wd.mkdir()
    (wd / "leftover.txt").write_text("x")
    with pytest.raises(DiagnosticError) as exc:
        run_sweep(project_2x2(), wd)
    assert exc.value.code == "E_WORKDIR"
    # An existing empty directory is fine.
    wd2 = tmp_path / "empty"
    wd2.mkdir()
    assert run_sweep(project_2x2(), wd2).ok


def test_bad_worker_count(tmp_path):
    with pytest.raises(ValueError):
        run_sweep(project_2x2(), tmp_path / "run", workers=0)


def test_shared_staging_is_read_only(tmp_path):
    proj = Project(
        plan_text=(
            "task main\n"
            "    execute echo x > mine.txt\n"
            "    copy mine.txt root:stolen.txt\n"
            "endtask\n"
        ),
    )
    report = run_sweep(proj, tmp_path / "run")
    assert report.jobs[0].status == FAILED
    assert "read-only" in report.jobs[0].detail
    assert not (tmp_path / "run" / "root" / "stolen.txt").exists()


def test_paths_cannot_escape_their_sandbox(tmp_path):
    cases = [
        ("copy root:../../outside.txt here.txt", "escapes"),
        ("copy ../sibling.txt here.txt", "escapes"),
        ("execute true\n    copy /etc/hostname here.txt", "absolute"),
    ]
    for i, (line, needle) in enumerate(cases):
        proj = Project(plan_text=f"task main\n    {line}\nendtask\n")
        report = run_sweep(proj, tmp_path / f"run{i}")
        assert report.jobs[0].status == FAILED
        assert needle in report.jobs[0].detail


def test_copy_missing_source(tmp_path):
    proj = Project(plan_text="task main\n    copy root:ghost.txt out.txt\nendtask\n")
    report = run_sweep(proj, tmp_path / "run")
    assert report.jobs[0].status == FAILED
    assert "not found" in report.jobs[0].detail


def test_substitute_unbound_placeholder_fails_with_location(tmp_path):
    proj = Project(
        plan_text="task main\n    substitute root:c.skel c.run\nendtask\n",
        files={"c.skel": "ok line\nv=${missing}\n"},
    )
    report = run_sweep(proj, tmp_path / "run")
    assert report.jobs[0].status == FAILED
    assert "E_UNBOUND" in report.jobs[0].detail
    assert "c.skel:2:3" in report.jobs[0].detail


def test_execute_timeout(tmp_path):
    proj = Project(plan_text="task main\n    execute sleep 3\nendtask\n")
    report = run_sweep(proj, tmp_path / "run", timeout=0.2)
    assert report.jobs[0].status == FAILED
    assert "timed out" in report.jobs[0].detail


def test_time_budget_covers_whole_task(tmp_path):
    proj = Project(
        plan_text=(
            "task main\n"
            "    execute sleep 0.3\n"
            "    execute sleep 0.3\n"
            "    execute echo done > out.txt\n"
            "endtask\n"
        ),
    )
    report = run_sweep(proj, tmp_path / "run", timeout=0.45)
    assert report.jobs[0].status == FAILED
    assert "timed out" in report.jobs[0].detail
    assert not (tmp_path / "run" / "node1" / "j1" / "out.txt").exists()


def test_task_log_captures_output(tmp_path):
    proj = Project(
        plan_text=(
            "task main\n"
            "    execute echo to stdout\n"
            "    execute echo to stderr >&2\n"
            "endtask\n"
        ),
    )
    report = run_sweep(proj, tmp_path / "run")
    assert report.ok
    log = (tmp_path / "run" / "node1" / "j1" / "task.log").read_text()
    assert "to stdout" in log and "to stderr" in log


def test_single_job_plan_without_parameters(tmp_path):
    proj = Project(plan_text="task main\n    execute echo hi > hi.txt\nendtask\n")
    report = run_sweep(proj, tmp_path / "run")
    assert report.ok
    assert [j.job_id for j in report.jobs] == ["j1"]
    assert (tmp_path / "run" / "node1" / "j1" / "hi.txt").read_text() == "hi\n"
