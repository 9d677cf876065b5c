"""Smoke tests for the _rtslice module and the rtslice CLI."""

import os
import subprocess
import sys

import pytest

import _rtslice as rt

CLI = os.environ.get("RTSLICE_CLI")

CONFIG = """\
[experiment]
duration = 1000000
seed = 7
profile = C5

[slice s0]
capacity = 1.0

[task c0]
period = 10000
wcet = 900
runtime = 900

[task c1]
period = 5000
wcet = 2500
runtime = 2500
"""


def make_tasks(n=10, runtime=900, period=10_000):
    return [rt.TaskSpec(f"c{i}", period, runtime, runtime) for i in range(n)]


def test_model_basics():
    tasks = make_tasks()
    assert rt.utilization(tasks) == pytest.approx(0.9)
    assert rt.hyperperiod(tasks) == 10_000
    spec = rt.validate(tasks[0])
    assert spec.deadline == spec.period == 10_000

    with pytest.raises(ValueError):
        rt.validate(rt.TaskSpec("bad", 10_000, 900, 0))


def test_admission():
    verdict = rt.edf_feasible(make_tasks(), "1.0")
    assert verdict["accepted"]
    assert verdict["utilization"] == pytest.approx(0.9)
    assert not rt.edf_feasible(make_tasks(), "0.5")["accepted"]

    placement = rt.partition(make_tasks(), [("s0", "1.0")])
    assert len(placement["s0"]) == 10

    fit = rt.fit_runtime_distribution([900, 910])
    assert fit.mean == pytest.approx(905.0)
    assert fit.sd == pytest.approx(50.0**0.5)

    task = rt.TaskSpec("a", 10_000, 10_000, 900)
    p = rt.miss_probability(task, rt.RuntimeDistribution.normal(9_900.0, 50.0))
    assert p == pytest.approx(0.02275, abs=5e-4)

    risk = rt.admit_with_risk(
        [task],
        {"a": rt.RuntimeDistribution.normal(900.0, 1.0)},
        "none",
        0.01,
    )
    assert risk["accepted"]


def test_simulation_and_stats():
    trace = rt.simulate(make_tasks(1), profile="none", duration=100_000)
    assert trace.record_count() == 10
    assert trace.total_misses == 0
    record = trace.tasks[0].records[0]
    assert record.total == record.firing_latency + record.env_noise + record.task_noise + record.runtime

    report, trace = rt.run_testcase(1, system="C5", scale=10, duration=2_000_000)
    assert report.label == "case1-10u"
    assert report.total_misses == 0
    assert 905.0 < report.avg < 925.0

    summary = rt.summarize([900, 910, 950])
    assert summary.mean == pytest.approx(920.0)
    assert summary.median == pytest.approx(910.0)

    check = rt.threshold_check([50, 150], 1_000)
    assert check["threshold_us"] == 100.0
    assert check["overshoots"] == 1

    log = rt.write_joblog(trace)
    assert log.startswith("container,job,release_us,start_us,end_us,deadline_us,miss")
    back = rt.ingest_log(log)
    assert back.record_count() == trace.record_count()
    assert back.external


def test_config_parsing():
    config = rt.load_config(CONFIG)
    assert config["duration"] == 1_000_000
    assert config["profile"] == "C5"
    assert len(config["tasks"]) == 2
    with pytest.raises(ValueError):
        rt.load_config("[task a]\nperiod = -5\n")


@pytest.mark.skipif(CLI is None, reason="RTSLICE_CLI not set")
class TestCli:
    def run(self, *args, **kwargs):
        return subprocess.run([CLI, *args], capture_output=True, text=True, **kwargs)

    def test_plan_simulate_analyze(self, tmp_path):
        config = tmp_path / "exp.conf"
        config.write_text(CONFIG)
        log = tmp_path / "run.log"

        plan = self.run("plan", "--config", str(config))
        assert plan.returncode == 0, plan.stderr
        assert "accept" in plan.stdout

        sim = self.run("simulate", "--config", str(config), "--out", str(log))
        assert sim.returncode == 0, sim.stderr
        assert log.read_text().startswith("container,job,")

        analyze = self.run("analyze", "--log", str(log), "--cycle", "100000")
        assert analyze.returncode == 0, analyze.stderr
        assert "threshold 10000.0" in analyze.stdout

    def test_testcase_and_report(self, tmp_path):
        run = self.run("testcase", "--case", "1", "--system", "C5", "--scale", "10",
                       "--duration", "2000000", "--format", "delimited")
        assert run.returncode == 0, run.stderr
        assert run.stdout.startswith("label,avg_us,")

        table = tmp_path / "rows.csv"
        table.write_text(run.stdout)
        rendered = self.run("report", "--in", str(table))
        assert rendered.returncode == 0
        assert "case1-10u" in rendered.stdout

    def test_exit_codes(self, tmp_path):
        bad = tmp_path / "bad.conf"
        bad.write_text("[task a]\nperiod = banana\n")
        assert self.run("plan", "--config", str(bad)).returncode == 2

        overload = tmp_path / "overload.conf"
        overload.write_text(
            "[task a]\nperiod = 1000\nwcet = 800\nruntime = 800\n"
            "[task b]\nperiod = 1000\nwcet = 800\nruntime = 800\n"
        )
        assert self.run("plan", "--config", str(overload)).returncode == 1

        strict = self.run("testcase", "--case", "2", "--scale", "2", "--system", "C5",
                          "--duration", "1000000", "--strict")
        assert strict.returncode == 1
