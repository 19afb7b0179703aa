from __future__ import annotations

import json

import pytest
from conftest import bench_site

from webscraper.bench import (
    BenchConfig,
    BenchResult,
    RunRecord,
    load_bench_config,
    load_scores,
    load_site_means,
    run_bench,
)
from webscraper.clock import VirtualClock
from webscraper.fixture import SiteSpec
from webscraper.models import ValidationError, task_to_dict, write_golden


def _record(site, mode, run, score):
    return RunRecord(site, mode, run, score, 0, 10, 0, "completed")


def test_summary_mean_of_runs():
    result = BenchResult([_record("a", "prompt_tool", i, s) for i, s in enumerate([0.5, 0.3, 0.4])])
    (row,) = result.summary()
    assert row["mean"] == pytest.approx(0.4, abs=1e-12)
    assert row["runs"] == 3 and row["half_width"] > 0


def test_repeated_runs_score_identically(link_site, tmp_path):
    config = BenchConfig((bench_site(link_site, 0),), 3, output_dir=tmp_path)
    result = run_bench(config, clock=VirtualClock())
    scores = result.scores(bench_site(link_site).name, "prompt_tool")
    assert scores == [1.0, 1.0, 1.0]
    assert result.summary()[0]["mean"] == 1.0
    assert result.summary()[0]["half_width"] == 0.0
    run_dir = tmp_path / bench_site(link_site).name / "prompt_tool" / "run_0"
    assert {p.name for p in run_dir.iterdir()} >= {"transcript.jsonl", "dataset.json", "report.json"}


def test_full_matrix_counts(serve_site, tmp_path):
    a = serve_site(SiteSpec(21, 2, 3))
    b = serve_site(SiteSpec(22, 2, 3, "noisy_ads"))
    config = BenchConfig(
        (bench_site(a, 0), bench_site(b, 0)), 2, ("baseline", "prompt_only", "prompt_tool"), tmp_path
    )
    result = run_bench(config, jobs=2, clock=VirtualClock())
    assert len(result.records) == 12
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert len(summary) == 6
    assert {(r["site"], r["mode"]) for r in summary} == {
        (s, m) for s in ("link_pagination-english-21", "noisy_ads-english-22") for m in config.modes
    }
    means = {(r["site"], r["mode"]): r["mean"] for r in summary}
    assert all(means[(s, "prompt_tool")] == 1.0 for s in ("link_pagination-english-21", "noisy_ads-english-22"))
    assert all(means[(s, m)] < 1.0 for s, m in means if m != "prompt_tool")
    assert len(json.loads((tmp_path / "scores.json").read_text())) == 12


def test_runs_do_not_share_cookies(serve_site, tmp_path):
    srv = serve_site(SiteSpec(23, 2, 2))
    config = BenchConfig((bench_site(srv, 0),), 3, output_dir=tmp_path)
    run_bench(config, clock=VirtualClock())
    log = srv.requests
    # a run's first request is the only one sent without the cookie set by the index page
    fresh = [i for i, r in enumerate(log) if r.cookie is None]
    assert len(fresh) == 3 and fresh[0] == 0
    assert all(log[i].path == "/list/1.html" for i in fresh)
    # every cookie a run sends was issued during that run (the server numbers visits in order)
    issued = [r.path.startswith("/list/") for r in log]
    bounds = fresh + [len(log)]
    for start, end in zip(bounds, bounds[1:]):
        issued_before = sum(issued[:start])
        assert all(int(r.cookie.split("=")[1]) > issued_before for r in log[start + 1 : end])


def test_failing_provider_scores_zero_without_aborting(link_site, tmp_path):
    def factory(site, mode):
        raise RuntimeError("no model configured")

    config = BenchConfig((bench_site(link_site, 0),), 2, output_dir=tmp_path)
    result = run_bench(config, factory, clock=VirtualClock())
    assert [r.score for r in result.records] == [0.0, 0.0]
    assert all(r.termination == "provider_error" for r in result.records)


def test_config_validation():
    with pytest.raises(ValidationError):
        BenchConfig((), 3)


def test_config_file_resolves_relative_paths(link_site, tmp_path):
    site = bench_site(link_site)
    (tmp_path / "task.json").write_text(json.dumps(task_to_dict(site.task)))
    write_golden(site.golden, tmp_path / "golden.json")
    (tmp_path / "trace.json").write_text(json.dumps(site.trace))
    cfg = {"sites": [{"task": "task.json", "golden": "golden.json", "trace": "trace.json"}], "runs_per_site": 4, "modes": ["baseline"]}
    (tmp_path / "bench.json").write_text(json.dumps(cfg))
    config = load_bench_config(tmp_path / "bench.json")
    assert config.runs_per_site == 4 and config.modes == ("baseline",)
    assert config.sites[0].task == site.task
    assert config.output_dir == tmp_path / "bench-out"
    cfg["sites"][0]["golden"] = "missing.json"
    (tmp_path / "bench.json").write_text(json.dumps(cfg))
    with pytest.raises(ValidationError, match="missing"):
        load_bench_config(tmp_path / "bench.json")


def test_score_loaders(tmp_path):
    result = BenchResult([_record("a", "baseline", 1, 0.2), _record("a", "baseline", 0, 0.1), _record("b", "baseline", 0, 0.5)])
    (tmp_path / "scores.json").write_text(json.dumps([r.__dict__ for r in result.records]))
    (tmp_path / "summary.json").write_text(json.dumps(result.summary()))
    assert load_scores(tmp_path / "scores.json", site="a") == [0.1, 0.2]
    with pytest.raises(ValidationError):
        load_scores(tmp_path / "scores.json")
    assert load_site_means(tmp_path / "summary.json") == pytest.approx({"a": 0.15, "b": 0.5})
