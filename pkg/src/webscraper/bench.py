"""Repeated benchmark runs over sites and agent modes."""

from __future__ import annotations

import json
import logging
import shutil
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Mapping

from .agent import AgentConfig, Toolbox, run_task
from .clock import SystemClock
from .metrics import score_run
from .models import (
    LANGUAGES,
    MODES,
    Dataset,
    GoldenSet,
    ScrapeTask,
    ValidationError,
    load_golden,
    load_task,
    write_dataset,
)
from .provider.messages import ProviderConfig, ProviderError
from .provider.scripted import ScriptedProvider, trace_from_dict
from .stability import ci_half_width
from .tools.browser import Browser, HttpBrowser
from .tools.parse import HeuristicBackend, ParseBackend
from .tools.politeness import HostThrottle
from .tools.sandbox import Sandbox
from .urls import host_of

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchSite:
    name: str
    task: ScrapeTask
    golden: GoldenSet
    language: str | None = None
    # raw scripted trace with ``${target_url}`` placeholders, if runs are scripted
    trace: Mapping[str, Any] | None = None


@dataclass(frozen=True)
class BenchConfig:
    sites: tuple[BenchSite, ...]
    runs_per_site: int = 30
    modes: tuple[str, ...] = ("prompt_tool",)
    output_dir: Path = Path("bench-out")

    def __post_init__(self) -> None:
        object.__setattr__(self, "sites", tuple(self.sites))
        object.__setattr__(self, "modes", tuple(self.modes))
        object.__setattr__(self, "output_dir", Path(self.output_dir))
        if self.runs_per_site < 1:
            raise ValidationError("runs_per_site must be >= 1")
        if not self.sites:
            raise ValidationError("bench needs at least one site")
        if not self.modes or any(m not in MODES for m in self.modes):
            raise ValidationError(f"modes must be a non-empty subset of {MODES}")
        names = [s.name for s in self.sites]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate site names in {names}")


def load_bench_config(path: str | Path, output_dir: str | Path | None = None) -> BenchConfig:
    """Read a JSON bench config; relative file paths resolve against its directory.

    ``{"sites": [{"task": ..., "golden": ..., "language": ..., "trace": ..., "name": ...}],
    "runs_per_site": 30, "modes": ["prompt_tool"], "output_dir": "..."}``
    """
    path = Path(path)
    base = path.parent
    data = json.loads(path.read_text(encoding="utf-8"))

    def resolve(p: str) -> Path:
        full = (base / p) if not Path(p).is_absolute() else Path(p)
        if not full.exists():
            raise ValidationError(f"bench config references missing file {p!r}")
        return full

    sites = []
    for i, entry in enumerate(data.get("sites", [])):
        for key in ("task", "golden"):
            if key not in entry:
                raise ValidationError(f"site {i} lacks {key!r}")
        golden = load_golden(resolve(entry["golden"]))
        language = entry.get("language")
        if language is not None and language not in LANGUAGES:
            raise ValidationError(f"site {i}: language must be one of {LANGUAGES}")
        trace = json.loads(resolve(entry["trace"]).read_text(encoding="utf-8")) if entry.get("trace") else None
        sites.append(
            BenchSite(entry.get("name") or golden.site_id, load_task(resolve(entry["task"])), golden, language, trace)
        )
    modes = data.get("modes") or [data.get("mode", "prompt_tool")]
    out = output_dir if output_dir is not None else data.get("output_dir", "bench-out")
    out = Path(out) if Path(out).is_absolute() or output_dir is not None else base / out
    return BenchConfig(tuple(sites), int(data.get("runs_per_site", 30)), tuple(modes), out)


@dataclass(frozen=True)
class RunRecord:
    site: str
    mode: str
    run: int
    score: float
    n_correct: int
    n_golden: int
    over_extraction: int
    termination: str
    error: str = ""


@dataclass
class BenchResult:
    records: list[RunRecord] = field(default_factory=list)

    def scores(self, site: str, mode: str) -> list[float]:
        return [r.score for r in sorted(self.records, key=lambda r: r.run) if r.site == site and r.mode == mode]

    def summary(self) -> list[dict[str, Any]]:
        """Mean score (and CI half-width when there are 2+ runs) per (site, mode)."""
        groups: dict[tuple[str, str], list[float]] = defaultdict(list)
        for r in sorted(self.records, key=lambda r: (r.site, r.mode, r.run)):
            groups[(r.site, r.mode)].append(r.score)
        rows = []
        for (site, mode), scores in groups.items():
            rows.append(
                {
                    "site": site,
                    "mode": mode,
                    "runs": len(scores),
                    "mean": sum(scores) / len(scores),
                    "half_width": ci_half_width(scores) if len(scores) >= 2 else None,
                }
            )
        return rows


ProviderFactory = Callable[[BenchSite, str], Any]
BrowserFactory = Callable[[HostThrottle], Browser]


def scripted_provider_factory(site: BenchSite, mode: str) -> ScriptedProvider:
    if site.trace is None:
        raise ValidationError(f"site {site.name!r} has no scripted trace")
    return ScriptedProvider(trace_from_dict(site.trace, {"target_url": site.task.target_url}))


def _run_dir(output_dir: Path, site: str, mode: str, run: int) -> Path:
    return output_dir / site / mode / f"run_{run}"


def run_once(
    site: BenchSite,
    mode: str,
    run: int,
    output_dir: Path,
    provider,
    throttle: HostThrottle,
    *,
    browser_factory: BrowserFactory | None = None,
    backend: ParseBackend | None = None,
    provider_config: ProviderConfig | None = None,
    clock=None,
) -> RunRecord:
    """One isolated run: fresh browser session and sandbox, artifacts under ``run_N/``."""
    run_dir = _run_dir(output_dir, site.name, mode, run)
    if run_dir.exists():
        shutil.rmtree(run_dir)
    run_dir.mkdir(parents=True)
    task = replace(site.task, mode=mode)
    browser = browser_factory(throttle) if browser_factory else HttpBrowser(throttle)
    termination, error = "error", ""
    dataset = Dataset(task.task_id, (), task.fields)
    try:
        toolbox = Toolbox(
            task, mode, browser, Sandbox(run_dir / "sandbox"), (backend or HeuristicBackend()) if mode == "prompt_tool" else None
        )
        config = AgentConfig(mode, task.max_iterations, run_dir / "transcript.jsonl")
        dataset, transcript = run_task(task, provider, toolbox, config, provider_config, clock)
        termination, error = transcript.termination or "error", transcript.error
    except Exception as exc:  # a broken run scores zero but never stops the batch
        logger.exception("run %s/%s/%d failed", site.name, mode, run)
        error = f"{type(exc).__name__}: {exc}"
    finally:
        browser.close()
    write_dataset(dataset, run_dir / "dataset.json")
    report = score_run(site.golden, dataset, site.language, run=run)
    (run_dir / "report.json").write_text(json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    rs = report.run_score
    return RunRecord(site.name, mode, run, report.score, rs.n_correct, rs.n_golden, report.over_extraction, termination, error)


def run_bench(
    config: BenchConfig,
    provider_factory: ProviderFactory = scripted_provider_factory,
    *,
    jobs: int = 1,
    browser_factory: BrowserFactory | None = None,
    backend_factory: Callable[[], ParseBackend] = HeuristicBackend,
    provider_config: ProviderConfig | None = None,
    clock=None,
) -> BenchResult:
    """Run every (site, mode) ``runs_per_site`` times and write scores and summary.

    Sites may run in parallel up to ``jobs``; runs against one site stay
    sequential and share a per-host throttle so politeness holds across runs.
    """
    clock = clock or SystemClock()
    throttles: dict[str, HostThrottle] = {}
    for s in config.sites:
        throttles.setdefault(host_of(s.task.target_url), HostThrottle(s.task.politeness_delay_ms, clock))

    def site_runs(site: BenchSite) -> list[RunRecord]:
        throttle = throttles[host_of(site.task.target_url)]
        out = []
        for mode in config.modes:
            for run in range(config.runs_per_site):
                try:
                    provider = provider_factory(site, mode)
                except Exception as exc:
                    logger.error("cannot build provider for %s/%s: %s", site.name, mode, exc)
                    provider = _FailingProvider(str(exc))
                out.append(
                    run_once(
                        site,
                        mode,
                        run,
                        config.output_dir,
                        provider,
                        throttle,
                        browser_factory=browser_factory,
                        backend=backend_factory(),
                        provider_config=provider_config,
                        clock=clock,
                    )
                )
        return out

    config.output_dir.mkdir(parents=True, exist_ok=True)
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        per_site = list(pool.map(site_runs, config.sites))
    result = BenchResult([r for runs in per_site for r in runs])
    write_bench_outputs(result, config.output_dir)
    return result


class _FailingProvider:
    def __init__(self, message: str):
        self.message = message

    def complete(self, *args, **kwargs):
        raise ProviderError(self.message)


def write_bench_outputs(result: BenchResult, output_dir: Path) -> None:
    (output_dir / "scores.json").write_text(
        json.dumps([asdict(r) for r in result.records], indent=2) + "\n", encoding="utf-8"
    )
    (output_dir / "summary.json").write_text(json.dumps(result.summary(), indent=2) + "\n", encoding="utf-8")


def load_scores(path: str | Path, site: str | None = None, mode: str | None = None) -> list[float]:
    """Run scores from ``scores.json`` (bench output) or a plain JSON list of numbers."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, list) and all(isinstance(x, (int, float)) for x in data):
        return [float(x) for x in data]
    if not isinstance(data, list):
        raise ValidationError(f"{path}: expected a JSON list")
    rows = [r for r in data if (site is None or r["site"] == site) and (mode is None or r["mode"] == mode)]
    pairs = {(r["site"], r["mode"]) for r in rows}
    if len(pairs) > 1:
        raise ValidationError(f"{path}: scores for several (site, mode) pairs {sorted(pairs)}; pass --site/--mode")
    return [float(r["score"]) for r in sorted(rows, key=lambda r: r["run"])]


def load_site_means(path: str | Path, mode: str | None = None) -> dict[str, float]:
    """Per-site mean score from a bench ``summary.json`` or a plain ``{site: score}`` object."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        return {str(k): float(v) for k, v in data.items()}
    rows = [r for r in data if mode is None or r["mode"] == mode]
    modes = {r["mode"] for r in rows}
    if len(modes) > 1:
        raise ValidationError(f"{path}: several modes {sorted(modes)}; pass --mode")
    return {r["site"]: float(r["mean"]) for r in rows}

