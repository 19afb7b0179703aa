"""Command-line entry point: scrape, eval, bench, stability, fixture."""

from __future__ import annotations

import json
import logging
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import click

from .agent import AgentConfig, Toolbox, run_task
from .bench import BenchConfig, load_bench_config, load_scores, load_site_means, run_bench, scripted_provider_factory
from .metrics import score_run
from .metrics.judge import DEFAULT_TAU
from .models import (
    LANGUAGES,
    MODES,
    TaskParseError,
    ValidationError,
    load_golden,
    load_task,
    read_dataset,
    save_task,
    write_dataset,
    write_golden,
)
from .provider import HttpProvider, ProviderConfig, ScriptedProvider, load_trace
from .stability import DomainError, convergence_curve, cumulative_average, emit_plot_data, temporal_compare
from .tools import (
    HeuristicBackend,
    HostThrottle,
    HttpBrowser,
    ModelParseBackend,
    Sandbox,
    ToolError,
    ToolFatalError,
    WebDriverBrowser,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PROVIDER = 3
EXIT_TOOL_FATAL = 4
EXIT_PARTIAL = 5

_TERMINATION_EXIT = {
    "completed": EXIT_OK,
    "max_iterations": EXIT_PARTIAL,
    "provider_error": EXIT_PROVIDER,
    "tool_fatal": EXIT_TOOL_FATAL,
}


def _die(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _provider(ctx: click.Context, target_url: str):
    opts = ctx.obj
    if opts["scripted_trace"]:
        return ScriptedProvider(load_trace(opts["scripted_trace"], {"target_url": target_url}))
    return HttpProvider()


def _provider_config(ctx: click.Context, model: str | None = None) -> ProviderConfig:
    cfg = ProviderConfig(endpoint=ctx.obj["provider_endpoint"] or "")
    return replace(cfg, model=model) if model else cfg


@click.group()
@click.option("--mode", type=click.Choice(MODES), default=None, help="Agent configuration (default: the task's mode).")
@click.option("--provider-endpoint", default=None, help="URL of the model endpoint.")
@click.option("--scripted-trace", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Replay a scripted trace instead of calling a model.")
@click.option("--sandbox-root", type=click.Path(file_okay=False), default=None, help="Working directory for bash and file tools.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True, help="Sites benchmarked in parallel.")
@click.option("-v", "--verbose", count=True, help="More logging (-vv for debug).")
@click.pass_context
def main(ctx, mode, provider_endpoint, scripted_trace, sandbox_root, jobs, verbose):
    """Web scraping agent, evaluation, and stability tooling."""
    logging.basicConfig(level=[logging.WARNING, logging.INFO, logging.DEBUG][min(verbose, 2)],
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {
        "mode": mode,
        "provider_endpoint": provider_endpoint,
        "scripted_trace": scripted_trace,
        "sandbox_root": sandbox_root,
        "jobs": jobs,
    }


@main.command()
@click.argument("task_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", type=click.Path(dir_okay=False), default="dataset.json", show_default=True)
@click.option("--transcript", type=click.Path(dir_okay=False), default="transcript.jsonl", show_default=True)
@click.option("--browser", "browser_kind", type=click.Choice(["http", "webdriver"]), default="http", show_default=True)
@click.option("--webdriver-url", default="http://127.0.0.1:4444", show_default=True)
@click.option("--parse-backend", type=click.Choice(["heuristic", "model"]), default="heuristic", show_default=True)
@click.option("--model", default=None, help="Model name sent to the provider.")
@click.option("--max-iterations", type=click.IntRange(min=1), default=None)
@click.pass_context
def scrape(ctx, task_file, output, transcript, browser_kind, webdriver_url, parse_backend, model, max_iterations):
    """Run the agent on TASK_FILE and write the dataset and transcript."""
    try:
        task = load_task(task_file)
        mode = ctx.obj["mode"] or task.mode
        task = replace(task, mode=mode, max_iterations=max_iterations or task.max_iterations)
    except (ValidationError, TaskParseError) as exc:
        _die(EXIT_VALIDATION, str(exc))
    pconfig = _provider_config(ctx, model)
    if not ctx.obj["scripted_trace"] and not pconfig.endpoint:
        _die(EXIT_VALIDATION, "either --provider-endpoint or --scripted-trace is required")
    try:
        provider = _provider(ctx, task.target_url)
    except (ValueError, KeyError, OSError) as exc:
        _die(EXIT_VALIDATION, f"cannot load scripted trace: {exc}")
    throttle = HostThrottle(task.politeness_delay_ms)
    if browser_kind == "webdriver":
        try:
            browser = WebDriverBrowser(webdriver_url, throttle)
        except ToolFatalError as exc:
            _die(EXIT_TOOL_FATAL, str(exc))
        except ToolError as exc:
            _die(EXIT_TOOL_FATAL, f"cannot start a WebDriver session: {exc}")
    else:
        browser = HttpBrowser(throttle)
    backend = None
    if mode == "prompt_tool":
        backend = ModelParseBackend(provider, pconfig) if parse_backend == "model" else HeuristicBackend()
    root = ctx.obj["sandbox_root"] or tempfile.mkdtemp(prefix="webscraper-")
    try:
        toolbox = Toolbox(task, mode, browser, Sandbox(root), backend)
        dataset, tr = run_task(task, provider, toolbox, AgentConfig(mode, task.max_iterations, transcript), pconfig)
    finally:
        browser.close()
    write_dataset(dataset, output)
    code = _TERMINATION_EXIT[tr.termination]
    if code == EXIT_OK and len(dataset) == 0:
        code = EXIT_PARTIAL
    click.echo(f"termination={tr.termination} items={len(dataset)} turns={len(tr)} dataset={output} transcript={transcript}")
    if tr.error:
        click.echo(f"error: {tr.error}", err=True)
    elif code == EXIT_PARTIAL:
        click.echo("error: run produced no usable dataset", err=True)
    sys.exit(code)


@main.command("eval")
@click.argument("golden_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("dataset_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--language", type=click.Choice(LANGUAGES), default=None, help="Tokenizer (default: the golden set's).")
@click.option("--tau", type=click.FloatRange(0.0, 1.0), default=DEFAULT_TAU, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write the judgment report here.")
def eval_cmd(golden_file, dataset_file, language, tau, output):
    """Judge DATASET_FILE against GOLDEN_FILE."""
    try:
        golden = load_golden(golden_file)
        dataset = read_dataset(dataset_file)
        report = score_run(golden, dataset, language, tau)
    except (ValidationError, TaskParseError, ValueError) as exc:
        _die(EXIT_VALIDATION, str(exc))
    text = json.dumps(report.to_dict(), ensure_ascii=False, indent=2)
    if output:
        Path(output).write_text(text + "\n", encoding="utf-8")
    rs = report.run_score
    click.echo(f"score={report.score:.4f} correct={rs.n_correct}/{rs.n_golden} over_extraction={report.over_extraction}")


@main.command()
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--output-dir", type=click.Path(file_okay=False), default=None)
@click.option("--runs", type=click.IntRange(min=1), default=None, help="Override runs_per_site.")
@click.pass_context
def bench(ctx, config_file, output_dir, runs):
    """Repeated runs per site and mode; writes scores.json and summary.json."""
    try:
        config = load_bench_config(config_file, output_dir)
        if runs or ctx.obj["mode"]:
            config = BenchConfig(
                config.sites,
                runs or config.runs_per_site,
                (ctx.obj["mode"],) if ctx.obj["mode"] else config.modes,
                config.output_dir,
            )
        default_trace = None
        if ctx.obj["scripted_trace"]:
            default_trace = json.loads(Path(ctx.obj["scripted_trace"]).read_text(encoding="utf-8"))
    except (ValidationError, TaskParseError, ValueError) as exc:
        _die(EXIT_VALIDATION, str(exc))
    pconfig = _provider_config(ctx)

    def factory(site, mode):
        if pconfig.endpoint and site.trace is None and default_trace is None:
            return HttpProvider()
        if site.trace is None and default_trace is not None:
            site = replace(site, trace=default_trace)
        return scripted_provider_factory(site, mode)

    if not pconfig.endpoint and any(s.trace is None for s in config.sites) and default_trace is None:
        _die(EXIT_VALIDATION, "sites without a trace need --provider-endpoint or --scripted-trace")
    result = run_bench(config, factory, jobs=ctx.obj["jobs"], provider_config=pconfig)
    for row in result.summary():
        hw = "-" if row["half_width"] is None else f"{row['half_width']:.4f}"
        click.echo(f"{row['site']}\t{row['mode']}\truns={row['runs']}\tmean={row['mean']:.4f}\thalf_width={hw}")
    click.echo(f"wrote {config.output_dir / 'scores.json'} and {config.output_dir / 'summary.json'}")


@main.group()
def stability():
    """Run-count convergence and temporal stability reports."""


@stability.command("converge")
@click.argument("scores_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--site", default=None)
@click.option("--mode", "mode_filter", type=click.Choice(MODES), default=None)
@click.option("--step", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
def stability_converge(scores_file, site, mode_filter, step, output):
    """CI half-width at n = step, 2*step, ... for one (site, mode)."""
    try:
        scores = load_scores(scores_file, site, mode_filter)
        curve = convergence_curve(scores, step)
    except (ValidationError, DomainError, KeyError) as exc:
        _die(EXIT_VALIDATION, str(exc))
    emit_plot_data(curve, output)
    for n, hw in curve.points:
        click.echo(f"n={n}\thalf_width={hw:.4f}")


@stability.command("cumavg")
@click.argument("scores_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--site", default=None)
@click.option("--mode", "mode_filter", type=click.Choice(MODES), default=None)
@click.option("--interval", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
def stability_cumavg(scores_file, site, mode_filter, interval, output):
    """Cumulative mean score at every INTERVAL runs."""
    try:
        scores = load_scores(scores_file, site, mode_filter)
        points = cumulative_average(scores, interval)
    except (ValidationError, DomainError, KeyError) as exc:
        _die(EXIT_VALIDATION, str(exc))
    emit_plot_data(points, output)
    for n, mean in points:
        click.echo(f"n={n}\tcumulative_mean={mean:.4f}")


@stability.command("temporal")
@click.argument("scores_t", type=click.Path(exists=True, dir_okay=False))
@click.argument("scores_t7", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", "mode_filter", type=click.Choice(MODES), default=None)
@click.option("-o", "--output", type=click.Path(dir_okay=False), required=True)
def stability_temporal(scores_t, scores_t7, mode_filter, output):
    """Compare per-site scores a week apart; a site passes when |delta| < 0.05."""
    try:
        report = temporal_compare(load_site_means(scores_t, mode_filter), load_site_means(scores_t7, mode_filter))
    except (ValidationError, DomainError, KeyError) as exc:
        _die(EXIT_VALIDATION, str(exc))
    emit_plot_data(report, output)
    for row in report.rows:
        click.echo(f"{row.site}\tt={row.score_t:.3f}\tt7={row.score_t7:.3f}\tdelta={row.abs_delta:.3f}\t{'pass' if row.passed else 'FAIL'}")


@main.group()
def fixture():
    """Deterministic local test sites."""


def _load_site(spec_file):
    from .fixture import generate_site, load_spec

    try:
        return generate_site(load_spec(spec_file))
    except (ValidationError, ValueError, TypeError) as exc:
        _die(EXIT_VALIDATION, f"invalid site spec: {exc}")


@fixture.command("serve")
@click.option("--spec", "spec_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--port", type=click.IntRange(0, 65535), default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def fixture_serve(spec_file, port, host):
    """Serve a generated site until interrupted."""
    from .fixture import GOLDEN_PATH, FixtureServer, ServerStartError

    site = _load_site(spec_file)
    try:
        server = FixtureServer(site, host, port)
    except ServerStartError as exc:
        _die(EXIT_VALIDATION, str(exc))
    click.echo(f"serving {site.spec.site_id} at {server.url}{site.index_path} (golden: {server.url}{GOLDEN_PATH})")
    server.serve_forever()


@fixture.command("export")
@click.option("--spec", "spec_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--origin", required=True, help="Where the site is (or will be) served, e.g. http://127.0.0.1:8000")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), required=True)
@click.option("--politeness-delay-ms", type=click.IntRange(min=0), default=2000, show_default=True)
@click.option("--no-price-hint", is_flag=True, help="Omit the market-price hint from the trace.")
def fixture_export(spec_file, origin, out_dir, politeness_delay_ms, no_price_hint):
    """Write task.json, golden.json and trace.json for a served site."""
    from .fixture import trace_dict_for

    site = _load_site(spec_file)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_task(site.task_at(origin, politeness_delay_ms=politeness_delay_ms), out / "task.json")
    write_golden(site.golden_at(origin), out / "golden.json")
    trace = trace_dict_for(site.spec, price_hint=not no_price_hint)
    (out / "trace.json").write_text(json.dumps(trace, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
    click.echo(f"wrote task.json, golden.json, trace.json to {out}")


if __name__ == "__main__":
    main()
