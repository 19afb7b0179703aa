from __future__ import annotations

import sys
import tempfile
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from webscraper.agent import AgentConfig, Toolbox, run_task  # noqa: E402
from webscraper.clock import VirtualClock  # noqa: E402
from webscraper.fixture import FixtureServer, SiteSpec, generate_site, scripted_trace_for  # noqa: E402
from webscraper.provider import ScriptedProvider  # noqa: E402
from webscraper.tools import HeuristicBackend, HostThrottle, HttpBrowser, Sandbox  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def serve_site():
    """Factory: generate and serve a fixture site; servers stop at teardown."""
    servers = []

    def _serve(spec: SiteSpec) -> FixtureServer:
        srv = FixtureServer(generate_site(spec)).start()
        servers.append(srv)
        return srv

    yield _serve
    for srv in servers:
        srv.stop()


@pytest.fixture(scope="session")
def link_site():
    """The standard 2 pages x 5 items link_pagination site, served once per session."""
    srv = FixtureServer(generate_site(SiteSpec(7, 2, 5, "link_pagination"))).start()
    yield srv
    srv.stop()


def scripted_run(srv: FixtureServer, mode: str = "prompt_tool", delay_ms: int = 200, trace=None, clock=None, **kw):
    """One agent run on a served fixture with a virtual clock; returns (dataset, transcript)."""
    clock = clock or VirtualClock()
    site = srv.site
    task = site.task_at(srv.url, mode=mode, politeness_delay_ms=delay_ms)
    trace = trace or scripted_trace_for(site.spec, task.target_url, **kw)
    browser = HttpBrowser(HostThrottle(delay_ms, clock))
    backend = HeuristicBackend() if mode == "prompt_tool" else None
    toolbox = Toolbox(task, mode, browser, Sandbox(tempfile.mkdtemp(prefix="ws-test-")), backend)
    try:
        return run_task(task, ScriptedProvider(trace), toolbox, AgentConfig(mode), clock=clock)
    finally:
        browser.close()


def bench_site(srv: FixtureServer, delay_ms: int = 200, name: str | None = None):
    """A BenchSite for a served fixture, scripted with its five-stage trace."""
    from webscraper.bench import BenchSite
    from webscraper.fixture import trace_dict_for

    site = srv.site
    return BenchSite(
        name or site.spec.site_id,
        site.task_at(srv.url, politeness_delay_ms=delay_ms),
        site.golden_at(srv.url),
        site.spec.language,
        trace_dict_for(site.spec),
    )


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
