"""Acceptance criteria, one check each, with a PASS/FAIL line per criterion.

The lines are echoed in the pytest terminal summary; run this file directly
to see them inline.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

import numpy as np
import pytest
from conftest import bench_site, scripted_run

from oracles import lcs_table, rouge_exact
from test_merge import _check_properties, _random_batches
from webscraper.agent import read_transcript_events
from webscraper.bench import BenchConfig, run_bench
from webscraper.clock import SystemClock
from webscraper.fixture import SiteSpec
from webscraper.metrics import rouge_l, score_run
from webscraper.metrics.judge import ItemJudgment
from webscraper.stability import ci_half_width, temporal_compare

RESULTS: list[str] = []


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {criterion}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_rouge_matches_bruteforce_oracle():
    rng = random.Random(1000)
    pairs = []
    for _ in range(1000):
        vocab = rng.randrange(2, 9)
        x = [f"w{rng.randrange(vocab)}" for _ in range(rng.randrange(0, 31))]
        y = [f"w{rng.randrange(vocab)}" for _ in range(rng.randrange(0, 31))]
        pairs.append((x, y))
    start = time.perf_counter()
    scores = [rouge_l(x, y) for x, y in pairs]
    elapsed = time.perf_counter() - start
    lcs_bad = sum(s.lcs_len != lcs_table(x, y) for s, (x, y) in zip(scores, pairs))
    worst = 0.0
    for s, (x, y) in zip(scores, pairs):
        r, p, f = rouge_exact(x, y)
        worst = max(worst, abs(s.recall - float(r)), abs(s.precision - float(p)), abs(s.f1 - float(f)))
    ok = lcs_bad == 0 and worst <= 1e-12 and elapsed < 5.0
    report("ROUGE-L oracle equivalence", ok, f"1000 pairs, LCS mismatches={lcs_bad}, max |dR,dP,dF|={worst:.1e}, {elapsed:.2f}s")


def test_rouge_formula_cases():
    ident = rouge_l(list("abc"), list("abc")).f1
    disjoint = rouge_l(list("ab"), list("cd")).f1
    x, y = "the cat sat on the mat".split(), "the cat on the mat".split()
    f = rouge_l(x, y).f1
    assert rouge_exact(x, y)[2] == Fraction(10, 11)
    ok = ident == 1.0 and disjoint == 0.0 and abs(f - 10 / 11) <= 1e-12
    report("ROUGE-L formula cases", ok, f"identity F={ident}, disjoint F={disjoint}, 6/5-token F={f!r} (10/11)")


def test_correctness_threshold():
    at = ItemJudgment("u", True, 0.8, 1.0).correct
    below = ItemJudgment("u", True, 0.799, 1.0).correct
    # real text at exactly 0.8: 5-token reference, 5-token candidate, LCS 4
    real = rouge_l("a b c d e".split(), "a b c d z".split()).f1
    rng = random.Random(421)
    violations = 0
    for _ in range(200):
        j = ItemJudgment("u", True, rng.random(), rng.random())
        lo, hi = sorted((rng.random(), rng.random()))
        if ItemJudgment("u", True, j.title_f1, j.content_f1, tau=hi).correct and not ItemJudgment(
            "u", True, j.title_f1, j.content_f1, tau=lo
        ).correct:
            violations += 1
    ok = at and not below and real == 0.8 and violations == 0
    report("Correctness threshold", ok, f"0.8 correct={at}, 0.799 correct={below}, monotonicity violations={violations}/200")


def test_temporal_deltas():
    rep = temporal_compare({"s1": 0.511, "s2": 0.648, "s3": 0.820}, {"s1": 0.533, "s2": 0.673, "s3": 0.820})
    deltas = [rep.row(s).abs_delta for s in ("s1", "s2", "s3")]
    ok = deltas == [0.022, 0.025, 0.0] and rep.all_pass
    report("Temporal stability deltas", ok, f"deltas={deltas}, all below 0.05={rep.all_pass}")


def test_ci_half_width():
    const = ci_half_width([0.7] * 12)
    two = ci_half_width([0.0, 1.0])
    rng = np.random.default_rng(100)
    bad = 0
    for _ in range(100):
        v = rng.random(rng.integers(2, 40))
        c = float(rng.uniform(-5, 5))
        hw = ci_half_width(v)
        if not np.isclose(ci_half_width(v * c), abs(c) * hw, rtol=1e-9, atol=1e-12):
            bad += 1
        if not np.isclose(ci_half_width(v + c), hw, rtol=1e-7, atol=1e-12):
            bad += 1
    ok = const == 0.0 and abs(two - 6.353) <= 1e-3 and bad == 0
    report("CI half-width", ok, f"constant={const}, [0,1]={two:.4f}, property violations={bad}/200")


def test_convergence_narrows():
    scores = np.random.default_rng(2).binomial(1, 0.5, 30).astype(float)
    h10, h30 = ci_half_width(scores[:10]), ci_half_width(scores)
    report("Run-count convergence", h30 < h10, f"seed 2 Bernoulli(0.5): half-width n=10 {h10:.4f}, n=30 {h30:.4f}")


def test_merge_properties():
    rng = random.Random(500)
    bad = [v for _ in range(500) for v in _check_properties(_random_batches(rng))]
    report("Merge Tool properties", not bad, f"500 configurations, violations={len(bad)} {sorted(set(bad))}")


def test_end_to_end_pipeline(link_site):
    start = time.perf_counter()
    golden = link_site.site.golden_at(link_site.url)
    runs = [scripted_run(link_site) for _ in range(3)]
    elapsed = time.perf_counter() - start
    scores = [score_run(golden, ds).score for ds, _ in runs]
    identical = len({tr.to_jsonl() for _, tr in runs}) == 1
    ok = scores == [1.0] * 3 and identical and elapsed < 30
    report("End-to-end pipeline", ok, f"scores={scores}, byte-identical transcripts={identical}, {elapsed:.2f}s")


def test_mode_separation(link_site):
    golden = link_site.site.golden_at(link_site.url)
    ds, tr = scripted_run(link_site, mode="baseline")
    score = score_run(golden, ds).score
    unknown = "unknown tool" in tr.to_jsonl()
    report("Mode separation", score < 1.0 and unknown, f"baseline score={score}, unknown-tool error in transcript={unknown}")


def test_multi_price_ambiguity(serve_site):
    wrong_sites, hinted_ok = 0, 0
    for seed in (1, 2, 3):
        srv = serve_site(SiteSpec(seed, 2, 4, "multi_price"))
        golden = [g.extra["price"] for g in srv.site.golden_at(srv.url).items]
        plain, _ = scripted_run(srv, price_hint=False)
        hinted, _ = scripted_run(srv, price_hint=True)
        wrong_sites += [r.values.get("price") for r in plain.items] != golden
        hinted_ok += [r.values.get("price") for r in hinted.items] == golden
    ok = wrong_sites >= 1 and hinted_ok == 3
    report("Multi-price ambiguity", ok, f"no hint wrong on {wrong_sites}/3 sites, hint right on {hinted_ok}/3 sites")


def test_politeness_in_bench(link_site, tmp_path):
    delay = 0.2
    site = bench_site(link_site, int(delay * 1000), name="polite")
    config = BenchConfig((site,), 3, output_dir=tmp_path)
    run_bench(config, clock=SystemClock())
    gaps = []
    for run in range(3):
        events = read_transcript_events(tmp_path / "polite" / "prompt_tool" / f"run_{run}" / "transcript.jsonl")
        by_host: dict[str, list[float]] = {}
        for e in events:
            if e["event"] == "fetch":
                by_host.setdefault(e["host"], []).append(e["t"])
        for times in by_host.values():
            gaps += [b - a for a, b in zip(times, times[1:])]
    ok = bool(gaps) and min(gaps) >= delay
    report("Politeness", ok, f"{len(gaps)} same-host gaps over 3 bench runs, min gap={min(gaps):.4f}s (delay {delay}s)")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
