from __future__ import annotations

import random
from fractions import Fraction

import pytest

from oracles import rouge_exact
from webscraper.metrics import judge_item, score_run
from webscraper.metrics.judge import ItemJudgment
from webscraper.models import Dataset, GoldenItem, GoldenSet, ItemRecord

GOLD = GoldenItem("https://news.example/a/1", "Storm closes harbor", "The harbor closed early on Monday after the storm.")


def _golden(n: int) -> GoldenSet:
    return GoldenSet(
        "site",
        "english",
        tuple(GoldenItem(f"https://s.example/a/{i}", f"title {i} words here", f"body text number {i} of the item") for i in range(n)),
    )


def test_identical_item_is_correct():
    j = judge_item(GOLD, ItemRecord(GOLD.url, {"title": GOLD.title, "content": GOLD.content}))
    assert j.url_match and j.title_f1 == 1.0 and j.content_f1 == 1.0 and j.correct


def test_url_compared_after_normalization():
    j = judge_item(GOLD, ItemRecord("HTTPS://News.Example:443/a/1#top", {"title": GOLD.title, "content": GOLD.content}))
    assert j.url_match and j.correct


def test_content_below_threshold_fails_even_with_good_title():
    j = ItemJudgment(GOLD.url, True, 0.85, 0.79)
    assert not j.correct


def test_threshold_is_inclusive():
    assert ItemJudgment(GOLD.url, True, 0.8, 0.9).correct
    assert not ItemJudgment(GOLD.url, True, 0.799, 0.9).correct


def test_boundary_from_real_text():
    # 4 of 5 reference tokens, candidate of 5 tokens -> R = P = F = 4/5 exactly
    ref, cand = "a b c d e", "a b c d x"
    assert rouge_exact(ref.split(), cand.split())[2] == Fraction(4, 5)
    j = judge_item(GoldenItem("https://x.example/1", ref, ref), ItemRecord("https://x.example/1", {"title": cand, "content": ref}))
    assert j.title_f1 == 0.8
    assert j.correct


def test_missing_item_and_null_fields_score_zero():
    j = judge_item(GOLD, None)
    assert not j.correct and j.title_f1 == 0.0
    j = judge_item(GOLD, ItemRecord(GOLD.url, {"title": GOLD.title}))
    assert j.content_f1 == 0.0 and not j.correct


def test_extra_golden_fields_are_judged():
    gold = GoldenItem("https://shop.example/p/1", "Kettle", "A kettle.", {"price": "$129.00"})
    good = ItemRecord(gold.url, {"title": "Kettle", "content": "A kettle.", "price": "$129.00"})
    bad = ItemRecord(gold.url, {"title": "Kettle", "content": "A kettle.", "price": "$99.50"})
    assert judge_item(gold, good).correct
    assert not judge_item(gold, bad).correct


def test_score_run_examples():
    golden = _golden(10)
    full = Dataset("t", tuple(ItemRecord(g.url, {"title": g.title, "content": g.content}) for g in golden.items))
    assert score_run(golden, full).score == 1.0
    assert score_run(golden, Dataset("t", ())).score == 0.0
    six = Dataset("t", full.items[:6])
    rep = score_run(golden, six)
    assert rep.score == pytest.approx(0.6) and rep.run_score.n_correct == 6


def test_over_extraction_does_not_raise_score():
    golden = _golden(2)
    items = tuple(ItemRecord(g.url, {"title": g.title, "content": g.content}) for g in golden.items)
    extra = items + (ItemRecord("https://s.example/other", {"title": "x", "content": "y"}),)
    rep = score_run(golden, Dataset("t", extra))
    assert rep.score == 1.0 and rep.over_extraction == 1


def test_empty_golden_rejected():
    with pytest.raises(ValueError):
        score_run(GoldenSet("s", "english", ()), Dataset("t", ()))


def test_score_run_permutation_invariant():
    golden = _golden(8)
    rng = random.Random(3)
    items = [ItemRecord(g.url, {"title": g.title if rng.random() < 0.7 else "nope", "content": g.content}) for g in golden.items]
    base = score_run(golden, Dataset("t", tuple(items))).score
    for _ in range(20):
        rng.shuffle(items)
        assert score_run(golden, Dataset("t", tuple(items))).score == base


def test_threshold_monotonicity_random_judgments():
    rng = random.Random(20240501)
    golden = _golden(5)
    for _ in range(200):
        items = []
        for g in golden.items:
            words = g.content.split()
            kept = [w for w in words if rng.random() < 0.85] + ["noise"] * rng.randrange(3)
            items.append(ItemRecord(g.url, {"title": g.title, "content": " ".join(kept)}))
        ds = Dataset("t", tuple(items))
        taus = sorted(rng.random() for _ in range(4))
        counts = [score_run(golden, ds, tau=t).run_score.n_correct for t in taus]
        assert counts == sorted(counts, reverse=True)


def test_report_dict_shape():
    golden = _golden(1)
    rep = score_run(golden, Dataset("t", ()), run=4)
    d = rep.to_dict()
    assert d["run"] == 4 and d["score"] == 0.0
    assert set(d["items"][0]) >= {"url", "url_match", "title_f1", "content_f1", "correct"}
