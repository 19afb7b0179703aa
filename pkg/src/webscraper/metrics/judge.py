"""Per-item Correctness judgments and per-run scores."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from ..models import Dataset, GoldenItem, GoldenSet, ItemRecord
from ..urls import normalize_url
from .rouge import rouge_l_text

DEFAULT_TAU = 0.8


@dataclass(frozen=True)
class ItemJudgment:
    url: str
    url_match: bool
    title_f1: float
    content_f1: float
    # golden fields beyond title/content (e.g. price), judged the same way
    extra_f1: dict[str, float] = field(default_factory=dict)
    tau: float = DEFAULT_TAU

    @property
    def correct(self) -> bool:
        scores = [self.title_f1, self.content_f1, *self.extra_f1.values()]
        return self.url_match and all(s >= self.tau for s in scores)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "url": self.url,
            "url_match": self.url_match,
            "title_f1": self.title_f1,
            "content_f1": self.content_f1,
            "correct": self.correct,
        }
        if self.extra_f1:
            out["extra_f1"] = dict(self.extra_f1)
        return out


@dataclass(frozen=True)
class RunScore:
    site_id: str
    run: int
    n_golden: int
    n_correct: int

    def __post_init__(self) -> None:
        if not 0 <= self.n_correct <= self.n_golden:
            raise ValueError("n_correct must lie in [0, n_golden]")

    @property
    def score(self) -> float:
        return self.n_correct / self.n_golden if self.n_golden else 0.0


@dataclass(frozen=True)
class RunReport:
    run_score: RunScore
    judgments: tuple[ItemJudgment, ...]
    over_extraction: int

    @property
    def score(self) -> float:
        return self.run_score.score

    def to_dict(self) -> dict[str, Any]:
        return {
            "site_id": self.run_score.site_id,
            "run": self.run_score.run,
            "score": self.score,
            "n_golden": self.run_score.n_golden,
            "n_correct": self.run_score.n_correct,
            "over_extraction": self.over_extraction,
            "items": [j.to_dict() for j in self.judgments],
        }


def judge_item(
    golden: GoldenItem,
    extracted: ItemRecord | None,
    language: str = "english",
    tau: float = DEFAULT_TAU,
) -> ItemJudgment:
    """Judge one extracted item against its golden counterpart.

    A missing item, or a missing field, scores F1 = 0. The threshold is
    inclusive.
    """
    if extracted is None:
        return ItemJudgment(golden.url, False, 0.0, 0.0, {k: 0.0 for k in golden.extra}, tau)
    url_match = normalize_url(golden.url) == normalize_url(extracted.url)
    title = rouge_l_text(golden.title, extracted.get("title"), language).f1
    content = rouge_l_text(golden.content, extracted.get("content"), language).f1
    extra = {k: rouge_l_text(v, extracted.get(k), language).f1 for k, v in golden.extra.items()}
    return ItemJudgment(golden.url, url_match, title, content, extra, tau)


def score_run(
    golden: GoldenSet,
    dataset: Dataset,
    language: str | None = None,
    tau: float = DEFAULT_TAU,
    run: int = 0,
) -> RunReport:
    if not golden.items:
        raise ValueError("golden set is empty")
    language = language or golden.language
    by_url: dict[str, ItemRecord] = {}
    for item in dataset.items:
        by_url.setdefault(normalize_url(item.url), item)
    golden_keys = {normalize_url(g.url) for g in golden.items}
    judgments = tuple(
        judge_item(g, by_url.get(normalize_url(g.url)), language, tau) for g in golden.items
    )
    n_correct = sum(j.correct for j in judgments)
    over = sum(1 for k in by_url if k not in golden_keys)
    return RunReport(RunScore(golden.site_id, run, len(golden.items), n_correct), judgments, over)
