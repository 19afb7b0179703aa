"""Run-count convergence, cumulative averages and temporal-stability checks."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

TEMPORAL_TOLERANCE = 0.05


class DomainError(ValueError):
    pass


def ci_half_width(values: Sequence[float], confidence: float = 0.95) -> float:
    """Half-width of the Student-t confidence interval of the mean.

    ``t(1 - alpha/2, n - 1) * s / sqrt(n)`` with ``s`` the sample standard
    deviation (n - 1 denominator).
    """
    x = np.asarray(values, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        raise DomainError(f"need at least 2 values for a CI, got {n}")
    if not 0.0 < confidence < 1.0:
        raise DomainError("confidence must lie in (0, 1)")
    # checked directly: np.std of a constant vector can be a few ulps above 0
    if np.all(x == x[0]):
        return 0.0
    s = float(np.std(x, ddof=1))
    t = float(stats.t.ppf(0.5 + confidence / 2.0, n - 1))
    return t * s / math.sqrt(n)


@dataclass(frozen=True)
class ConvergenceCurve:
    setting_id: str
    points: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        ns = [n for n, _ in self.points]
        if any(n < 2 for n in ns) or any(b <= a for a, b in zip(ns, ns[1:])):
            raise DomainError("curve points need strictly increasing n >= 2")


def convergence_curve(
    run_scores: Sequence[float], step: int = 5, setting_id: str = "", confidence: float = 0.95
) -> ConvergenceCurve:
    """CI half-width using the first n scores, for n = step, 2*step, ..."""
    if len(run_scores) < 2:
        raise DomainError("need at least 2 run scores")
    if step < 1:
        raise DomainError("step must be positive")
    ns = [n for n in range(step, len(run_scores) + 1, step) if n >= 2]
    points = tuple((n, ci_half_width(run_scores[:n], confidence)) for n in ns)
    return ConvergenceCurve(setting_id, points)


def cumulative_average(run_scores: Sequence[float], interval: int = 5) -> list[tuple[int, float]]:
    if not run_scores:
        raise DomainError("need at least one run score")
    if interval < 1:
        raise DomainError("interval must be positive")
    csum = np.cumsum(np.asarray(run_scores, dtype=np.float64))
    return [(n, float(csum[n - 1] / n)) for n in range(interval, len(run_scores) + 1, interval)]


@dataclass(frozen=True)
class TemporalRow:
    site: str
    score_t: float
    score_t7: float
    abs_delta: float

    @property
    def passed(self) -> bool:
        return self.abs_delta < TEMPORAL_TOLERANCE


@dataclass(frozen=True)
class TemporalReport:
    rows: tuple[TemporalRow, ...]

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.rows)

    def row(self, site: str) -> TemporalRow:
        for r in self.rows:
            if r.site == site:
                return r
        raise KeyError(site)


def temporal_compare(scores_t: Mapping[str, float], scores_t7: Mapping[str, float]) -> TemporalReport:
    """Compare per-site scores from two measurement times.

    Deltas are rounded to 12 decimals so table values such as 0.533 - 0.511
    come out as the exact decimal 0.022.
    """
    left, right = set(scores_t), set(scores_t7)
    if left != right:
        raise DomainError(
            f"site keys differ: only at T {sorted(left - right)}, only at T+7 {sorted(right - left)}"
        )
    rows = tuple(
        TemporalRow(site, float(scores_t[site]), float(scores_t7[site]), round(abs(scores_t7[site] - scores_t[site]), 12))
        for site in scores_t
    )
    return TemporalReport(rows)


def emit_plot_data(data: ConvergenceCurve | TemporalReport | Sequence[tuple[int, float]], path: str | Path) -> None:
    """Write a curve, cumulative-average series or temporal report as CSV."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if isinstance(data, ConvergenceCurve):
            writer.writerow(["n", "half_width"])
            writer.writerows((n, repr(hw)) for n, hw in data.points)
        elif isinstance(data, TemporalReport):
            writer.writerow(["site", "t", "t7", "delta", "pass"])
            writer.writerows((r.site, repr(r.score_t), repr(r.score_t7), repr(r.abs_delta), r.passed) for r in data.rows)
        else:
            writer.writerow(["n", "cumulative_mean"])
            writer.writerows((n, repr(m)) for n, m in data)


def read_plot_data(path: str | Path) -> ConvergenceCurve | TemporalReport | list[tuple[int, float]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    if header == ["n", "half_width"]:
        return ConvergenceCurve("", tuple((int(n), float(h)) for n, h in body))
    if header == ["n", "cumulative_mean"]:
        return [(int(n), float(m)) for n, m in body]
    if header == ["site", "t", "t7", "delta", "pass"]:
        return TemporalReport(tuple(TemporalRow(s, float(a), float(b), float(d)) for s, a, b, d, _ in body))
    raise DomainError(f"{path}: unrecognised CSV header {header}")
