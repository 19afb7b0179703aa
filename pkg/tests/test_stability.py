from __future__ import annotations

import math

import numpy as np
import pytest

from oracles import sample_std
from webscraper.stability import (
    ConvergenceCurve,
    DomainError,
    ci_half_width,
    convergence_curve,
    cumulative_average,
    emit_plot_data,
    read_plot_data,
    temporal_compare,
)

# two-sided 95% Student-t critical values from a printed t-table
T_TABLE = {1: 12.706, 2: 4.303, 4: 2.776, 9: 2.262, 29: 2.045}


def test_constant_input_has_zero_width():
    assert ci_half_width([0.5] * 10) == 0.0


def test_two_points_against_table():
    assert ci_half_width([0.0, 1.0]) == pytest.approx(12.706 * 0.70711 / math.sqrt(2), abs=1e-3)
    assert ci_half_width([0.0, 1.0]) == pytest.approx(6.353, abs=1e-3)


@pytest.mark.parametrize("df", sorted(T_TABLE))
def test_matches_t_table(df):
    rng = np.random.default_rng(df)
    v = list(rng.random(df + 1))
    expected = T_TABLE[df] * sample_std(v) / math.sqrt(df + 1)
    assert ci_half_width(v) == pytest.approx(expected, rel=2e-4)


def test_domain_errors():
    with pytest.raises(DomainError):
        ci_half_width([1.0])
    with pytest.raises(DomainError):
        convergence_curve([1.0])
    with pytest.raises(DomainError):
        cumulative_average([])


def test_homogeneity_and_translation():
    rng = np.random.default_rng(100)
    for _ in range(100):
        v = rng.random(rng.integers(2, 40))
        c = float(rng.uniform(-5, 5))
        hw = ci_half_width(v)
        assert ci_half_width(v * c) == pytest.approx(abs(c) * hw, rel=1e-9, abs=1e-12)
        assert ci_half_width(v + c) == pytest.approx(hw, rel=1e-7, abs=1e-12)


def test_scaling_by_two_doubles():
    v = [0.2, 0.5, 0.9, 0.4]
    assert ci_half_width([2 * x for x in v]) == pytest.approx(2 * ci_half_width(v), rel=1e-12)


def test_convergence_curve_shape():
    rng = np.random.default_rng(40)
    scores = list(rng.binomial(1, 0.5, 40).astype(float))
    curve = convergence_curve(scores, 5)
    assert [n for n, _ in curve.points] == [5, 10, 15, 20, 25, 30, 35, 40]
    hw = dict(curve.points)
    assert hw[40] < hw[10]
    # each point only depends on its prefix
    for n, h in curve.points:
        assert h == ci_half_width(scores[:n])
    assert convergence_curve(scores[:5], 5).points == ((5, ci_half_width(scores[:5])),)
    assert all(h == 0.0 for _, h in convergence_curve([0.4] * 20).points)


def test_curve_invariant():
    with pytest.raises(DomainError):
        ConvergenceCurve("x", ((5, 0.1), (5, 0.2)))


def test_cumulative_average():
    assert cumulative_average([1, 0, 1, 0, 1], 5) == [(5, 0.6)]
    assert all(m == pytest.approx(0.3) for _, m in cumulative_average([0.3] * 20))
    rng = np.random.default_rng(7)
    scores = list(rng.binomial(1, 0.7, 40).astype(float))
    points = cumulative_average(scores, 5)
    assert points[-1][0] == 40
    # binomial 99.9% interval for the mean of 40 draws at p=0.7 is about +/-0.24; 0.15 is the stated bound
    assert abs(points[-1][1] - 0.7) <= 0.15


def test_temporal_examples():
    rep = temporal_compare({"pts": 0.820, "bbc": 0.511, "x": 0.50}, {"pts": 0.820, "bbc": 0.533, "x": 0.56})
    assert rep.row("pts").abs_delta == 0.0 and rep.row("pts").passed
    assert rep.row("bbc").abs_delta == 0.022 and rep.row("bbc").passed
    assert rep.row("x").abs_delta == 0.06 and not rep.row("x").passed
    assert not rep.all_pass


def test_temporal_key_mismatch_names_sites():
    with pytest.raises(DomainError, match="only at T \\['a'\\]"):
        temporal_compare({"a": 0.1, "b": 0.2}, {"b": 0.2})


def test_plot_data_round_trips(tmp_path):
    curve = convergence_curve([0.1, 0.4, 0.3, 0.9, 0.5, 0.6], 2, "s")
    emit_plot_data(curve, tmp_path / "c.csv")
    back = read_plot_data(tmp_path / "c.csv")
    assert back.points == curve.points
    assert (tmp_path / "c.csv").read_text().splitlines()[0] == "n,half_width"

    cum = cumulative_average([0.1, 0.2, 0.3, 0.4], 2)
    emit_plot_data(cum, tmp_path / "m.csv")
    assert read_plot_data(tmp_path / "m.csv") == cum

    rep = temporal_compare({"a": 0.511}, {"a": 0.533})
    emit_plot_data(rep, tmp_path / "t.csv")
    assert (tmp_path / "t.csv").read_text().splitlines()[0] == "site,t,t7,delta,pass"
    assert read_plot_data(tmp_path / "t.csv") == rep
