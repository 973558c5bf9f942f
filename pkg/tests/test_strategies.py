"""Strategy comparison grid, envelope crossover, near-threshold scaling."""

import math

import pytest

from uscmet import GridTooCoarse, InvalidSpec, RabiParams, StrategyId
from uscmet import rabi, strategies
from uscmet.strategies import ComparisonGrid, SCALING_WINDOW


def test_grid_validation():
    with pytest.raises(InvalidSpec):
        ComparisonGrid(coupling_ratios=(), times=(1.0,))
    with pytest.raises(InvalidSpec):
        ComparisonGrid(coupling_ratios=(1.0,), times=(1.0,))
    with pytest.raises(InvalidSpec):
        ComparisonGrid(coupling_ratios=(0.5,), times=(-1.0,))


def test_comparison_row_layout():
    grid = ComparisonGrid(coupling_ratios=(0.5, 0.9), times=(0.0, 1.0, 2.0))
    rows = strategies.run_comparison(grid)
    assert len(rows) == 6
    # coupling-major, time-minor ordering
    assert [r.coupling_ratio for r in rows] == [0.5, 0.5, 0.5, 0.9, 0.9, 0.9]
    assert [r.t for r in rows] == [0.0, 1.0, 2.0, 0.0, 1.0, 2.0]
    for row in rows:
        assert isinstance(row.snr_extract_static, float)
        assert row.snr_synergy is None  # no readout squeezing requested
        assert row.oracle_deviation <= 1e-6


def test_comparison_includes_synergy_when_requested():
    grid = ComparisonGrid(coupling_ratios=(0.9,), times=(0.7,), xi_r=-0.5)
    (row,) = strategies.run_comparison(grid)
    assert row.snr_synergy is not None
    assert row.snr_synergy > 0.0


def test_comparison_matches_strategy_closed_forms():
    grid = ComparisonGrid(coupling_ratios=(0.9,), times=(0.8,), alpha_mag=1.3)
    (row,) = strategies.run_comparison(grid)
    p = RabiParams.from_coupling_ratio(0.9)
    assert row.snr_extract_static == rabi.strategy_extract_static(p).envelope
    assert row.snr_extract_evolved == pytest.approx(
        rabi.strategy_extract_evolved(p, 0.8), rel=1e-14
    )
    assert row.snr_displaced == pytest.approx(
        rabi.strategy_displaced(p, 1.3).snr_of_t(0.8), rel=1e-14
    )
    assert row.snr_normal_mode == pytest.approx(
        rabi.strategy_normal_mode(p, 1.3).snr_of_t(0.8), rel=1e-14
    )


def test_zero_coupling_baselines():
    grid = ComparisonGrid(coupling_ratios=(0.0,), times=(1.0,), alpha_mag=2.0)
    (row,) = strategies.run_comparison(grid)
    assert row.snr_extract_static == 0.0
    assert row.snr_extract_evolved == 0.0
    # both probe envelopes collapse to the bare coherent value 4 alpha^2
    p = RabiParams.from_coupling_ratio(0.0)
    assert rabi.strategy_displaced(p, 2.0).envelope == pytest.approx(16.0, rel=1e-14)
    assert rabi.strategy_normal_mode(p, 2.0).envelope == pytest.approx(16.0, rel=1e-14)


# ---------------------------------------------------------------------------
# envelope ordering and crossover
# ---------------------------------------------------------------------------


def test_envelope_ordering_flips_across_crossover():
    moderate = RabiParams.from_coupling_ratio(0.9)  # u = 0.81
    deep = RabiParams.from_coupling_ratio(0.99)  # u = 0.9801
    disp_m = rabi.strategy_displaced(moderate, 1.0).envelope
    norm_m = rabi.strategy_normal_mode(moderate, 1.0).envelope
    assert disp_m == pytest.approx(9.176629354822472, rel=1e-9)
    assert norm_m == pytest.approx(7.453157894736844, rel=1e-9)
    assert disp_m > norm_m
    disp_d = rabi.strategy_displaced(deep, 1.0).envelope
    norm_d = rabi.strategy_normal_mode(deep, 1.0).envelope
    assert disp_d == pytest.approx(28.355248200333417, rel=1e-9)
    assert norm_d == pytest.approx(52.27115628140696, rel=1e-9)
    assert disp_d < norm_d


def test_crossover_location_and_envelope_equality():
    u_star = strategies.crossover_coupling()
    assert 0.81 < u_star < 0.9801
    disp = 4.0 / math.sqrt(1.0 - u_star)
    norm = (2.0 - u_star) ** 2 / (1.0 - u_star)
    assert disp == pytest.approx(norm, rel=1e-9)


def test_crossover_independent_of_probe_amplitude():
    assert strategies.crossover_coupling(alpha_mag=2.5) == pytest.approx(
        strategies.crossover_coupling(alpha_mag=0.3), abs=1e-10
    )


def test_crossover_rejects_bad_amplitude():
    with pytest.raises(InvalidSpec):
        strategies.crossover_coupling(alpha_mag=0.0)


# ---------------------------------------------------------------------------
# near-threshold scaling exponents
# ---------------------------------------------------------------------------


def test_scaling_exponent_normal_mode():
    slope = strategies.scaling_exponent(StrategyId.NORMAL_MODE)
    assert slope == pytest.approx(2.0, abs=0.05)


def test_scaling_exponent_displaced():
    slope = strategies.scaling_exponent(StrategyId.DISPLACED_EXTRACT)
    assert slope == pytest.approx(1.0, abs=1e-10)


def test_scaling_exponent_synergy():
    slope = strategies.scaling_exponent(StrategyId.SYNERGY)
    assert slope == pytest.approx(2.0, abs=1e-10)


def test_scaling_exponent_rejects_extraction_strategies():
    with pytest.raises(InvalidSpec):
        strategies.scaling_exponent(StrategyId.EXTRACT_STATIC)


def test_scaling_exponent_needs_enough_points():
    grid = [1 - 10 ** (-2 - k) for k in range(3)]
    with pytest.raises(GridTooCoarse):
        strategies.scaling_exponent(StrategyId.NORMAL_MODE, g_grid=grid)


def test_scaling_exponent_rejects_points_outside_window():
    lo, hi = SCALING_WINDOW
    grid = [lo, (lo + hi) / 2, hi, 0.5]
    with pytest.raises(InvalidSpec):
        strategies.scaling_exponent(StrategyId.NORMAL_MODE, g_grid=grid)
