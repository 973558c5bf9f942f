"""End-to-end acceptance gate.

Each test pins one headline behavior of the package at a fixed tolerance and
prints a single pass/fail line (visible with ``pytest -rA`` or ``-s``).  The
suite is self-contained: every reference value is either re-derived from an
independent numerical route in the same test or asserted against a frozen
anchor that the oracle modules reproduce.
"""

import itertools
import math
import time

import numpy as np
import pytest

from uscmet import (
    DerivativeConvention,
    DickeParams,
    DriveParams,
    RabiParams,
    StrategyId,
    dicke,
    driven,
    figures,
    fock,
    rabi,
    strategies,
    sweeps,
)
from uscmet.oracles import ground_qfi_oracle, fd_snr_amplitude


def _line(num: int, ok: bool, detail: str) -> None:
    print(f"[criterion {num:02d}] {'PASS' if ok else 'FAIL'} {detail}")


# ---------------------------------------------------------------------------
# 1. closed-form soft-mode frequency vs truncated-pair gap
# ---------------------------------------------------------------------------


def test_criterion_01_normal_frequency_matches_truncated_gap():
    budget = 60.0
    cutoff = 48
    assert cutoff <= 80
    rng = np.random.default_rng(20260816)
    start = time.monotonic()
    worst = 0.0
    space = fock.TruncatedSpace([cutoff, cutoff])
    for _ in range(50):
        omega = rng.uniform(0.5, 2.0)
        Omega = rng.uniform(0.5, 4.0)
        ratio = rng.uniform(0.05, 0.9)
        p = DickeParams(omega=omega, Omega=Omega, g=ratio * math.sqrt(omega * Omega))
        closed = dicke.normal_frequencies(p).omega_minus
        h = fock.quadratic_pair_hamiltonian(space, p.omega, p.Omega, p.g)
        gap = fock.excitation_gap(h)
        worst = max(worst, abs(gap - closed) / closed)
    elapsed = time.monotonic() - start
    ok = worst <= 1e-6 and elapsed <= budget
    _line(1, ok, f"50 random points, worst rel dev {worst:.3e}, {elapsed:.1f}s")
    assert worst <= 1e-6
    assert elapsed <= budget


# ---------------------------------------------------------------------------
# 2. ground-state QFI vs fidelity-decay oracle
# ---------------------------------------------------------------------------


def test_criterion_02_ground_qfi_matches_fidelity_oracle():
    worst = 0.0
    for r in np.linspace(0.1, 0.95, 10):
        p = DickeParams.from_coupling_ratio(float(r))
        closed = dicke.ground_state_qfi(p)
        # step large enough that the overlap deficit clears rounding at the
        # weak-coupling end (QFI ~ 3e-3) yet small enough that extrapolated
        # truncation error stays below tolerance at r = 0.95
        probe = ground_qfi_oracle(p, eps=1e-3)
        worst = max(worst, abs(probe - closed) / closed)
    anchor = dicke.ground_state_qfi(DickeParams.from_coupling_ratio(0.9))
    anchor_ok = abs(anchor - 10.153) <= 0.001
    ok = worst <= 1e-4 and anchor_ok
    _line(2, ok, f"10 couplings, worst rel dev {worst:.3e}, anchor {anchor:.6f}")
    assert worst <= 1e-4
    assert anchor_ok


# ---------------------------------------------------------------------------
# 3. driven amplitude channel: anchor, resonant zero, threshold divergence
# ---------------------------------------------------------------------------


def test_criterion_03_amplitude_channel_anchor_and_divergence():
    p = DickeParams.from_coupling_ratio(0.99)
    d = DriveParams(kappa=1.0, eta=1.0, delta=0.5, t=1.0)
    closed = driven.snr_amplitude(p, d)
    oracle = fd_snr_amplitude(p, d)
    anchor_ok = (
        abs(closed - 816.080) <= 816.080 * 1e-6
        and abs(closed - oracle) <= abs(oracle) * 1e-6
    )

    resonant_zero = driven.snr_amplitude(p, DriveParams(1.0, 1.0, 0.0, 1.0))

    eps = np.logspace(-4, -5, 9)
    logs = [
        math.log(driven.snr_amplitude(DickeParams.from_coupling_ratio(1.0 - e), d))
        for e in eps
    ]
    slope = float(np.polyfit(np.log(eps), logs, 1)[0])
    slope_ok = abs(slope - (-1.0)) <= 0.05

    ok = anchor_ok and resonant_zero == 0.0 and slope_ok
    _line(3, ok, f"anchor {closed:.6f}, S(delta=0)={resonant_zero}, slope {slope:.4f}")
    assert anchor_ok
    assert resonant_zero == 0.0
    assert slope_ok


# ---------------------------------------------------------------------------
# 4. channel decomposition: amplitude + phase = total
# ---------------------------------------------------------------------------


def test_criterion_04_channel_decomposition():
    worst = 0.0
    for delta, ratio, kappa in itertools.product(
        (-1.0, -0.3, 0.0, 0.4, 1.5),
        (0.0, 0.3, 0.6, 0.9, 0.99),
        (0.5, 1.0, 2.0),
    ):
        p = DickeParams.from_coupling_ratio(ratio)
        d = DriveParams(kappa=kappa, eta=0.8, delta=delta, t=1.3)
        total = driven.driven_qfi_total(p, d)
        parts = driven.snr_amplitude(p, d) + driven.snr_phase(p, d)
        worst = max(worst, abs(parts - total) / max(abs(total), 1e-300))
    uncoupled = driven.driven_qfi_total(
        DickeParams.from_coupling_ratio(0.0), DriveParams(1.0, 1.0, 0.0, 1.0)
    )
    ok = worst <= 1e-12 and uncoupled == 16.0
    _line(4, ok, f"75-point grid, worst rel dev {worst:.3e}, uncoupled {uncoupled}")
    assert worst <= 1e-12
    assert uncoupled == 16.0


# ---------------------------------------------------------------------------
# 5. envelope ordering flips across the crossover coupling
# ---------------------------------------------------------------------------


def test_criterion_05_envelope_ordering_and_crossover():
    def envelopes(ratio):
        p = RabiParams.from_coupling_ratio(ratio)
        return (
            rabi.strategy_displaced(p, 1.0).envelope,
            rabi.strategy_normal_mode(p, 1.0).envelope,
        )

    def closed(ratio):
        u = ratio * ratio
        return 4.0 / math.sqrt(1.0 - u), (2.0 - u) ** 2 / (1.0 - u)

    disp_lo, norm_lo = envelopes(0.9)
    disp_hi, norm_hi = envelopes(0.99)
    anchors_ok = all(
        abs(a - b) <= abs(b) * 1e-9
        for a, b in zip((disp_lo, norm_lo, disp_hi, norm_hi), closed(0.9) + closed(0.99))
    )
    order_ok = disp_lo > norm_lo and disp_hi < norm_hi

    u_star = strategies.crossover_coupling()
    p_star = RabiParams(omega=1.0, Omega=1.0, g=math.sqrt(u_star))
    d_star = rabi.strategy_displaced(p_star, 1.0).envelope
    n_star = rabi.strategy_normal_mode(p_star, 1.0).envelope
    cross_ok = 0.81 < u_star < 0.9801 and abs(d_star - n_star) <= d_star * 1e-9

    ok = anchors_ok and order_ok and cross_ok
    _line(
        5,
        ok,
        f"{disp_lo:.3f}>{norm_lo:.3f} then {disp_hi:.3f}<{norm_hi:.3f}, "
        f"crossover u={u_star:.10f}",
    )
    assert anchors_ok
    assert order_ok
    assert cross_ok


# ---------------------------------------------------------------------------
# 6. near-threshold scaling exponents of the envelopes
# ---------------------------------------------------------------------------


def test_criterion_06_scaling_exponents():
    norm = strategies.scaling_exponent(StrategyId.NORMAL_MODE)
    disp = strategies.scaling_exponent(StrategyId.DISPLACED_EXTRACT)
    ok = abs(norm - 2.0) <= 0.05 and abs(disp - 1.0) <= 0.05
    _line(6, ok, f"precessing slope {norm:.4f}, displaced slope {disp:.4f}")
    assert abs(norm - 2.0) <= 0.05
    assert abs(disp - 1.0) <= 0.05


# ---------------------------------------------------------------------------
# 7. strategy envelopes reduce to the closed QFI expressions
# ---------------------------------------------------------------------------


def test_criterion_07_strategy_identities():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(20):
        ratio = rng.uniform(0.05, 0.99)
        alpha = rng.uniform(0.2, 3.0)
        p = RabiParams.from_coupling_ratio(float(ratio))
        nm = rabi.strategy_normal_mode(p, float(alpha)).envelope
        cq = rabi.rabi_coherent_qfi(p, float(alpha), 1.0)
        st = rabi.strategy_extract_static(p).envelope
        gq = rabi.rabi_ground_qfi(p)
        worst = max(
            worst,
            abs(nm - cq) / max(abs(cq), 1e-300),
            abs(st - gq) / max(abs(gq), 1e-300),
        )
    ok = worst <= 1e-12
    _line(7, ok, f"20 random points, worst rel dev {worst:.3e}")
    assert worst <= 1e-12


# ---------------------------------------------------------------------------
# 8. exact qubit-cavity gap slope vs quadratic effective theory
# ---------------------------------------------------------------------------


def test_criterion_08_gap_slope_approaches_effective_theory():
    budget = 120.0
    start = time.monotonic()
    slopes = []
    for ratio in (100.0, 1000.0, 10000.0):
        slope, cutoff = figures.exact_gap_slope(ratio, 0.99)
        slopes.append(slope)
    increasing = slopes[0] < slopes[1] < slopes[2]
    effective = rabi.effective_gap_derivative(
        RabiParams.from_coupling_ratio(0.99, omega=1.0, Omega=1.0e4)
    )
    rel = abs(slopes[2] - effective) / effective
    elapsed = time.monotonic() - start
    ok = increasing and rel <= 0.05 and elapsed <= budget
    _line(
        8,
        ok,
        f"slopes {slopes[0]:.4f}<{slopes[1]:.4f}<{slopes[2]:.4f}, "
        f"vs effective {effective:.4f} rel {rel:.3e}, {elapsed:.1f}s",
    )
    assert increasing
    assert rel <= 0.05
    assert elapsed <= budget


# ---------------------------------------------------------------------------
# 9. Lindblad steady state agrees with the closed-form response
# ---------------------------------------------------------------------------


def test_criterion_09_lindblad_steady_state():
    worst_amp = 0.0
    worst_purity = 0.0
    cases = [
        (0.5, 0.3, -1.0),
        (0.5, 1.0, 0.0),
        (1.0, 0.5, 0.25),
        (1.0, 1.0, 0.0),
        (1.0, 1.0, 0.5),
        (1.0, 2.0, -0.4),
        (2.0, 0.7, 1.0),
        (2.0, 1.5, 0.0),
        (3.0, 1.0, -2.0),
        (4.0, 2.0, 3.0),
    ]
    for kappa, eta, delta in cases:
        d = DriveParams(kappa=kappa, eta=eta, delta=delta, t=1.0)
        state = driven.lindblad_steady_state(d)
        closed = driven.steady_state_response(d).amp_intracavity
        amp = float(np.hypot(*state.mean))
        worst_amp = max(worst_amp, abs(amp - closed) / max(closed, 1e-300))
        worst_purity = max(worst_purity, abs(state.purity() - 1.0))
    ok = worst_amp <= 1e-10 and worst_purity <= 1e-10
    _line(
        9,
        ok,
        f"10 drives, worst amplitude dev {worst_amp:.3e}, "
        f"worst purity dev {worst_purity:.3e}",
    )
    assert worst_amp <= 1e-10
    assert worst_purity <= 1e-10


# ---------------------------------------------------------------------------
# 10. deterministic table output round-trips bit for bit
# ---------------------------------------------------------------------------


def test_criterion_10_figure_reproducibility(tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    figures.emit_figure("fig2", str(first), timestamp=False, plot=False)
    figures.emit_figure("fig2", str(second), timestamp=False, plot=False)
    text_a = first.read_text(encoding="utf-8")
    text_b = second.read_text(encoding="utf-8")
    identical = text_a == text_b

    columns, rows = sweeps.parse_csv(text_a)
    rebuilt = sweeps.to_csv(columns, rows, timestamp=False)
    roundtrip = rebuilt == text_a

    ok = identical and roundtrip
    _line(
        10,
        ok,
        f"reruns identical={identical}, parse/serialize identical={roundtrip} "
        f"({len(rows)} rows)",
    )
    assert identical
    assert roundtrip
