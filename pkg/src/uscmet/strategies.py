"""Side-by-side comparison lab for the frequency-estimation strategies.

Evaluates all strategies of :mod:`uscmet.rabi` on a common coupling/time
grid with the per-row error-propagation deviation attached, locates the
coupling at which the displaced and precessing-probe envelopes cross, and
fits the scaling exponents of the envelopes against the near-threshold
virtual occupation (the resource count of the asymptotic scaling laws).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import oracles
from .errors import GridTooCoarse, InvalidSpec, NoRootInBracket
from .params import RabiParams
from .rabi import (
    StrategyId,
    n_virtual_near_threshold,
    strategy_displaced,
    strategy_extract_evolved,
    strategy_extract_static,
    strategy_normal_mode,
    strategy_synergy,
)

#: Default coupling window for the scaling regressions, log-spaced in 1 - g/g_c.
SCALING_WINDOW = (0.99, 0.9999)


@dataclass(frozen=True)
class ComparisonGrid:
    """Grid specification for :func:`run_comparison`.

    ``coupling_ratios`` are g/g_c values; ``times`` are interrogation times
    (in units of the inverse cavity frequency when ``omega = 1``).  When
    ``xi_r`` is given, the synergy strategy is evaluated too with that
    readout squeezing; it is left out of the oracle deviation because its
    closed form is normalized at the precession peaks rather than derived
    from a single fixed observable.
    """

    coupling_ratios: Sequence[float]
    times: Sequence[float]
    alpha_mag: float = 1.0
    xi_r: float | None = None
    omega: float = 1.0
    Omega: float = 1.0e4

    def __post_init__(self) -> None:
        if len(self.coupling_ratios) == 0 or len(self.times) == 0:
            raise InvalidSpec("comparison grid must have couplings and times")
        for r in self.coupling_ratios:
            if not 0.0 <= r < 1.0:
                raise InvalidSpec(f"coupling ratios must lie in [0, 1), got {r!r}")
        for t in self.times:
            if t < 0.0:
                raise InvalidSpec(f"times must be >= 0, got {t!r}")


@dataclass(frozen=True)
class ComparisonRow:
    """One (coupling, time) cell of the strategy comparison.

    ``oracle_deviation`` is the largest relative disagreement between the
    closed forms and the error-propagation oracles across the evolved,
    displaced, and precessing strategies at this cell (signals below a
    relative floor of the cell's scale are skipped -- at the precession
    nodes both routes are legitimately zero).
    """

    coupling_ratio: float
    t: float
    snr_extract_static: float
    snr_extract_evolved: float
    snr_displaced: float
    snr_normal_mode: float
    snr_synergy: float | None
    oracle_deviation: float


def _rel_dev(closed: float, oracle: float, scale: float) -> float:
    m = max(abs(closed), abs(oracle))
    if m <= 1e-9 * scale:
        return 0.0
    return abs(closed - oracle) / m


def run_comparison(grid: ComparisonGrid) -> list[ComparisonRow]:
    """Evaluate every strategy on the grid, with oracle deviations attached.

    Rows are emitted coupling-major, time-minor, in the declared order, and
    the computation is deterministic (pure closed forms plus fixed-step
    finite differences).
    """
    rows: list[ComparisonRow] = []
    for ratio in (float(r) for r in grid.coupling_ratios):
        p = RabiParams.from_coupling_ratio(ratio, omega=grid.omega, Omega=grid.Omega)
        static = strategy_extract_static(p)
        displaced = strategy_displaced(p, grid.alpha_mag)
        normal = strategy_normal_mode(p, grid.alpha_mag)
        synergy = (
            strategy_synergy(p, grid.alpha_mag, grid.xi_r)
            if grid.xi_r is not None
            else None
        )
        for t in (float(tt) for tt in grid.times):
            evolved = strategy_extract_evolved(p, t)
            vals = {
                "evolved": float(evolved),
                "displaced": float(displaced.snr_of_t(t)),
                "normal": float(normal.snr_of_t(t)),
            }
            scale = max(
                static.envelope,
                (displaced.envelope + normal.envelope) * t * t,
                1e-300,
            )
            if t > 0.0:
                deviation = max(
                    _rel_dev(vals["evolved"], oracles.ep_extract_evolved(p, t), scale),
                    _rel_dev(
                        vals["displaced"],
                        oracles.ep_displaced(p, grid.alpha_mag, t),
                        scale,
                    ),
                    _rel_dev(
                        vals["normal"],
                        oracles.ep_normal_mode(p, grid.alpha_mag, t),
                        scale,
                    ),
                )
            else:
                # t = 0: only the static/evolved channel carries signal.
                deviation = _rel_dev(
                    vals["evolved"], oracles.ep_extract_static(p), scale
                )
            rows.append(
                ComparisonRow(
                    coupling_ratio=ratio,
                    t=t,
                    snr_extract_static=static.envelope,
                    snr_extract_evolved=vals["evolved"],
                    snr_displaced=vals["displaced"],
                    snr_normal_mode=vals["normal"],
                    snr_synergy=float(synergy.snr_of_t(t))
                    if synergy is not None
                    else None,
                    oracle_deviation=float(deviation),
                )
            )
    return rows


def _envelope_gap(u: float) -> float:
    # normal-mode envelope minus displaced envelope, per unit alpha^2
    return (2.0 - u) ** 2 / (1.0 - u) - 4.0 / math.sqrt(1.0 - u)


def crossover_coupling(alpha_mag: float = 1.0) -> float:
    """Coupling where the precessing envelope overtakes the displaced one.

    Returned as u = (g/g_c)^2.  Bisection of the envelope difference on the
    bracket u in (0.81, 0.9801); the displacement magnitude cancels from the
    difference, so the root is alpha-independent (the argument is accepted
    for interface symmetry and validated only).  Absolute tolerance 1e-10.
    """
    if alpha_mag <= 0.0:
        raise InvalidSpec(f"alpha_mag must be > 0, got {alpha_mag!r}")
    lo, hi = 0.81, 0.9801
    flo, fhi = _envelope_gap(lo), _envelope_gap(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NoRootInBracket(
            f"envelope difference does not change sign on ({lo}, {hi})"
        )
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        fmid = _envelope_gap(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0.0) == (fhi > 0.0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def scaling_exponent(
    strategy_id: StrategyId,
    g_grid: Sequence[float] | None = None,
    alpha_mag: float = 1.0,
    xi_r: float = 0.0,
    omega: float = 1.0,
    Omega: float = 1.0e4,
) -> float:
    """Envelope scaling exponent against the near-threshold occupation.

    Fits log(envelope) linearly in log(n) with n = (1/4)(1 - u)^{-1/2}, the
    occupation the asymptotic scaling laws are stated in (the exact
    sinh-form occupation differs from it by a slowly vanishing offset that
    would contaminate the fitted slope at any practical distance from
    threshold).  The displaced envelope scales exactly linearly in n and
    the synergy envelope exactly quadratically; the precessing envelope
    approaches slope 2 from below.

    ``g_grid`` holds g/g_c values inside [0.99, 0.9999] (defaults to 12
    points log-spaced in 1 - g/g_c); fewer than 4 points raises
    :class:`~uscmet.errors.GridTooCoarse`.
    """
    makers = {
        StrategyId.DISPLACED_EXTRACT: lambda p: strategy_displaced(p, alpha_mag),
        StrategyId.NORMAL_MODE: lambda p: strategy_normal_mode(p, alpha_mag),
        StrategyId.SYNERGY: lambda p: strategy_synergy(p, alpha_mag, xi_r),
    }
    if strategy_id not in makers:
        raise InvalidSpec(
            f"scaling exponents are defined for the time-quadratic envelopes, "
            f"not {strategy_id!r}"
        )
    lo, hi = SCALING_WINDOW
    if g_grid is None:
        g_grid = 1.0 - np.logspace(math.log10(1.0 - lo), math.log10(1.0 - hi), 12)
    g_grid = list(g_grid)
    if len(g_grid) < 4:
        raise GridTooCoarse(
            f"need at least 4 couplings for a scaling fit, got {len(g_grid)}"
        )
    for r in g_grid:
        if not (lo - 1e-12 <= r <= hi + 1e-12):
            raise InvalidSpec(
                f"scaling window is g/g_c in [{lo}, {hi}], got {r!r}"
            )
    log_n, log_env = [], []
    for r in g_grid:
        p = RabiParams.from_coupling_ratio(r, omega=omega, Omega=Omega)
        log_n.append(math.log(n_virtual_near_threshold(p)))
        log_env.append(math.log(makers[strategy_id](p).envelope))
    slope, _ = np.polyfit(log_n, log_env, 1)
    return float(slope)
