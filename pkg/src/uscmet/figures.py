"""Preset figure-data generators, with optional companion PNG rendering.

Each preset produces the delimited data table behind one figure of the
study (driven-response maps, near-threshold divergence, dispersive
convergence of the gap slope, and the strategy comparison), in the same
sweep schema the generic CLI uses; :func:`emit_figure` writes the table and,
unless plotting is disabled, renders a PNG next to it.  All presets run with
the cavity frequency as the unit (omega = 1) and kappa = eta = 1 for the
driven maps, so detuning columns are directly delta/kappa.

The tables are deterministic: rerunning a preset with timestamps suppressed
reproduces the previous file byte for byte.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import fock, strategies, sweeps
from .errors import InvalidSpec
from .params import RabiParams
from .rabi import effective_gap_derivative


@dataclass
class FigureTable:
    """One rendered-figure dataset: name, column order, rows, generating spec."""

    name: str
    columns: list[str]
    rows: list[dict]
    spec: dict


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------


def figure_fig2() -> FigureTable:
    """Amplitude-channel SNR map and its near-threshold divergence.

    Panel a: snr_amplitude over g/g_c in [0, 0.99] (100 points) by
    delta in [-2, 2] (81 points, landing exactly on delta = 0.5).
    Panel b: the same channel at the anchor detuning delta = 0.5 for
    couplings log-spaced in 1 - g/g_c from 1e-1 down to 1e-4.
    """
    spec = sweeps.SweepSpec(
        model="dicke",
        ranges=(
            sweeps.RangeSpec("g_over_gc", 0.0, 0.99, 100),
            sweeps.RangeSpec("delta", -2.0, 2.0, 81),
        ),
        quantities=("snr_amplitude",),
        fixed={"kappa": 1.0, "eta": 1.0, "t": 1.0},
    )
    result = sweeps.run_sweep(spec)
    rows = []
    for row in result.rows:
        out = {"panel": "a"}
        out.update(row)
        rows.append(out)
    for ratio in 1.0 - np.logspace(-1.0, -4.0, 25):
        values = {
            "g_over_gc": float(ratio),
            "delta": 0.5,
            "kappa": 1.0,
            "eta": 1.0,
            "t": 1.0,
        }
        res, beyond = sweeps.evaluate_point("dicke", values, ("snr_amplitude",))
        rows.append(
            {
                "panel": "b",
                "g_over_gc": float(ratio),
                "delta": 0.5,
                "snr_amplitude": res["snr_amplitude"],
                "beyond_threshold": beyond,
            }
        )
    columns = ["panel"] + result.columns
    return FigureTable(
        name="fig2",
        columns=columns,
        rows=rows,
        spec={
            "figure": "fig2",
            "panel_a": sweeps.spec_as_dict(spec),
            "panel_b": {
                "delta": 0.5,
                "g_over_gc": "1 - logspace(-1, -4, 25)",
                "kappa": 1.0,
                "eta": 1.0,
                "t": 1.0,
            },
        },
    )


def figure_figs1() -> FigureTable:
    """Both readout channels and their total over the (coupling, detuning) map."""
    spec = sweeps.SweepSpec(
        model="dicke",
        ranges=(
            sweeps.RangeSpec("g_over_gc", 0.0, 0.99, 50),
            sweeps.RangeSpec("delta", -2.0, 2.0, 81),
        ),
        quantities=("snr_amplitude", "snr_phase", "driven_qfi_total"),
        fixed={"kappa": 1.0, "eta": 1.0, "t": 1.0},
    )
    result = sweeps.run_sweep(spec)
    return FigureTable(
        name="figs1",
        columns=result.columns,
        rows=result.rows,
        spec={"figure": "figs1", "sweep": sweeps.spec_as_dict(spec)},
    )


def exact_gap_slope(
    ratio: float, coupling: float, start_cutoff: int = 30, step: float = 1e-3
) -> tuple[float, int]:
    """Frequency slope of the qubit-cavity gap from the number-basis engine.

    Converges the truncation on the gap itself, then differentiates the gap
    at fixed truncation with the emitter splitting and the coupling held
    fixed.  Returns (slope, cutoff used).
    """
    Omega = float(ratio)
    g = coupling * math.sqrt(Omega)

    def gap_at(cutoff: int) -> float:
        space = fock.TruncatedSpace([cutoff], spin_n=1)
        return fock.excitation_gap(fock.build_rabi(RabiParams(1.0, Omega, g), space))

    _, cutoff = fock.converged_value(gap_at, start_cutoff)
    space = fock.TruncatedSpace([cutoff], spin_n=1)

    def builder(w: float):
        return fock.build_rabi(RabiParams(w, Omega, g), space)

    return fock.gap_derivative(builder, 1.0, eps=step), cutoff


def figure_figs2(
    ratios: Sequence[float] = (100.0, 1000.0, 10000.0),
    couplings: Sequence[float] = (0.5, 0.8, 0.9, 0.95, 0.99),
) -> FigureTable:
    """Dispersive convergence of the exact gap slope to the quadratic theory.

    For each splitting ratio Omega/omega and coupling g/g_c, diagonalize the
    full qubit-cavity model, differentiate its gap with respect to the
    cavity frequency, and compare with the closed-form effective slope
    (2 - u) / (2 sqrt(1 - u)).
    """
    rows = []
    for ratio in ratios:
        for coupling in couplings:
            exact, cutoff = exact_gap_slope(ratio, coupling)
            effective = effective_gap_derivative(
                RabiParams.from_coupling_ratio(coupling, omega=1.0, Omega=float(ratio))
            )
            rows.append(
                {
                    "Omega_over_omega": float(ratio),
                    "g_over_gc": float(coupling),
                    "gap_slope_exact": float(exact),
                    "gap_slope_effective": float(effective),
                    "rel_deviation": abs(exact - effective) / abs(effective),
                    "cutoff": float(cutoff),
                }
            )
    return FigureTable(
        name="figs2",
        columns=[
            "Omega_over_omega",
            "g_over_gc",
            "gap_slope_exact",
            "gap_slope_effective",
            "rel_deviation",
            "cutoff",
        ],
        rows=rows,
        spec={
            "figure": "figs2",
            "ratios": [float(r) for r in ratios],
            "couplings": [float(c) for c in couplings],
        },
    )


def figure_figs3(
    couplings: Sequence[float] = (0.2, 0.5, 0.9, 0.99),
    points: int = 400,
    alpha_mag: float = 1.0,
    xi_r: float | None = None,
) -> FigureTable:
    """Strategy comparison: every SNR against interrogation time per coupling."""
    if points < 2:
        raise InvalidSpec(f"need at least 2 time points, got {points}")
    times = [4.0 * math.pi * k / (points - 1) for k in range(points)]
    grid = strategies.ComparisonGrid(
        coupling_ratios=tuple(float(c) for c in couplings),
        times=times,
        alpha_mag=alpha_mag,
        xi_r=xi_r,
    )
    rows = []
    for row in strategies.run_comparison(grid):
        rows.append(
            {
                "g_over_gc": row.coupling_ratio,
                "t": row.t,
                "snr_extract_static": row.snr_extract_static,
                "snr_extract_evolved": row.snr_extract_evolved,
                "snr_displaced": row.snr_displaced,
                "snr_normal_mode": row.snr_normal_mode,
                "snr_synergy": row.snr_synergy,
                "oracle_deviation": row.oracle_deviation,
            }
        )
    return FigureTable(
        name="figs3",
        columns=[
            "g_over_gc",
            "t",
            "snr_extract_static",
            "snr_extract_evolved",
            "snr_displaced",
            "snr_normal_mode",
            "snr_synergy",
            "oracle_deviation",
        ],
        rows=rows,
        spec={
            "figure": "figs3",
            "couplings": [float(c) for c in couplings],
            "points": points,
            "alpha_mag": alpha_mag,
            "xi_r": xi_r,
        },
    )


FIGURES: dict[str, Callable[..., FigureTable]] = {
    "fig2": figure_fig2,
    "figs1": figure_figs1,
    "figs2": figure_figs2,
    "figs3": figure_figs3,
}


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _grid_from_rows(rows, xcol, ycol, vcol):
    xs = sorted({row[xcol] for row in rows})
    ys = sorted({row[ycol] for row in rows})
    xi = {x: i for i, x in enumerate(xs)}
    yi = {y: i for i, y in enumerate(ys)}
    grid = np.full((len(ys), len(xs)), np.nan)
    for row in rows:
        v = row[vcol]
        grid[yi[row[ycol]], xi[row[xcol]]] = np.nan if v is None else v
    return np.array(xs), np.array(ys), grid


def _heatmap(ax, rows, vcol, title):
    from matplotlib.colors import LogNorm

    xs, ys, grid = _grid_from_rows(rows, "delta", "g_over_gc", vcol)
    positive = grid[np.isfinite(grid) & (grid > 0)]
    masked = np.ma.masked_where(~(np.isfinite(grid) & (grid > 0)), grid)
    mesh = ax.pcolormesh(
        xs,
        ys,
        masked,
        norm=LogNorm(vmin=positive.min(), vmax=positive.max()),
        shading="nearest",
        cmap="viridis",
    )
    ax.set_xlabel(r"$\delta/\kappa$")
    ax.set_ylabel(r"$g/g_c$")
    ax.set_title(title)
    return mesh


def render_png(table: FigureTable, path: str) -> None:
    """Render a preset's companion plot to ``path`` (Agg backend, no display)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    if table.name == "fig2":
        fig, (ax_a, ax_b) = plt.subplots(1, 2, figsize=(10, 4))
        rows_a = [r for r in table.rows if r["panel"] == "a"]
        mesh = _heatmap(ax_a, rows_a, "snr_amplitude", "amplitude-channel SNR")
        fig.colorbar(mesh, ax=ax_a)
        rows_b = [r for r in table.rows if r["panel"] == "b"]
        eps = [1.0 - r["g_over_gc"] for r in rows_b]
        ax_b.loglog(eps, [r["snr_amplitude"] for r in rows_b], "o-")
        ax_b.set_xlabel(r"$1 - g/g_c$")
        ax_b.set_ylabel("SNR")
        ax_b.set_title(r"divergence at $\delta/\kappa = 1/2$")
    elif table.name == "figs1":
        fig, axes = plt.subplots(1, 3, figsize=(15, 4))
        for ax, col in zip(
            axes, ("snr_amplitude", "snr_phase", "driven_qfi_total")
        ):
            mesh = _heatmap(ax, table.rows, col, col)
            fig.colorbar(mesh, ax=ax)
    elif table.name == "figs2":
        fig, ax = plt.subplots(figsize=(6, 4))
        ratios = sorted({r["Omega_over_omega"] for r in table.rows})
        for ratio in ratios:
            sub = [r for r in table.rows if r["Omega_over_omega"] == ratio]
            ax.plot(
                [r["g_over_gc"] for r in sub],
                [r["gap_slope_exact"] for r in sub],
                "o-",
                label=rf"$\Omega/\omega = {ratio:g}$",
            )
        any_ratio = [r for r in table.rows if r["Omega_over_omega"] == ratios[-1]]
        ax.plot(
            [r["g_over_gc"] for r in any_ratio],
            [r["gap_slope_effective"] for r in any_ratio],
            "k--",
            label="quadratic theory",
        )
        ax.set_xlabel(r"$g/g_c$")
        ax.set_ylabel(r"$d\,\Delta E/d\omega$")
        ax.legend()
    elif table.name == "figs3":
        couplings = sorted({r["g_over_gc"] for r in table.rows})
        n = len(couplings)
        ncols = 2
        nrows = (n + ncols - 1) // ncols
        fig, axes = plt.subplots(
            nrows, ncols, figsize=(5 * ncols, 3.5 * nrows), squeeze=False
        )
        for k, coupling in enumerate(couplings):
            ax = axes[k // ncols][k % ncols]
            sub = [r for r in table.rows if r["g_over_gc"] == coupling]
            ts = [r["t"] for r in sub]
            for col, label in (
                ("snr_extract_evolved", "evolved extraction"),
                ("snr_displaced", "displaced"),
                ("snr_normal_mode", "precessing"),
            ):
                ax.plot(ts, [r[col] for r in sub], label=label, lw=1)
            if sub[0]["snr_synergy"] is not None:
                ax.plot(
                    ts, [r["snr_synergy"] for r in sub], label="synergy", lw=1
                )
            ax.set_title(rf"$g/g_c = {coupling:g}$")
            ax.set_xlabel(r"$t$")
            ax.set_ylabel("SNR")
            if k == 0:
                ax.legend(fontsize=8)
        for k in range(n, nrows * ncols):
            axes[k // ncols][k % ncols].axis("off")
    else:
        raise InvalidSpec(f"no renderer for figure {table.name!r}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def emit_figure(
    name: str,
    out_path: str,
    fmt: str = "csv",
    timestamp: bool = True,
    plot: bool = True,
    **preset_args,
) -> list[str]:
    """Generate one preset, write its table, optionally render its PNG.

    Returns the list of files written (table first).  The PNG lands next to
    the table with the same stem.
    """
    if name not in FIGURES:
        raise InvalidSpec(
            f"unknown figure {name!r}; expected one of {sorted(FIGURES)}"
        )
    table = FIGURES[name](**preset_args)
    sweeps.write_table(
        table.columns, table.rows, out_path, fmt, spec=table.spec, timestamp=timestamp
    )
    written = [out_path]
    if plot:
        png = os.path.splitext(out_path)[0] + ".png"
        render_png(table, png)
        written.append(png)
    return written
