"""Self-check registry: cross-route consistency checks runnable from the CLI.

Each check compares two independently computed quantities (closed form vs
truncated-space numerics, closed form vs finite differences, or two closed
forms that must agree identically) and reports a dimensionless deviation
against a named tolerance.  Tolerances can be overridden per check, which is
mainly useful for tightening them in regression runs.

The checks deliberately re-derive their reference numbers from first
principles at call time instead of caching module-level constants, so that a
convention change anywhere in the package (quadrature normalization, squeezing
sign, detuning sign) makes at least one check fail loudly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import dicke, driven, fock, gaussian, oracles, rabi, strategies
from .errors import InvalidSpec
from .params import DerivativeConvention, DickeParams, DriveParams, RabiParams


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "ok" if self.passed else "FAIL"
        text = (
            f"{status:4s} {self.name:40s} "
            f"deviation={self.deviation:.3e} tolerance={self.tolerance:.3e}"
        )
        if self.detail:
            text += f"  ({self.detail})"
        return text


@dataclass
class ValidationReport:
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def n_failed(self) -> int:
        return sum(not r.passed for r in self.results)

    def lines(self) -> list[str]:
        out = [r.line() for r in self.results]
        out.append(
            f"{len(self.results) - self.n_failed}/{len(self.results)} checks passed"
        )
        return out


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b), 1e-300)
    return abs(a - b) / scale


# Each check function takes its tolerance and returns (deviation, detail).
CheckFn = Callable[[float], tuple[float, str]]

_REGISTRY: dict[str, tuple[float, CheckFn]] = {}


def _check(name: str, tolerance: float):
    def deco(fn: CheckFn) -> CheckFn:
        _REGISTRY[name] = (tolerance, fn)
        return fn

    return deco


# ---------------------------------------------------------------------------
# Convention guards
# ---------------------------------------------------------------------------


@_check("gaussian-orientation", 1e-12)
def _gaussian_orientation(tol: float) -> tuple[float, str]:
    # Hard-coded references: X = (a + a†)/2 gives vacuum Var(X) = 1/4, and a
    # positive squeezing parameter squeezes X.  If the vacuum normalization
    # constant is edited these numbers no longer match what the constructors
    # produce.
    vac = gaussian.GaussianState.vacuum()
    dev = abs(vac.var_x() - 0.25)
    sq = gaussian.GaussianState.squeezed_vacuum(0.3)
    dev = max(dev, abs(sq.var_x() - math.exp(-0.6) / 4.0))
    dev = max(dev, abs(sq.var_p() - math.exp(0.6) / 4.0))
    if not sq.var_x() < vac.var_x() < sq.var_p():
        dev = max(dev, 1.0)
    return dev, "vacuum Var(X)=1/4 and positive xi squeezes X"


@_check("quadrature-commutator", 1e-12)
def _quadrature_commutator(tol: float) -> tuple[float, str]:
    space = fock.TruncatedSpace([30])
    a = space.destroy(0)
    x = (a + a.conj().T) / 2.0
    p = (a - a.conj().T) / 2.0j
    comm = (x @ p - p @ x).toarray()
    # On the truncated space the commutator equals (i/2) I except in the last
    # basis state; probe the bulk.
    dev = max(abs(comm[k, k] - 0.5j) for k in range(20))
    return float(dev), "[X, P] = i/2 on the truncated bulk"


@_check("symplectic-purity", 1e-10)
def _symplectic_purity(tol: float) -> tuple[float, str]:
    rng = np.random.default_rng(7)
    dev = 0.0
    for _ in range(5):
        state = gaussian.GaussianState.displaced_squeezed(
            rng.normal(), rng.normal(scale=0.4)
        )
        op = gaussian.SymplecticOp.rotation([rng.uniform(0, 2 * math.pi)])
        state = op(state)
        state = gaussian.SymplecticOp.squeeze([rng.normal(scale=0.3)])(state)
        dev = max(dev, abs(state.purity() - 1.0))
    return dev, "rotations and squeezes preserve purity"


@_check("moment-closure", 1e-8)
def _moment_closure(tol: float) -> tuple[float, str]:
    # Cross-route: build D(alpha) S(xi) |0> in a truncated number basis by
    # explicit matrix exponentials and compare <X^2>, <X^4> against the
    # Gaussian closed forms.
    from scipy.linalg import expm

    cutoff = 60
    dim = cutoff + 1
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    ad = a.conj().T
    x = (a + ad) / 2.0
    dev = 0.0
    for alpha, xi in ((0.7, 0.0), (0.0, 0.4), (0.9, -0.3)):
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        vec = expm(0.5 * xi * (a @ a - ad @ ad)) @ vec
        vec = expm(alpha * ad - np.conj(alpha) * a) @ vec
        vec /= np.linalg.norm(vec)
        x2 = float(np.real(vec.conj() @ (x @ x) @ vec))
        x4 = float(np.real(vec.conj() @ (x @ x @ x @ x) @ vec))
        state = gaussian.GaussianState.displaced_squeezed(alpha, xi)
        dev = max(dev, _rel(x2, state.x2_moment()), _rel(x4, state.x4_moment()))
    return dev, "Fock-basis <X^2>, <X^4> match Gaussian closed forms"


@_check("free-rotation-moment", 1e-12)
def _free_rotation_moment(tol: float) -> tuple[float, str]:
    state = gaussian.GaussianState.squeezed_vacuum(-0.5)
    rotated = gaussian.evolve_free(state, 1.0, math.pi / 4)
    # Var(X) after a quarter-turn mixes the two squeezed variances equally:
    # (e^{2*0.5} + e^{-2*0.5}) / 8 = cosh(1)/4.
    return abs(rotated.var_x() - math.cosh(1.0) / 4.0), "squeezed state quarter-turn"


@_check("overlap-closed-forms", 1e-12)
def _overlap_closed_forms(tol: float) -> tuple[float, str]:
    vac = gaussian.GaussianState.vacuum()
    dev = 0.0
    for amag in (0.5, 1.3):
        coh = gaussian.GaussianState.coherent(amag)
        dev = max(dev, abs(gaussian.overlap(vac, coh) - math.exp(-(amag**2) / 2)))
    for xi in (0.3, -0.8):
        sq = gaussian.GaussianState.squeezed_vacuum(xi)
        dev = max(dev, abs(gaussian.overlap(vac, sq) - 1.0 / math.sqrt(math.cosh(xi))))
    return dev, "|<0|alpha>| and |<0|S(xi)|0>|"


@_check("fidelity-qfi-coherent", 1e-6)
def _fidelity_qfi_coherent(tol: float) -> tuple[float, str]:
    # A coherent state whose phase advances as exp(-i w t) carries QFI
    # 4 |alpha|^2 t^2 about w.
    t = 1.7
    dev = 0.0
    for amag in (0.5, 1.0, 2.0):

        def family(w: float, amag: float = amag) -> gaussian.GaussianState:
            return gaussian.GaussianState.coherent(amag * np.exp(-1j * w * t))

        q = gaussian.fidelity_qfi(family, 1.0)
        dev = max(dev, _rel(q, 4.0 * amag**2 * t**2))
    return dev, "QFI of a rotating coherent state"


# ---------------------------------------------------------------------------
# Two-mode closed forms
# ---------------------------------------------------------------------------

_GRID = tuple(
    DickeParams.from_coupling_ratio(r) for r in (0.1, 0.35, 0.6, 0.85, 0.95, 0.99)
)


@_check("frequency-trace-identity", 1e-12)
def _frequency_trace(tol: float) -> tuple[float, str]:
    dev = 0.0
    for p in (*_GRID, DickeParams(omega=1.0, Omega=4.0, g=1.0)):
        nf = dicke.normal_frequencies(p)
        dev = max(
            dev,
            _rel(nf.omega_minus**2 + nf.omega_plus**2, p.omega**2 + p.Omega**2),
        )
    return dev, "sum of squared normal frequencies"


@_check("frequency-det-identity", 1e-12)
def _frequency_det(tol: float) -> tuple[float, str]:
    dev = 0.0
    for p in (*_GRID, DickeParams(omega=1.0, Omega=4.0, g=1.0)):
        nf = dicke.normal_frequencies(p)
        target = math.sqrt(p.omega * p.Omega * (p.omega * p.Omega - p.g**2))
        dev = max(dev, _rel(nf.omega_minus * nf.omega_plus, target))
    return dev, "product of normal frequencies"


@_check("resonant-frequency-squeezing", 1e-12)
def _resonant_frequency_squeezing(tol: float) -> tuple[float, str]:
    # At resonance the normal frequencies are w exp(2 xi_pm).
    dev = 0.0
    for p in _GRID:
        nf = dicke.normal_frequencies(p)
        sq = dicke.squeezing_parameters(p)
        dev = max(dev, _rel(nf.omega_minus, p.omega * math.exp(2 * sq.xi_minus)))
        dev = max(dev, _rel(nf.omega_plus, p.omega * math.exp(2 * sq.xi_plus)))
    return dev, "normal frequencies vs squeezing parameters"


@_check("occupation-identity", 1e-12)
def _occupation_identity(tol: float) -> tuple[float, str]:
    dev = 0.0
    for p in _GRID:
        sq = dicke.squeezing_parameters(p)
        dev = max(dev, _rel(math.sinh(sq.xi_minus) ** 2, dicke.soft_mode_occupation(p)))
        n_c, n_d = dicke.virtual_mode_occupation(p)
        dev = max(dev, _rel(n_c, math.sinh(sq.xi_minus) ** 2))
        dev = max(dev, _rel(n_d, math.sinh(sq.xi_plus) ** 2))
        total = dicke.bare_mode_occupation(sq)
        dev = max(dev, _rel(2 * total, n_c + n_d))
    return dev, "soft-mode occupation radical form vs sinh^2"


@_check("qfi-near-threshold-bound", 1.0)
def _qfi_bound(tol: float) -> tuple[float, str]:
    # |exact/approx - 1| <= (1 - r); report the worst ratio of the two sides.
    worst = 0.0
    for ratio in (0.5, 0.8, 0.9, 0.99, 0.999):
        p = DickeParams.from_coupling_ratio(ratio)
        exact = dicke.ground_state_qfi(p)
        approx = dicke.ground_state_qfi_near_threshold(p)
        worst = max(worst, abs(exact / approx - 1.0) / (1.0 - ratio))
    return worst, "relative error of near-threshold form bounded by 1-r"


@_check("coherent-ratio-identity", 1e-12)
def _coherent_ratio(tol: float) -> tuple[float, str]:
    dev = 0.0
    for p in _GRID:
        sq = dicke.squeezing_parameters(p)
        cq = dicke.coherent_qfi(p, 1.0, 1.0)
        rs = dicke.real_squeezing_qfi(p, 1.0, 1.0)
        dev = max(dev, _rel(cq.asymptote / rs, math.exp(-2 * sq.xi_minus) / 4.0))
    return dev, "asymptote over real-squeezing reference"


@_check("two-mode-ground-occupation", 1e-10)
def _two_mode_ground(tol: float) -> tuple[float, str]:
    dev = 0.0
    for ratio in (0.5, 0.9):
        p = DickeParams.from_coupling_ratio(ratio)
        state = gaussian.make_two_mode_ground(p)
        want = dicke.bare_mode_occupation(dicke.squeezing_parameters(p))
        for mode in (0, 1):
            dev = max(dev, _rel(state.photon_number(mode), want))
        dev = max(dev, abs(state.purity() - 1.0))
    return dev, "lab-mode occupation of the correlated ground state"


@_check("ground-qfi-oracle", 1e-4)
def _ground_qfi_oracle(tol: float) -> tuple[float, str]:
    dev = 0.0
    for ratio in (0.5, 0.9):
        p = DickeParams.from_coupling_ratio(ratio)
        for conv in DerivativeConvention:
            closed = dicke.ground_state_qfi(p, convention=conv)
            num = oracles.ground_qfi_oracle(p, convention=conv)
            dev = max(dev, _rel(closed, num))
    return dev, "closed-form QFI vs fidelity-response numerics"


@_check("gap-vs-truncated-pair", 1e-8)
def _gap_vs_pair(tol: float) -> tuple[float, str]:
    dev = 0.0
    for p in (
        DickeParams.from_coupling_ratio(0.5),
        DickeParams.from_coupling_ratio(0.9),
        DickeParams(omega=1.0, Omega=4.0, g=1.0),
    ):
        space = fock.TruncatedSpace([40, 40])
        gap = fock.excitation_gap(fock.build_hp_two_mode(p, space))
        dev = max(dev, _rel(gap, dicke.normal_frequencies(p).omega_minus))
    return dev, "sparse-diagonalized pair gap vs closed form"


@_check("harmonic-spectrum", 1e-12)
def _harmonic_spectrum(tol: float) -> tuple[float, str]:
    w = 0.7
    space = fock.TruncatedSpace([40])
    h = fock.shifted_quadratic_hamiltonian(space, w, 0.0)
    vals = fock.lowest_eigenvalues(h, 7)
    dev = max(abs(vals[k] - vals[0] - k * w) for k in range(7))
    return float(dev), "uncoupled mode ladder spacing"


@_check("single-emitter-match", 1e-12)
def _single_emitter_match(tol: float) -> tuple[float, str]:
    # The collective model with one emitter must reproduce the qubit-cavity
    # model spectrum exactly (same matrix up to basis ordering).
    rp = RabiParams(omega=1.0, Omega=1.7, g=0.8)
    dp = DickeParams(omega=1.0, Omega=1.7, g=0.8, n_atoms=1)
    space_r = fock.TruncatedSpace([40], spin_n=1)
    vals_r = fock.lowest_eigenvalues(fock.build_rabi(rp, space_r), 6)
    vals_d = fock.lowest_eigenvalues(fock.build_dicke_finite(dp, space_r), 6)
    return float(np.max(np.abs(vals_r - vals_d))), "qubit-cavity vs one-emitter model"


@_check("finite-size-gap-monotone", 0.0)
def _finite_size_monotone(tol: float) -> tuple[float, str]:
    # The excitation gap at fixed g/g_c decreases monotonically with emitter
    # number toward the two-mode limit; deviation is the worst violation.
    p = DickeParams.from_coupling_ratio(0.9)
    limit = dicke.normal_frequencies(p).omega_minus
    gaps = []
    for n in (2, 4, 8):
        pn = DickeParams(omega=1.0, Omega=1.0, g=p.g, n_atoms=n)
        space = fock.TruncatedSpace([50], spin_n=n)
        gaps.append(fock.excitation_gap(fock.build_dicke_finite(pn, space)))
    violation = 0.0
    for prev, nxt in zip(gaps, gaps[1:]):
        violation = max(violation, nxt - prev)
    violation = max(violation, limit - gaps[-1])
    return violation, "gap decreases with emitter number toward the pair limit"


@_check("builder-hermiticity", 1e-12)
def _builder_hermiticity(tol: float) -> tuple[float, str]:
    p = DickeParams(omega=1.0, Omega=2.0, g=1.1, n_atoms=3)
    rp = RabiParams(omega=1.0, Omega=2.0, g=0.9)
    space2 = fock.TruncatedSpace([12, 12])
    space_s = fock.TruncatedSpace([12], spin_n=3)
    space_q = fock.TruncatedSpace([12], spin_n=1)
    dev = 0.0
    for h in (
        fock.build_hp_two_mode(p, space2),
        fock.build_dicke_finite(p, space_s),
        fock.build_rabi(rp, space_q),
    ):
        dev = max(dev, float(abs(h - h.conj().T).max()))
    return dev, "all model builders produce Hermitian matrices"


# ---------------------------------------------------------------------------
# Driven-cavity checks
# ---------------------------------------------------------------------------


@_check("steady-state-amplitude", 1e-10)
def _steady_amplitude(tol: float) -> tuple[float, str]:
    dev = 0.0
    for kappa, delta in ((1.0, 0.0), (1.0, 0.5), (0.3, -1.2)):
        d = DriveParams(kappa=kappa, eta=0.8, delta=delta, t=1.0)
        resp = driven.steady_state_response(d)
        closed = 2 * d.eta / math.hypot(kappa, 2 * delta)
        dev = max(dev, _rel(resp.amp_intracavity, closed))
        state = driven.lindblad_steady_state(d)
        num = math.hypot(state.mean_x(), state.mean_p())
        dev = max(dev, _rel(num, closed))
        dev = max(dev, abs(state.purity() - 1.0))
        dev = max(dev, _rel(resp.output_flux, kappa * closed**2))
    return dev, "Lyapunov steady state vs closed-form response"


@_check("steady-state-phase", 1e-10)
def _steady_phase(tol: float) -> tuple[float, str]:
    dev = 0.0
    for delta in (-1.0, -0.2, 0.0, 0.2, 1.0):
        d = DriveParams(kappa=0.8, eta=1.0, delta=delta, t=1.0)
        resp = driven.steady_state_response(d)
        state = driven.lindblad_steady_state(d)
        num = math.atan2(-state.mean_p(), -state.mean_x())
        dev = max(dev, abs(num - resp.phase))
    return dev, "response phase vs steady-state mean orientation"


@_check("driven-decomposition", 1e-12)
def _driven_decomposition(tol: float) -> tuple[float, str]:
    dev = 0.0
    for ratio in (0.0, 0.5, 0.9):
        p = DickeParams.from_coupling_ratio(ratio)
        for delta in (-0.7, 0.0, 0.4):
            d = DriveParams(kappa=1.0, eta=1.0, delta=delta, t=1.0)
            total = driven.driven_qfi_total(p, d)
            parts = driven.snr_amplitude(p, d) + driven.snr_phase(p, d)
            dev = max(dev, _rel(total, parts))
    return dev, "amplitude + phase channels sum to the total"


@_check("driven-amplitude-oracle", 1e-6)
def _driven_amplitude_oracle(tol: float) -> tuple[float, str]:
    p = DickeParams.from_coupling_ratio(0.99)
    d = DriveParams(kappa=1.0, eta=1.0, delta=0.5, t=1.0)
    closed = driven.snr_amplitude(p, d)
    num = oracles.fd_snr_amplitude(p, d)
    return _rel(closed, num), "closed form vs finite-difference transduction"


@_check("driven-phase-oracle", 1e-6)
def _driven_phase_oracle(tol: float) -> tuple[float, str]:
    p = DickeParams.from_coupling_ratio(0.99)
    d = DriveParams(kappa=1.0, eta=1.0, delta=0.5, t=1.0)
    closed = driven.snr_phase(p, d)
    num = oracles.fd_snr_phase(p, d)
    return _rel(closed, num), "closed form vs finite-difference transduction"


@_check("amplitude-dies-on-resonance", 0.0)
def _amplitude_dies(tol: float) -> tuple[float, str]:
    p = DickeParams.from_coupling_ratio(0.9)
    d = DriveParams(kappa=1.0, eta=1.0, delta=0.0, t=1.0)
    return abs(driven.snr_amplitude(p, d)), "amplitude channel vanishes at zero detuning"


@_check("phase-peaks-on-resonance", 0.0)
def _phase_peaks(tol: float) -> tuple[float, str]:
    p = DickeParams.from_coupling_ratio(0.9)
    d0 = DriveParams(kappa=1.0, eta=1.0, delta=0.0, t=1.0)
    peak = driven.snr_phase(p, d0)
    violation = 0.0
    for delta in (-1.5, -0.3, 0.2, 0.9):
        d = DriveParams(kappa=1.0, eta=1.0, delta=delta, t=1.0)
        violation = max(violation, driven.snr_phase(p, d) - peak)
    return violation, "phase channel maximal at zero detuning"


@_check("optimal-detuning", 1e-9)
def _optimal_detuning(tol: float) -> tuple[float, str]:
    from scipy.optimize import minimize_scalar

    kappa = 0.8
    p = DickeParams.from_coupling_ratio(0.9)

    def neg(delta: float) -> float:
        d = DriveParams(kappa=kappa, eta=1.0, delta=delta, t=1.0)
        return -driven.snr_amplitude(p, d)

    res = minimize_scalar(neg, bounds=(1e-4, 2 * kappa), method="bounded",
                          options={"xatol": 1e-12})
    closed = driven.optimal_amplitude_detuning(kappa)
    return abs(res.x - closed) / kappa, "numeric argmax vs kappa / (2 sqrt 2)"


@_check("near-threshold-amplitude", 5e-3)
def _near_threshold_amplitude(tol: float) -> tuple[float, str]:
    p = DickeParams.from_coupling_ratio(1.0 - 1e-8)
    d = DriveParams(kappa=1.0, eta=1.0, delta=0.5, t=1.0)
    exact = driven.snr_amplitude(p, d)
    approx = driven.snr_amplitude_near_threshold(p, d)
    return _rel(exact, approx), "occupation-squared form converges at threshold"


@_check("homodyne-reference", 1e-15)
def _homodyne_reference(tol: float) -> tuple[float, str]:
    dev = 0.0
    for t in (0.5, 1.0, 10.0):
        dev = max(dev, _rel(driven.homodyne_variance(t), 1.0 / (4.0 * t)))
        dev = max(
            dev,
            _rel(driven.homodyne_variance(t, xi_real=-0.5),
                 math.exp(-1.0) / (4.0 * t)),
        )
    return dev, "shot-noise floor scales as 1/(4t)"


# ---------------------------------------------------------------------------
# Single-emitter strategy checks
# ---------------------------------------------------------------------------


@_check("static-strategy-identity", 0.0)
def _static_identity(tol: float) -> tuple[float, str]:
    dev = 0.0
    for ratio in (0.3, 0.9, 0.99):
        p = RabiParams.from_coupling_ratio(ratio)
        a = rabi.strategy_extract_static(p).envelope
        b = rabi.rabi_ground_qfi(p)
        dev = max(dev, abs(a - b))
    return dev, "static extraction envelope equals the ground-state value"


@_check("normal-mode-strategy-identity", 0.0)
def _normal_mode_identity(tol: float) -> tuple[float, str]:
    dev = 0.0
    for ratio in (0.3, 0.9, 0.99):
        p = RabiParams.from_coupling_ratio(ratio)
        a = rabi.strategy_normal_mode(p, 1.3).envelope
        b = rabi.rabi_coherent_qfi(p, 1.3, 1.0)
        dev = max(dev, abs(a - b))
    return dev, "coherent-probe envelope equals the unit-time closed form"


@_check("evolved-reduces-to-static", 1e-12)
def _evolved_reduces(tol: float) -> tuple[float, str]:
    dev = 0.0
    for ratio in (0.3, 0.9, 0.99):
        p = RabiParams.from_coupling_ratio(ratio)
        dev = max(
            dev,
            _rel(rabi.strategy_extract_evolved(p, 0.0),
                 rabi.strategy_extract_static(p).envelope),
        )
    return dev, "zero-time evolved extraction matches the static value"


@_check("evolved-vanishes-uncoupled", 0.0)
def _evolved_vanishes(tol: float) -> tuple[float, str]:
    p = RabiParams(omega=1.0, Omega=1e4, g=0.0)
    dev = max(abs(rabi.strategy_extract_evolved(p, t)) for t in (0.0, 0.7, 3.1))
    return dev, "no signal without coupling"


@_check("displaced-envelope-bound", 1e-12)
def _displaced_bound(tol: float) -> tuple[float, str]:
    violation = 0.0
    for ratio in (0.5, 0.9, 0.99):
        p = RabiParams.from_coupling_ratio(ratio)
        result = rabi.strategy_displaced(p, 1.0)
        for t in np.linspace(0.01, 12.0, 80):
            bound = result.envelope * t * t
            violation = max(violation, (result.snr_of_t(t) - bound) / bound)
    return violation, "time-resolved signal never exceeds envelope * t^2"


@_check("strategy-oracle-agreement", 1e-6)
def _strategy_oracles(tol: float) -> tuple[float, str]:
    grid = strategies.ComparisonGrid(
        coupling_ratios=(0.5, 0.9), times=(0.0, 0.8, 2.4), alpha_mag=1.0
    )
    rows = strategies.run_comparison(grid)
    return max(row.oracle_deviation for row in rows), \
        "closed-form strategies vs moment-transduction numerics"


@_check("crossover-bracket", 1e-9)
def _crossover_bracket(tol: float) -> tuple[float, str]:
    u_star = strategies.crossover_coupling()
    if not 0.81 < u_star < 0.9801:
        return 1.0, "root escaped the bracket"
    env_d = 4.0 / math.sqrt(1.0 - u_star)
    env_n = (2.0 - u_star) ** 2 / (1.0 - u_star)
    return _rel(env_d, env_n), "envelopes agree at the crossover coupling"


@_check("scaling-exponents", 0.05)
def _scaling_exponents(tol: float) -> tuple[float, str]:
    targets = {
        rabi.StrategyId.NORMAL_MODE: 2.0,
        rabi.StrategyId.DISPLACED_EXTRACT: 1.0,
        rabi.StrategyId.SYNERGY: 2.0,
    }
    dev = 0.0
    for sid, want in targets.items():
        slope = strategies.scaling_exponent(sid)
        dev = max(dev, abs(slope - want))
    return dev, "near-threshold envelope scaling in the virtual occupation"


@_check("synergy-squeezing-gain", 1e-12)
def _synergy_gain(tol: float) -> tuple[float, str]:
    # Injected squeezing must help: envelope with xi_r < 0 strictly above the
    # unsqueezed one by exactly exp(-2 xi_r).
    p = RabiParams.from_coupling_ratio(0.9)
    base = rabi.strategy_synergy(p, 1.0).envelope
    boosted = rabi.strategy_synergy(p, 1.0, xi_r=-0.5).envelope
    return _rel(boosted, base * math.exp(1.0)), "gain factor exp(-2 xi_r)"


@_check("rabi-ground-qfi-oracle", 1e-4)
def _rabi_ground_oracle(tol: float) -> tuple[float, str]:
    dev = 0.0
    for ratio in (0.5, 0.9):
        p = RabiParams.from_coupling_ratio(ratio)
        closed = rabi.rabi_ground_qfi(p)
        num = oracles.rabi_ground_qfi_oracle(p)
        dev = max(dev, _rel(closed, num))
    return dev, "effective-model ground QFI vs fidelity-response numerics"


CHECK_NAMES: tuple[str, ...] = tuple(_REGISTRY)


def run_validation(
    tolerance_overrides: dict[str, float] | None = None,
    names: tuple[str, ...] | None = None,
) -> ValidationReport:
    """Run the named consistency checks and collect a report.

    ``tolerance_overrides`` maps check names to replacement tolerances;
    ``names`` restricts the run to a subset (preserving registry order).
    Unknown names in either argument raise :class:`InvalidSpec`.
    """
    overrides = dict(tolerance_overrides or {})
    unknown = set(overrides) - set(_REGISTRY)
    if unknown:
        raise InvalidSpec(f"unknown check names: {sorted(unknown)}")
    if names is not None:
        unknown = set(names) - set(_REGISTRY)
        if unknown:
            raise InvalidSpec(f"unknown check names: {sorted(unknown)}")
        selected = [n for n in _REGISTRY if n in set(names)]
    else:
        selected = list(_REGISTRY)

    report = ValidationReport()
    for name in selected:
        default_tol, fn = _REGISTRY[name]
        tol = overrides.get(name, default_tol)
        deviation, detail = fn(tol)
        report.results.append(
            CheckResult(
                name=name,
                passed=deviation <= tol,
                deviation=float(deviation),
                tolerance=float(tol),
                detail=detail,
            )
        )
    return report
