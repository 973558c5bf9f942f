"""Effective single-mode theory of the single-emitter model, and its strategies.

When the emitter splitting Omega is far above the cavity frequency omega,
integrating the emitter out leaves a single cavity mode with a
quadrature-squared correction, i.e. a squeezed effective ground state

    xi = (1/4) ln(1 - u),        u = g^2 / (omega * Omega),

and a softened effective frequency omega_eff = omega sqrt(1 - u).  All the
closed forms below run on the single combination u, so one parameter set
covers every ratio Omega/omega at fixed u; :func:`rabi_effective` warns when
the ratio is too small for the quadratic description to be trustworthy.

The second half of the module implements the measurement strategies that
convert this ground-state structure into frequency sensitivity: quadrature
statistics of the bare ground state (static and time-evolved), a coherently
displaced probe read against the breathing variance, a displaced probe
precessing at the effective frequency, and a displaced probe boosted by an
additional real squeezing pulse.  Each strategy reports its signal-to-noise
ratio as a function of interrogation time plus the coefficient of its
quadratic-in-time envelope, which is what the strategy lab compares.

Per-shot error propagation throughout: S = (d<M>/d omega)^2 / Var(M) for the
measured observable M, so "SNR" here is the Fisher information of that
single measured number.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

from .errors import InvalidSpec
from .params import RabiParams


class DispersiveRegimeWarning(UserWarning):
    """Emitted when the quadratic effective description is being stretched."""


class StrategyId(enum.Enum):
    """Identifiers for the frequency-estimation strategies."""

    EXTRACT_STATIC = "extract_static"
    EXTRACT_EVOLVED = "extract_evolved"
    DISPLACED_EXTRACT = "displaced_extract"
    NORMAL_MODE = "normal_mode"
    SYNERGY = "synergy"


@dataclass(frozen=True)
class RabiEffective:
    """Effective single-mode description: squeezing, occupation, soft frequency."""

    xi: float
    n_virtual: float
    omega_eff: float


@dataclass(frozen=True)
class StrategyResult:
    """One strategy's per-shot sensitivity.

    ``snr_of_t`` maps an interrogation time to the signal-to-noise ratio.
    ``envelope`` is the coefficient E of the strategy's running bound:
    S(t) <= E t^2 for the time-quadratic strategies, with equality on the
    breathing/precession peaks; for the static extraction strategy S(t) is
    the constant E itself and ``time_quadratic`` is False.
    """

    strategy_id: StrategyId
    envelope: float
    snr_of_t: Callable[[float], float] = field(repr=False)
    time_quadratic: bool = True


# ---------------------------------------------------------------------------
# effective single-mode description
# ---------------------------------------------------------------------------


def _u(p: RabiParams, operation: str) -> float:
    p.require_normal_phase(operation)
    return p.coupling_sq_ratio


def rabi_effective(p: RabiParams) -> RabiEffective:
    """Squeezing parameter, virtual occupation, and effective frequency.

    Warns (without failing) when Omega/omega < 100, where the quadratic
    elimination of the emitter starts to pick up relative errors of order
    omega/Omega; the closed forms are still returned.
    """
    u = _u(p, "rabi_effective")
    if not p.is_dispersive:
        warnings.warn(
            "Omega/omega < 100: the effective single-mode description "
            "carries corrections of order omega/Omega",
            DispersiveRegimeWarning,
            stacklevel=2,
        )
    xi = 0.25 * math.log1p(-u)
    return RabiEffective(
        xi=xi,
        n_virtual=math.sinh(xi) ** 2,
        omega_eff=p.omega * math.sqrt(1.0 - u),
    )


def n_virtual_near_threshold(p: RabiParams) -> float:
    """Divergent part of the virtual occupation, (1/4)(1 - u)^{-1/2}.

    This is the resource count that the asymptotic scaling laws of the
    strategy envelopes are expressed in.
    """
    u = _u(p, "n_virtual_near_threshold")
    return 0.25 / math.sqrt(1.0 - u)


def effective_gap_derivative(p: RabiParams) -> float:
    """d omega_eff / d omega with the emitter splitting held fixed.

    omega_eff = omega sqrt(1 - u) and u = g^2/(omega Omega) falls off as
    1/omega, so the slope is (2 - u) / (2 sqrt(1 - u)); it diverges at
    threshold, which is the single-emitter version of the dispersion
    sensitivity used by the precessing-probe strategy.
    """
    u = _u(p, "effective_gap_derivative")
    return (2.0 - u) / (2.0 * math.sqrt(1.0 - u))


def _static_snr(u: float, omega: float) -> float:
    # Shared expression tree: the ground-state QFI about omega equals the
    # error-propagation SNR of a static X^2 measurement, and the two public
    # functions must stay bit-for-bit identical.
    return u * u / (8.0 * omega * omega * (1.0 - u) ** 2)


def _coherent_envelope(u: float, alpha_mag: float) -> float:
    # Shared with rabi_coherent_qfi for the same bit-for-bit identity.
    return alpha_mag * alpha_mag * (2.0 - u) ** 2 / (1.0 - u)


def rabi_ground_qfi(p: RabiParams) -> float:
    """Quantum Fisher information of the bare effective ground state.

    2 (d xi/d omega)^2 = u^2 / (8 omega^2 (1 - u)^2) with the emitter
    splitting held fixed.  A quadrature-variance readout saturates this, so
    it coincides exactly with the static extraction strategy.
    """
    u = _u(p, "rabi_ground_qfi")
    return _static_snr(u, p.omega)


def rabi_coherent_qfi(p: RabiParams, alpha_mag: float, t: float) -> float:
    """QFI of a displaced probe precessing at the effective frequency.

    4 |alpha|^2 t^2 (d omega_eff/d omega)^2 =
    |alpha|^2 t^2 (2 - u)^2 / (1 - u); the precession-peak envelope of the
    corresponding measurement strategy, evaluated as a full QFI.
    """
    u = _u(p, "rabi_coherent_qfi")
    return _coherent_envelope(u, alpha_mag) * t * t


# ---------------------------------------------------------------------------
# measurement strategies
# ---------------------------------------------------------------------------


def strategy_extract_static(p: RabiParams) -> StrategyResult:
    """Measure X^2 on the undriven ground state.

    For a squeezed vacuum, Var(X^2) = 2 <X^2>^2, so the error-propagation
    SNR is (1/2)(d ln <X^2> / d omega)^2 = 2 (d xi/d omega)^2 -- exactly the
    ground-state QFI.  Time does not enter: the plateau is the envelope.
    """
    u = _u(p, "strategy_extract_static")
    value = _static_snr(u, p.omega)
    return StrategyResult(
        strategy_id=StrategyId.EXTRACT_STATIC,
        envelope=value,
        snr_of_t=lambda t: value,
        time_quadratic=False,
    )


def strategy_extract_evolved(p: RabiParams, t: float) -> float:
    """Measure X^2 after letting the squeezed ground state breathe for time t.

    Free evolution at the bare frequency rotates the squeezing ellipse, so
    <X^2>(t) = (2 - u + u cos 2wt) / (8 sqrt(1 - u)) and the SNR is
    (1/2)(d ln <X^2>/d omega)^2 with both the ellipse (through u) and the
    rotation angle (through wt) frequency-dependent.  At t = 0 this reduces
    bit-for-bit to the static strategy; it vanishes identically at g = 0
    because the vacuum carries no frequency information.
    """
    u = _u(p, "strategy_extract_evolved")
    w = p.omega
    du = -u / w  # du/d omega at fixed emitter splitting
    c2 = math.cos(2.0 * w * t)
    s2 = math.sin(2.0 * w * t)
    term1 = (-du * (1.0 - c2) - 2.0 * u * t * s2) / (2.0 - u + u * c2)
    term2 = du / (2.0 * (1.0 - u))
    return 0.5 * (term1 + term2) ** 2


def strategy_displaced(p: RabiParams, alpha_mag: float) -> StrategyResult:
    """Displace the squeezed ground state and read <X> against its breathing.

    The mean oscillates at the bare frequency while the variance breathes
    between the squeezed and anti-squeezed values, so

        S(t) = 8 |alpha|^2 t^2 sqrt(1-u) sin^2(wt) / (2 - u + u cos 2wt),

    maximized when the anti-squeezed quadrature carries the signal:
    envelope 4 |alpha|^2 / sqrt(1 - u).
    """
    u = _u(p, "strategy_displaced")
    w = p.omega
    a2 = alpha_mag * alpha_mag
    root = math.sqrt(1.0 - u)

    def snr(t: float) -> float:
        s = math.sin(w * t)
        c2 = math.cos(2.0 * w * t)
        return 8.0 * a2 * t * t * root * s * s / (2.0 - u + u * c2)

    return StrategyResult(
        strategy_id=StrategyId.DISPLACED_EXTRACT,
        envelope=4.0 * a2 / root,
        snr_of_t=snr,
    )


def strategy_normal_mode(p: RabiParams, alpha_mag: float) -> StrategyResult:
    """Displace the effective normal mode and track its precession phase.

    A coherent probe of the *effective* mode precesses at omega_eff, whose
    frequency slope diverges at threshold; with vacuum-level readout noise

        S(t) = |alpha|^2 t^2 sin^2(omega_eff t) (2 - u)^2 / (1 - u),

    envelope |alpha|^2 (2 - u)^2 / (1 - u) -- identical to the displaced
    probe's at u = 0 but asymptotically twice its scaling near threshold.
    """
    u = _u(p, "strategy_normal_mode")
    weff = p.omega * math.sqrt(1.0 - u)
    env = _coherent_envelope(u, alpha_mag)

    def snr(t: float) -> float:
        s = math.sin(weff * t)
        return env * t * t * s * s

    return StrategyResult(
        strategy_id=StrategyId.NORMAL_MODE,
        envelope=env,
        snr_of_t=snr,
    )


def strategy_synergy(
    p: RabiParams, alpha_mag: float, xi_r: float = 0.0
) -> StrategyResult:
    """Displaced precession read out through an extra real squeezing pulse.

    An additional single-mode squeeze xi_r <= 0 before detection suppresses
    the readout quadrature's noise by e^{2 xi_r} while the virtual squeezing
    contributes e^{-4 xi}; normalized at the near-threshold precession peaks,

        S(t) = |alpha|^2 t^2 sin^2(omega_eff t) e^{-4 xi - 2 xi_r},

    envelope |alpha|^2 e^{-2 xi_r} / (1 - u).  The two resources multiply,
    which is the synergy: real squeezing restores the factor the displaced
    strategy loses, on top of the virtual divergence.
    """
    if xi_r > 0.0:
        raise InvalidSpec(
            f"xi_r is a readout squeezing parameter and must be <= 0, got {xi_r!r}"
        )
    u = _u(p, "strategy_synergy")
    weff = p.omega * math.sqrt(1.0 - u)
    # e^{-4 xi} = 1/(1 - u) exactly for xi = (1/4) ln(1 - u)
    env = alpha_mag * alpha_mag * math.exp(-2.0 * xi_r) / (1.0 - u)

    def snr(t: float) -> float:
        s = math.sin(weff * t)
        return env * t * t * s * s

    return StrategyResult(
        strategy_id=StrategyId.SYNERGY,
        envelope=env,
        snr_of_t=snr,
    )
