"""Closed-form normal-phase theory of the coupled-boson (collective) model.

The model is two bosonic modes -- a cavity at frequency ``omega`` and a
bosonized matter mode at ``Omega`` -- coupled bilinearly with strength g/2
through their position quadratures.  Its soft normal mode loses its
restoring force at g_c = sqrt(omega * Omega); everything here lives strictly
below that instability (the normal phase).

At resonance (omega == Omega) the ground state factorizes into two
independently squeezed normal modes c = (a - b)/sqrt(2), d = (a + b)/sqrt(2)
with squeezing parameters

    xi_minus = (1/4) ln(1 - g/g_c),    xi_plus = (1/4) ln(1 + g/g_c),

which is the closed-form backbone every other quantity in this module is
built from.  The independent numerical routes (:mod:`uscmet.gaussian`,
:mod:`uscmet.fock`) never import these formulas.

Frequency-derivative conventions are explained on
:class:`uscmet.params.DerivativeConvention`; the default keeps the matter
mode locked to the cavity while the cavity frequency is varied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .params import DerivativeConvention, DickeParams


@dataclass(frozen=True)
class SqueezingPair:
    """Squeezing parameters of the two resonant normal modes.

    ``xi_minus`` belongs to the soft (relative) mode c and is negative for
    g > 0, diverging logarithmically at threshold; ``xi_plus`` belongs to the
    stiff (center-of-mass) mode d and is positive.
    """

    xi_minus: float
    xi_plus: float


@dataclass(frozen=True)
class NormalFrequencies:
    """The two normal-mode frequencies, ``omega_minus <= omega_plus``."""

    omega_minus: float
    omega_plus: float


@dataclass(frozen=True)
class CoherentQfi:
    """Frequency information of a coherently displaced soft mode.

    ``exact`` is the full dispersion-slope expression; ``asymptote`` is its
    near-threshold divergent part, which underestimates the exact value
    everywhere below threshold but captures the divergence.
    """

    exact: float
    asymptote: float


def squeezing_parameters(p: DickeParams) -> SqueezingPair:
    """Ground-state squeezing of the two resonant normal modes.

    Requires resonance and the normal phase.  Uses ``log1p`` so the
    soft-mode parameter stays accurate both at weak coupling and close to
    threshold.
    """
    p.require_resonant("squeezing_parameters")
    p.require_normal_phase("squeezing_parameters")
    r = p.coupling_ratio
    return SqueezingPair(0.25 * math.log1p(-r), 0.25 * math.log1p(r))


def normal_frequencies(p: DickeParams) -> NormalFrequencies:
    """Normal-mode frequencies of the coupled pair (resonance not required).

    The upper branch is computed from the trace-discriminant form and the
    lower branch through the determinant identity
    ``omega_minus * omega_plus = sqrt(omega * Omega * (omega*Omega - g^2))``,
    which avoids catastrophic cancellation near threshold and enforces the
    product rule to machine precision.
    """
    p.require_normal_phase("normal_frequencies")
    w2, big2 = p.omega * p.omega, p.Omega * p.Omega
    prod = p.omega * p.Omega
    disc = math.sqrt((w2 - big2) ** 2 + 4.0 * p.g * p.g * prod)
    upper = math.sqrt(0.5 * (w2 + big2 + disc))
    r = p.coupling_ratio
    lower = prod * math.sqrt((1.0 - r) * (1.0 + r)) / upper
    return NormalFrequencies(lower, upper)


def bare_mode_occupation(sq: SqueezingPair) -> float:
    """Virtual photons in either lab mode: (sinh^2 xi_- + sinh^2 xi_+)/2."""
    return 0.5 * (math.sinh(sq.xi_minus) ** 2 + math.sinh(sq.xi_plus) ** 2)


def virtual_mode_occupation(p: DickeParams) -> tuple[float, float]:
    """Occupations (n_c, n_d) of the soft and stiff normal modes."""
    sq = squeezing_parameters(p)
    return math.sinh(sq.xi_minus) ** 2, math.sinh(sq.xi_plus) ** 2


def soft_mode_occupation(p: DickeParams) -> float:
    """Soft-mode occupation in radical form, (1 - sqrt(1-r))^2 / (4 sqrt(1-r)).

    Algebraically identical to ``sinh^2(xi_minus)`` for every r in [0, 1);
    exposed separately so the identity can be cross-checked and because this
    is the form in which the near-threshold divergence n_c ~ (1-r)^{-1/2}/4
    is manifest.
    """
    p.require_resonant("soft_mode_occupation")
    p.require_normal_phase("soft_mode_occupation")
    s = math.sqrt(1.0 - p.coupling_ratio)
    return (1.0 - s) ** 2 / (4.0 * s)


def xi_derivatives(
    p: DickeParams,
    convention: DerivativeConvention = DerivativeConvention.TRACKED_RESONANCE,
) -> tuple[float, float]:
    """Frequency derivatives (d xi_minus/d omega, d xi_plus/d omega) at resonance.

    Under ``TRACKED_RESONANCE`` the coupling ratio is g/omega, so
    d(r)/d(omega) = -g/omega^2; under ``FIXED_PARTNER`` the matter frequency
    stays put and the same derivative is exactly half as large.
    """
    p.require_resonant("xi_derivatives")
    p.require_normal_phase("xi_derivatives")
    g, w = p.g, p.omega
    dxm = g / (4.0 * w * (w - g))
    dxp = -g / (4.0 * w * (w + g))
    if convention is DerivativeConvention.FIXED_PARTNER:
        return 0.5 * dxm, 0.5 * dxp
    return dxm, dxp


def ground_state_qfi(
    p: DickeParams,
    convention: DerivativeConvention = DerivativeConvention.TRACKED_RESONANCE,
) -> float:
    """Quantum Fisher information of the undriven ground state about omega.

    For a product of two pure squeezed modes the QFI is
    2 (d xi_minus/d omega)^2 + 2 (d xi_plus/d omega)^2; all the frequency
    sensitivity of the ground state lives in its squeezing parameters.
    """
    dxm, dxp = xi_derivatives(p, convention)
    return 2.0 * dxm * dxm + 2.0 * dxp * dxp


def ground_state_qfi_near_threshold(p: DickeParams) -> float:
    """Divergent part of the ground-state QFI, g^2 / (8 w^4 (1 - r)^2).

    Tracked-resonance convention.  The exact QFI exceeds this by the
    stiff-mode contribution, a relative excess of (1-r)^2/(1+r)^2, so the
    two agree ever more tightly as threshold is approached.
    """
    p.require_resonant("ground_state_qfi_near_threshold")
    p.require_normal_phase("ground_state_qfi_near_threshold")
    r = p.coupling_ratio
    return p.g * p.g / (8.0 * p.omega**4 * (1.0 - r) ** 2)


def dfreq_lower(p: DickeParams) -> float:
    """Slope of the soft normal frequency, d omega_minus / d omega, at resonance.

    Tracked-resonance convention: omega_minus = omega sqrt(1 - g/omega), so
    the slope is (2 - g/omega) / (2 sqrt(1 - g/omega)), diverging at
    threshold -- the dispersion-sensitivity resource behind every driven or
    displaced protocol in the package.
    """
    p.require_resonant("dfreq_lower")
    p.require_normal_phase("dfreq_lower")
    r = p.coupling_ratio
    return (2.0 - r) / (2.0 * math.sqrt(1.0 - r))


def coherent_qfi(p: DickeParams, alpha_mag: float, t: float) -> CoherentQfi:
    """Frequency QFI of a coherent probe precessing in the soft mode.

    A displacement of magnitude ``alpha_mag`` rotating for time ``t`` at the
    soft normal frequency acquires phase t * omega_minus(omega), so its QFI
    is 4 t^2 |alpha|^2 (d omega_minus/d omega)^2 (exact field), with the
    near-threshold asymptote |alpha|^2 t^2 / (1 - r).
    """
    d = dfreq_lower(p)
    a2t2 = alpha_mag * alpha_mag * t * t
    return CoherentQfi(
        exact=4.0 * a2t2 * d * d,
        asymptote=a2t2 / (1.0 - p.coupling_ratio),
    )


def real_squeezing_qfi(p: DickeParams, alpha_mag: float, t: float) -> float:
    """Reference QFI of the same displaced probe on real squeezing.

    4 t^2 |alpha|^2 e^{-2 xi_minus} = 4 t^2 |alpha|^2 / sqrt(1 - r): what an
    equally squeezed quadrature would buy if the squeezing were measured
    directly.  The coherent asymptote exceeds this by e^{-2 xi_minus}/4,
    which is the quantitative sense in which virtual occupation outperforms
    an equal amount of real squeezing near threshold.
    """
    p.require_resonant("real_squeezing_qfi")
    p.require_normal_phase("real_squeezing_qfi")
    r = p.coupling_ratio
    return 4.0 * t * t * alpha_mag * alpha_mag / math.sqrt(1.0 - r)
