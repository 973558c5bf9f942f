"""Independent error-propagation oracles for the closed-form sensitivities.

Every function here rebuilds a sensitivity from scratch: simulate the probe
state with the phase-space engine (or the Lindblad solver), differentiate
the measured signal numerically with respect to the estimated frequency,
and divide by the simulated noise.  None of the closed-form SNR or QFI
expressions from :mod:`uscmet.dicke`, :mod:`uscmet.rabi` or
:mod:`uscmet.driven` appear anywhere in these code paths, so agreement
between an oracle and its closed form is a real two-route check.

The finite differences go through exactly the dependency chains the closed
forms claim to differentiate: the emitter splitting stays fixed for the
single-emitter strategies, the matter mode tracks the cavity for the
two-mode ground state (or stays fixed under the other convention), and the
pump frequency stays fixed for the driven channels so the detuning inherits
the dispersion slope.
"""

from __future__ import annotations

import math

from .driven import detuning_of_frequency, lindblad_steady_state
from .fock import derivative
from .gaussian import GaussianState, evolve_free, fidelity_qfi, make_two_mode_ground
from .params import (
    DerivativeConvention,
    DickeParams,
    DriveParams,
    RabiParams,
)

#: Default relative finite-difference step for the smooth analytic families.
DEFAULT_STEP = 1e-5


def _step(x: float, h: float | None) -> float:
    return h if h is not None else DEFAULT_STEP * max(abs(x), 1.0)


# ---------------------------------------------------------------------------
# single-emitter strategy oracles (emitter splitting fixed)
# ---------------------------------------------------------------------------


def _breathing_state(omega: float, g: float, Omega: float, t: float) -> GaussianState:
    u = g * g / (omega * Omega)
    xi = 0.25 * math.log1p(-u)
    return evolve_free(GaussianState.squeezed_vacuum(xi), omega, t)


def ep_extract_evolved(p: RabiParams, t: float, h: float | None = None) -> float:
    """Error propagation of an X^2 readout on the breathing ground state."""
    g, big = p.g, p.Omega

    def x2_of(w: float) -> float:
        return _breathing_state(w, g, big, t).x2_moment()

    at = _breathing_state(p.omega, g, big, t)
    noise = at.x4_moment() - at.x2_moment() ** 2
    slope = derivative(x2_of, p.omega, step=_step(p.omega, h))
    return slope * slope / noise


def ep_displaced(
    p: RabiParams, alpha_mag: float, t: float, h: float | None = None
) -> float:
    """Error propagation of an <X> readout on the displaced breathing probe."""
    g, big = p.g, p.Omega

    def mean_of(w: float) -> float:
        u = g * g / (w * big)
        xi = 0.25 * math.log1p(-u)
        probe = GaussianState.squeezed_vacuum(xi).displaced_by(alpha_mag)
        return evolve_free(probe, w, t).mean_x()

    noise = _breathing_state(p.omega, g, big, t).var_x()
    slope = derivative(mean_of, p.omega, step=_step(p.omega, h))
    return slope * slope / noise


def ep_normal_mode(
    p: RabiParams, alpha_mag: float, t: float, h: float | None = None
) -> float:
    """Error propagation of an <X> readout on a probe precessing at omega_eff."""
    g, big = p.g, p.Omega

    def mean_of(w: float) -> float:
        u = g * g / (w * big)
        weff = w * math.sqrt(1.0 - u)
        return evolve_free(GaussianState.coherent(alpha_mag), weff, t).mean_x()

    noise = GaussianState.coherent(alpha_mag).var_x()  # precession keeps it
    slope = derivative(mean_of, p.omega, step=_step(p.omega, h))
    return slope * slope / noise


def ep_extract_static(p: RabiParams, h: float | None = None) -> float:
    """Error propagation of a static X^2 readout (the t = 0 limit)."""
    return ep_extract_evolved(p, 0.0, h)


# ---------------------------------------------------------------------------
# overlap-decay QFI oracles
# ---------------------------------------------------------------------------


def ground_qfi_oracle(
    p: DickeParams,
    convention: DerivativeConvention = DerivativeConvention.TRACKED_RESONANCE,
    eps: float | None = None,
) -> float:
    """Two-mode ground-state QFI from fidelity decay, per convention.

    Under the tracked convention the family is the resonant two-mode ground
    state itself (built by the phase-space engine, matter mode following the
    cavity).  Under the fixed-partner convention resonance is broken by the
    variation, so the family is the equivalent normal-mode squeezed product
    with the off-resonance coupling ratio; the basis change between the two
    pictures is frequency-independent and drops out of the QFI.
    """
    g, big = p.g, p.Omega
    if convention is DerivativeConvention.TRACKED_RESONANCE:

        def state_at(w: float) -> GaussianState:
            return make_two_mode_ground(DickeParams(omega=w, Omega=w, g=g))

    else:

        def state_at(w: float) -> GaussianState:
            r = g / math.sqrt(w * big)
            return GaussianState.product(
                [
                    GaussianState.squeezed_vacuum(0.25 * math.log1p(-r)),
                    GaussianState.squeezed_vacuum(0.25 * math.log1p(r)),
                ]
            )

    return fidelity_qfi(state_at, p.omega, eps)


def rabi_ground_qfi_oracle(p: RabiParams, eps: float | None = None) -> float:
    """Effective single-mode ground-state QFI from fidelity decay."""
    g, big = p.g, p.Omega

    def state_at(w: float) -> GaussianState:
        u = g * g / (w * big)
        return GaussianState.squeezed_vacuum(0.25 * math.log1p(-u))

    return fidelity_qfi(state_at, p.omega, eps)


def coherent_qfi_oracle(
    p: DickeParams, alpha_mag: float, t: float, eps: float | None = None
) -> float:
    """QFI of a coherent probe precessing at the soft normal frequency."""
    from .dicke import normal_frequencies

    g = p.g

    def state_at(w: float) -> GaussianState:
        lower = normal_frequencies(DickeParams(omega=w, Omega=w, g=g)).omega_minus
        return evolve_free(GaussianState.coherent(alpha_mag), lower, t)

    return fidelity_qfi(state_at, p.omega, eps)


# ---------------------------------------------------------------------------
# driven-channel oracles (pump frequency fixed, Lindblad solver for the state)
# ---------------------------------------------------------------------------


def fd_snr_amplitude(
    p: DickeParams, d: DriveParams, h: float | None = None
) -> float:
    """Amplitude channel from the numeric steady state: 16 kappa t (d|alpha|/dw)^2.

    |alpha|(w) is read off the Lindblad steady-state mean at the detuning a
    fixed pump sees when the cavity sits at w -- no closed-form response
    amplitude is involved.
    """

    def amp_of(w: float) -> float:
        det = detuning_of_frequency(p, d, w)
        st = lindblad_steady_state(
            DriveParams(kappa=d.kappa, eta=d.eta, delta=det, t=d.t)
        )
        return math.hypot(st.mean_x(0), st.mean_p(0))

    slope = derivative(amp_of, p.omega, step=_step(p.omega, h))
    return 16.0 * d.kappa * d.t * slope * slope


def fd_snr_phase(p: DickeParams, d: DriveParams, h: float | None = None) -> float:
    """Phase channel from the numeric steady state: kappa t |alpha|^2 (dphi/dw)^2."""

    def state_of(w: float) -> GaussianState:
        det = detuning_of_frequency(p, d, w)
        return lindblad_steady_state(
            DriveParams(kappa=d.kappa, eta=d.eta, delta=det, t=d.t)
        )

    def phase_of(w: float) -> float:
        st = state_of(w)
        return math.atan2(-st.mean_p(0), -st.mean_x(0))

    at = state_of(p.omega)
    amp_sq = at.mean_x(0) ** 2 + at.mean_p(0) ** 2
    slope = derivative(phase_of, p.omega, step=_step(p.omega, h))
    return d.kappa * d.t * amp_sq * slope * slope
