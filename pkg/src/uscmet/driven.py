"""Driven-dissipative response of the soft mode and its readout channels.

A weak coherent tone drives the soft polariton mode while the cavity loses
photons at rate kappa.  In the frame of the pump the mode obeys

    d<e>/dt = -(i delta + kappa/2) <e> - i eta,

so the steady amplitude is alpha_ss = -eta / (delta - i kappa/2), with
magnitude 2 eta / sqrt(kappa^2 + 4 delta^2).  Because the pump frequency is
fixed in the lab, the detuning delta inherits the full dispersion slope of
the soft mode: every d/d omega below is a chain rule through
d(delta)/d(omega) = -(d omega_minus/d omega), which diverges at threshold.
That is the whole mechanism -- the virtual ground-state structure shows up
in a strong, narrow, frequency-sensitive linear response.

Channel normalizations (fixed conventions of this package, matched by the
finite-difference oracles and the validation suite):

* amplitude channel:  S = 16 kappa t (d|alpha|/d omega)^2 -- homodyning the
  output-field amplitude quadrature 2 sqrt(kappa) |alpha| against shot noise
  1/(4t);
* phase channel:      S = kappa t |alpha|^2 (d phi/d omega)^2;
* total:              driven_qfi_total = amplitude + phase, exactly.

The Lindblad steady state is also available as a full Gaussian state solved
from the drift/diffusion matrices with a Lyapunov equation; it is one of the
independent numerical routes used to referee the closed forms above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SingularDrift
from .gaussian import GaussianState
from .params import DickeParams, DriveParams


@dataclass(frozen=True)
class SteadyResponse:
    """Steady-state linear response of the driven lossy mode.

    ``amp_intracavity`` is |alpha_ss|; ``amp_output`` is the output-field
    amplitude sqrt(kappa) |alpha_ss|; ``phase`` is the response phase in
    (-pi, pi], continuous through zero detuning (pi/2 on resonance); and
    ``output_flux`` is the emitted photon flux kappa |alpha_ss|^2.
    """

    amp_intracavity: float
    amp_output: float
    phase: float
    output_flux: float


def steady_state_response(d: DriveParams) -> SteadyResponse:
    """Closed-form steady amplitude, phase, and output flux of the driven mode."""
    denom = d.kappa * d.kappa + 4.0 * d.delta * d.delta
    amp = 2.0 * d.eta / math.sqrt(denom)
    # arg(-alpha_ss): equals arctan(kappa/(2 delta)) on the delta > 0 branch
    # and continues through pi/2 at delta = 0 instead of jumping.
    phase = math.atan2(0.5 * d.kappa, d.delta)
    return SteadyResponse(
        amp_intracavity=amp,
        amp_output=math.sqrt(d.kappa) * amp,
        phase=phase,
        output_flux=d.kappa * amp * amp,
    )


def lindblad_steady_state(d: DriveParams) -> GaussianState:
    """Gaussian steady state of the driven lossy mode, solved numerically.

    The quadrature mean m = (<X>, <P>) obeys dm/dt = A m + b with drift
    A = [[-kappa/2, delta], [-delta, -kappa/2]] and b = (0, -eta); the
    covariance solves the Lyapunov equation A S + S A^T = -D with vacuum
    diffusion D = (kappa/4) I.  For pure loss the steady covariance is the
    vacuum, so the state is a pure displaced vacuum whose displacement
    must agree with :func:`steady_state_response` -- that agreement is a
    cross-check, not a tautology, because nothing here uses the closed form.

    The mean's complex argument is the argument of alpha_ss itself, which
    differs by pi from the response ``phase`` (defined through -alpha_ss).
    """
    a = np.array([[-0.5 * d.kappa, d.delta], [-d.delta, -0.5 * d.kappa]])
    det = 0.25 * d.kappa * d.kappa + d.delta * d.delta
    if not (det > 0.0 and math.isfinite(det)):
        raise SingularDrift(
            f"drift matrix is singular (kappa = {d.kappa!r}, delta = {d.delta!r})"
        )
    b = np.array([0.0, -d.eta])
    mean = np.linalg.solve(a, -b)
    diffusion = 0.25 * d.kappa * np.eye(2)
    cov = scipy.linalg.solve_continuous_lyapunov(a, -diffusion)
    return GaussianState(mean, cov)


def homodyne_variance(t: float, xi_real: float = 0.0) -> float:
    """Shot-noise variance of a time-t homodyne record, e^{2 xi_real} / (4 t).

    ``xi_real <= 0`` models an extra real squeezing pulse on the readout
    quadrature; at xi_real = 0 this is the bare vacuum limit 1/(4t).
    """
    if not (t > 0.0 and math.isfinite(t)):
        raise ValueError(f"integration time must be positive, got {t!r}")
    if xi_real > 0.0:
        raise ValueError(
            f"xi_real must be <= 0 (readout squeezing), got {xi_real!r}"
        )
    return math.exp(2.0 * xi_real) / (4.0 * t)


def _drive_denominator(d: DriveParams) -> float:
    return d.kappa * d.kappa + 4.0 * d.delta * d.delta


def snr_amplitude(p: DickeParams, d: DriveParams) -> float:
    """Amplitude-channel SNR, 16 kappa t (d|alpha|/d omega)^2.

    Chain rule through the detuning:  d|alpha|/d omega =
    (-8 eta delta / (kappa^2 + 4 delta^2)^{3/2}) * (-(d omega_minus/d omega)),
    giving the closed form

        256 kappa t delta^2 eta^2 (2 - r)^2
        -----------------------------------------,   r = g / omega,
        (kappa^2 + 4 delta^2)^3 (1 - r)

    which vanishes identically at delta = 0 (the amplitude is stationary
    there) and diverges as (1 - r)^{-1} at threshold.
    """
    p.require_resonant("snr_amplitude")
    p.require_normal_phase("snr_amplitude")
    r = p.coupling_ratio
    denom = _drive_denominator(d)
    return (
        256.0
        * d.kappa
        * d.t
        * d.delta
        * d.delta
        * d.eta
        * d.eta
        * (2.0 - r) ** 2
        / (denom**3 * (1.0 - r))
    )


def snr_amplitude_near_threshold(p: DickeParams, d: DriveParams) -> float:
    """Amplitude-channel SNR with the dispersion slope traded for occupation.

    Near threshold (d omega_minus/d omega)^2 -> 4 n_c^2 with n_c the exact
    soft-mode occupation, so

        S = 4096 kappa t delta^2 eta^2 n_c^2 / (kappa^2 + 4 delta^2)^3.

    This makes the scaling S ~ n_c^2 explicit: the response SNR measures the
    square of the virtual population.  The replacement converges only very
    close to threshold (relative error ~ 4 sqrt(1 - r)).
    """
    p.require_resonant("snr_amplitude_near_threshold")
    p.require_normal_phase("snr_amplitude_near_threshold")
    s = math.sqrt(1.0 - p.coupling_ratio)
    n_c = (1.0 - s) ** 2 / (4.0 * s)
    denom = _drive_denominator(d)
    return (
        4096.0
        * d.kappa
        * d.t
        * d.delta
        * d.delta
        * d.eta
        * d.eta
        * n_c
        * n_c
        / denom**3
    )


def snr_phase(p: DickeParams, d: DriveParams) -> float:
    """Phase-channel SNR, kappa t |alpha|^2 (d phi/d omega)^2.

    With phi = arg(-alpha_ss), d phi/d delta = -2 kappa/(kappa^2 + 4 delta^2)
    and the same detuning chain rule as the amplitude channel:

        4 kappa^3 t eta^2 (2 - r)^2 / ((kappa^2 + 4 delta^2)^3 (1 - r)).

    Unlike the amplitude channel this is maximal at delta = 0, so the two
    channels are complementary in where they harvest the dispersion slope.
    """
    p.require_resonant("snr_phase")
    p.require_normal_phase("snr_phase")
    r = p.coupling_ratio
    denom = _drive_denominator(d)
    return (
        4.0
        * d.kappa**3
        * d.t
        * d.eta
        * d.eta
        * (2.0 - r) ** 2
        / (denom**3 * (1.0 - r))
    )


def driven_qfi_total(p: DickeParams, d: DriveParams) -> float:
    """Total response information: amplitude channel + phase channel, exactly."""
    return snr_amplitude(p, d) + snr_phase(p, d)


def optimal_amplitude_detuning(kappa: float) -> float:
    """Detuning maximizing the amplitude channel at fixed coupling: kappa/(2 sqrt(2)).

    From maximizing delta^2 / (kappa^2 + 4 delta^2)^3.
    """
    if not (kappa > 0.0 and math.isfinite(kappa)):
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    return kappa / (2.0 * math.sqrt(2.0))


def detuning_of_frequency(
    p: DickeParams, d: DriveParams, omega: float
) -> float:
    """Detuning seen by a fixed pump when the cavity frequency is ``omega``.

    The pump frequency is pinned so that the detuning equals ``d.delta`` at
    the operating point ``p``; moving the cavity to ``omega`` (with the
    matter mode tracking it) shifts the soft-mode frequency and therefore
    the detuning:  delta(omega) = delta_0 - (omega_minus(omega) -
    omega_minus(omega_0)).  Used by the finite-difference oracles, which
    must differentiate through this chain and nothing else.
    """
    from .dicke import normal_frequencies

    base = normal_frequencies(p).omega_minus
    moved = normal_frequencies(
        DickeParams(omega=omega, Omega=omega, g=p.g)
    ).omega_minus
    return d.delta - (moved - base)
