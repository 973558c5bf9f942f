"""Parameter records and shared numerical conventions.

Conventions used throughout the package:

* hbar = 1; every frequency, coupling and rate is expressed in the same unit.
* Quadratures are X = (a + a^dag)/2 and P = (a - a^dag)/(2i), so the vacuum
  variance of either quadrature is 1/4.
* Couplings are restricted to the normal phase.  A point is admissible when
  g/g_c <= 1 - THRESHOLD_GUARD with g_c = sqrt(omega * Omega); anything closer
  to the instability raises :class:`~uscmet.errors.BeyondThreshold`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import BeyondThreshold, InvalidSpec, NotResonant

#: Relative margin kept between admissible couplings and the instability.
THRESHOLD_GUARD = 1e-9

#: Relative tolerance within which omega and Omega count as resonant.
RESONANCE_RTOL = 1e-12

#: Partner-frequency ratio above which the two-level model is dispersive
#: enough for its quadratic effective description to be trustworthy.
DISPERSIVE_RATIO = 100.0


class DerivativeConvention(enum.Enum):
    """How the partner frequency responds when differentiating in omega.

    TRACKED_RESONANCE
        The partner is locked to the probed mode: Omega == omega is
        substituted *before* differentiating, so the critical coupling is
        simply omega and d(g/g_c)/d(omega) = -g/omega**2.
    FIXED_PARTNER
        Omega is a fixed constant; only the explicit omega dependence of
        g_c = sqrt(omega*Omega) is differentiated, which at resonance gives
        d(g/g_c)/d(omega) = -g/(2*omega**2) -- half the tracked value.
    """

    TRACKED_RESONANCE = "tracked"
    FIXED_PARTNER = "fixed"


def _require_positive(**named_values: float) -> None:
    for name, value in named_values.items():
        if not math.isfinite(value):
            raise InvalidSpec(f"{name} must be finite, got {value!r}")
        if value <= 0.0:
            raise InvalidSpec(f"{name} must be > 0, got {value!r}")


@dataclass(frozen=True)
class DickeParams:
    """Collective light-matter model parameters.

    Parameters
    ----------
    omega : float
        Cavity (probed-mode) frequency.  Must be positive.
    Omega : float
        Collective two-level (partner-mode) frequency.  Must be positive.
    g : float
        Coupling strength, >= 0.
    n_atoms : int or None
        Optional emitter number for finite-size diagonalization; ``None``
        selects the thermodynamic (two-boson) description.
    """

    omega: float
    Omega: float
    g: float
    n_atoms: int | None = None

    def __post_init__(self) -> None:
        _require_positive(omega=self.omega, Omega=self.Omega)
        if not math.isfinite(self.g) or self.g < 0.0:
            raise InvalidSpec(f"g must be >= 0, got {self.g!r}")
        if self.n_atoms is not None:
            if not isinstance(self.n_atoms, int) or self.n_atoms < 1:
                raise InvalidSpec(f"n_atoms must be a positive int, got {self.n_atoms!r}")

    @property
    def g_c(self) -> float:
        """Critical coupling sqrt(omega * Omega)."""
        return math.sqrt(self.omega * self.Omega)

    @property
    def coupling_ratio(self) -> float:
        """g / g_c."""
        return self.g / self.g_c

    @property
    def is_resonant(self) -> bool:
        return abs(self.omega - self.Omega) <= RESONANCE_RTOL * max(self.omega, self.Omega)

    def require_resonant(self, operation: str) -> None:
        if not self.is_resonant:
            raise NotResonant(
                f"{operation} requires omega == Omega "
                f"(got omega={self.omega!r}, Omega={self.Omega!r})"
            )

    def require_normal_phase(self, operation: str) -> None:
        if self.coupling_ratio > 1.0 - THRESHOLD_GUARD:
            raise BeyondThreshold(
                f"{operation} is defined only for g/g_c <= 1 - {THRESHOLD_GUARD:g}; "
                f"got g/g_c = {self.coupling_ratio!r}"
            )

    @classmethod
    def from_coupling_ratio(
        cls, ratio: float, omega: float = 1.0, n_atoms: int | None = None
    ) -> "DickeParams":
        """Resonant parameter set with g = ratio * g_c = ratio * omega."""
        return cls(omega=omega, Omega=omega, g=ratio * omega, n_atoms=n_atoms)


@dataclass(frozen=True)
class RabiParams:
    """Single-emitter model parameters (cavity omega, qubit splitting Omega)."""

    omega: float
    Omega: float
    g: float

    def __post_init__(self) -> None:
        _require_positive(omega=self.omega, Omega=self.Omega)
        if not math.isfinite(self.g) or self.g < 0.0:
            raise InvalidSpec(f"g must be >= 0, got {self.g!r}")

    @property
    def g_c(self) -> float:
        """Instability coupling sqrt(omega * Omega)."""
        return math.sqrt(self.omega * self.Omega)

    @property
    def coupling_sq_ratio(self) -> float:
        """(g / g_c)**2 -- the combination every quadratic formula runs on."""
        return self.g * self.g / (self.omega * self.Omega)

    @property
    def is_dispersive(self) -> bool:
        """True when Omega/omega is large enough for the quadratic model."""
        return self.Omega / self.omega >= DISPERSIVE_RATIO

    def require_normal_phase(self, operation: str) -> None:
        if self.coupling_sq_ratio > (1.0 - THRESHOLD_GUARD) ** 2:
            raise BeyondThreshold(
                f"{operation} is defined only for g/g_c <= 1 - {THRESHOLD_GUARD:g}; "
                f"got (g/g_c)^2 = {self.coupling_sq_ratio!r}"
            )

    @classmethod
    def from_coupling_ratio(
        cls, ratio: float, omega: float = 1.0, Omega: float = 1.0e4
    ) -> "RabiParams":
        """Parameter set with g = ratio * sqrt(omega * Omega)."""
        return cls(omega=omega, Omega=Omega, g=ratio * math.sqrt(omega * Omega))


@dataclass(frozen=True)
class DriveParams:
    """Weak coherent drive on the soft polariton mode, with cavity loss.

    Parameters
    ----------
    kappa : float
        Photon loss rate (> 0).
    eta : float
        Drive amplitude (>= 0).
    delta : float
        Pump detuning from the soft-mode frequency (any sign).
    t : float
        Homodyne integration time (> 0).
    """

    kappa: float
    eta: float
    delta: float
    t: float

    def __post_init__(self) -> None:
        _require_positive(kappa=self.kappa, t=self.t)
        if not math.isfinite(self.eta) or self.eta < 0.0:
            raise InvalidSpec(f"eta must be >= 0, got {self.eta!r}")
        if not math.isfinite(self.delta):
            raise InvalidSpec(f"delta must be finite, got {self.delta!r}")
