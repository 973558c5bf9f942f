"""Phase-space engine for pure and mixed Gaussian states.

This module is one of the two independent numerical routes in the package
(the other is the sparse Fock-space engine).  It works exclusively with
first and second quadrature moments and therefore never touches the closed
forms implemented by the model modules -- agreement between the two routes
is a genuine cross-check rather than a tautology.

Conventions
-----------
* X = (a + a^dag)/2 and P = (a - a^dag)/(2i), so [X, P] = i/2 and the
  vacuum variance of either quadrature is 1/4.
* A coherent state |alpha> has mean (Re alpha, Im alpha).
* ``squeezed_vacuum(xi)`` with real xi has Var(X) = exp(-2 xi)/4 and
  Var(P) = exp(+2 xi)/4 (positive xi squeezes X).
* Moments are stored mode-interleaved: (X1, P1, X2, P2, ...).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    InvalidSpec,
    SolverFailure,
    StepTooSmall,
)

#: Quadrature variance of the vacuum in these conventions.
VACUUM_VAR = 0.25

#: Default relative finite-difference step used by :func:`fidelity_qfi`.
DEFAULT_QFI_STEP = 1e-4


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form J with per-mode blocks [[0, 1], [-1, 0]]."""
    j = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        j[2 * k, 2 * k + 1] = 1.0
        j[2 * k + 1, 2 * k] = -1.0
    return j


def rotation_symplectic(thetas: Sequence[float]) -> np.ndarray:
    """Phase-space rotation by theta_k on mode k.

    Free evolution under H = omega a^dag a for a time t sends
    a -> a exp(-i omega t), i.e. rotates quadratures by theta = omega t:
    X' = X cos(theta) + P sin(theta), P' = -X sin(theta) + P cos(theta).
    """
    n = len(thetas)
    s = np.zeros((2 * n, 2 * n))
    for k, theta in enumerate(thetas):
        c, sn = math.cos(theta), math.sin(theta)
        s[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = [[c, sn], [-sn, c]]
    return s


def squeeze_symplectic(xis: Sequence[float]) -> np.ndarray:
    """Quadrature scaling of single-mode squeezers: X -> e^{-xi} X, P -> e^{xi} P."""
    return np.diag(np.ravel([[math.exp(-x), math.exp(x)] for x in xis]))


def balanced_mixer() -> np.ndarray:
    """Symplectic map from a balanced mode pair (c, d) to the lab pair (a, b).

    With c = (a - b)/sqrt(2) and d = (a + b)/sqrt(2) the inverse is
    a = (d + c)/sqrt(2), b = (d - c)/sqrt(2); this returns the 4x4 quadrature
    matrix of that inverse, so ``state_cd.with_symplectic(balanced_mixer())``
    re-expresses a state given in the (c, d) basis in the (a, b) basis.
    """
    r = 1.0 / math.sqrt(2.0)
    s = np.zeros((4, 4))
    # a-quadratures from (c, d)
    s[0, 0] = s[0, 2] = r
    s[1, 1] = s[1, 3] = r
    # b-quadratures from (c, d)
    s[2, 0] = -r
    s[2, 2] = r
    s[3, 1] = -r
    s[3, 3] = r
    return s


@dataclass(frozen=True)
class SymplecticOp:
    """Affine Gaussian channel: mean -> S mean + d, cov -> S cov S^T.

    ``matrix`` must be symplectic; ``displacement`` is a quadrature shift in
    the same mode-interleaved ordering as :class:`GaussianState`.
    """

    matrix: np.ndarray
    displacement: np.ndarray

    @classmethod
    def rotation(cls, thetas: Sequence[float]) -> "SymplecticOp":
        s = rotation_symplectic(thetas)
        return cls(s, np.zeros(s.shape[0]))

    @classmethod
    def squeeze(cls, xis: Sequence[float]) -> "SymplecticOp":
        s = squeeze_symplectic(xis)
        return cls(s, np.zeros(s.shape[0]))

    def apply(self, state: "GaussianState") -> "GaussianState":
        out = state.with_symplectic(self.matrix)
        d = np.asarray(self.displacement, dtype=float)
        if d.shape != out.mean.shape:
            raise DimensionMismatch(
                f"displacement shape {d.shape}, expected {out.mean.shape}"
            )
        return GaussianState(out.mean + d, out.cov)

    def __call__(self, state: "GaussianState") -> "GaussianState":
        return self.apply(state)


@dataclass
class GaussianState:
    """First and second quadrature moments of an n-mode Gaussian state.

    Parameters
    ----------
    mean : array_like, shape (2n,)
        Quadrature means, mode-interleaved (X1, P1, X2, P2, ...).
    cov : array_like, shape (2n, 2n)
        Symmetric quadrature covariance matrix in the same ordering.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.asarray(self.cov, dtype=float)
        if mean.ndim != 1 or mean.size % 2 != 0 or mean.size == 0:
            raise DimensionMismatch(f"mean must have even length >= 2, got shape {mean.shape}")
        if cov.shape != (mean.size, mean.size):
            raise DimensionMismatch(
                f"cov shape {cov.shape} does not match mean length {mean.size}"
            )
        asym = np.max(np.abs(cov - cov.T))
        if asym > 1e-10 * max(1.0, float(np.max(np.abs(cov)))):
            raise InvalidSpec(f"cov must be symmetric (max asymmetry {asym:g})")
        self.mean = mean
        self.cov = 0.5 * (cov + cov.T)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def vacuum(cls, n_modes: int = 1) -> "GaussianState":
        """n-mode vacuum: zero mean, covariance I/4."""
        return cls(np.zeros(2 * n_modes), VACUUM_VAR * np.eye(2 * n_modes))

    @classmethod
    def coherent(cls, alpha: complex) -> "GaussianState":
        """Single-mode coherent state with mean (Re alpha, Im alpha)."""
        alpha = complex(alpha)
        return cls(np.array([alpha.real, alpha.imag]), VACUUM_VAR * np.eye(2))

    @classmethod
    def squeezed_vacuum(cls, xi: float) -> "GaussianState":
        """Single-mode squeezed vacuum with Var(X) = exp(-2 xi)/4."""
        xi = float(xi)
        cov = VACUUM_VAR * np.diag([math.exp(-2.0 * xi), math.exp(2.0 * xi)])
        return cls(np.zeros(2), cov)

    @classmethod
    def displaced_squeezed(cls, alpha: complex, xi: float) -> "GaussianState":
        """Single-mode state D(alpha) S(xi)|0>: squeezed covariance, coherent mean."""
        state = cls.squeezed_vacuum(xi)
        alpha = complex(alpha)
        state.mean = state.mean + np.array([alpha.real, alpha.imag])
        return state

    @classmethod
    def product(cls, states: Iterable["GaussianState"]) -> "GaussianState":
        """Tensor product of single- or multi-mode states (block-diagonal cov)."""
        states = list(states)
        if not states:
            raise InvalidSpec("product() needs at least one state")
        mean = np.concatenate([s.mean for s in states])
        dim = mean.size
        cov = np.zeros((dim, dim))
        offset = 0
        for s in states:
            d = s.mean.size
            cov[offset : offset + d, offset : offset + d] = s.cov
            offset += d
        return cls(mean, cov)

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def _check_mode(self, mode: int) -> int:
        if not 0 <= mode < self.n_modes:
            raise DimensionMismatch(f"mode {mode} out of range for {self.n_modes} modes")
        return mode

    def with_symplectic(self, s: np.ndarray) -> "GaussianState":
        """Apply a symplectic quadrature map: mean -> S mean, cov -> S cov S^T."""
        s = np.asarray(s, dtype=float)
        dim = self.mean.size
        if s.shape != (dim, dim):
            raise DimensionMismatch(f"symplectic shape {s.shape}, expected {(dim, dim)}")
        j = symplectic_form(self.n_modes)
        err = np.max(np.abs(s @ j @ s.T - j))
        if err > 1e-10:
            raise InvalidSpec(f"matrix is not symplectic (|SJS^T - J| = {err:g})")
        return GaussianState(s @ self.mean, s @ self.cov @ s.T)

    def displaced_by(self, alpha: complex, mode: int = 0) -> "GaussianState":
        """Shift the mean of one mode by (Re alpha, Im alpha)."""
        mode = self._check_mode(mode)
        alpha = complex(alpha)
        mean = self.mean.copy()
        mean[2 * mode] += alpha.real
        mean[2 * mode + 1] += alpha.imag
        return GaussianState(mean, self.cov.copy())

    # ------------------------------------------------------------------
    # moments
    # ------------------------------------------------------------------

    def mean_x(self, mode: int = 0) -> float:
        mode = self._check_mode(mode)
        return float(self.mean[2 * mode])

    def mean_p(self, mode: int = 0) -> float:
        mode = self._check_mode(mode)
        return float(self.mean[2 * mode + 1])

    def var_x(self, mode: int = 0) -> float:
        mode = self._check_mode(mode)
        return float(self.cov[2 * mode, 2 * mode])

    def var_p(self, mode: int = 0) -> float:
        mode = self._check_mode(mode)
        return float(self.cov[2 * mode + 1, 2 * mode + 1])

    def x2_moment(self, mode: int = 0) -> float:
        """<X^2> = Var(X) + <X>^2."""
        mu = self.mean_x(mode)
        return self.var_x(mode) + mu * mu

    def x4_moment(self, mode: int = 0) -> float:
        """<X^4> of the Gaussian marginal: 3 s^2 + 6 s mu^2 + mu^4, s = Var(X)."""
        s = self.var_x(mode)
        mu = self.mean_x(mode)
        return 3.0 * s * s + 6.0 * s * mu * mu + mu**4

    def photon_number(self, mode: int = 0) -> float:
        """<a^dag a> = Var(X) + Var(P) + <X>^2 + <P>^2 - 1/2."""
        mux, mup = self.mean_x(mode), self.mean_p(mode)
        return self.var_x(mode) + self.var_p(mode) + mux * mux + mup * mup - 0.5

    def total_photon_number(self) -> float:
        return sum(self.photon_number(m) for m in range(self.n_modes))

    # ------------------------------------------------------------------
    # physicality
    # ------------------------------------------------------------------

    def purity(self) -> float:
        """Tr rho^2 = 1/sqrt(det(4 cov))."""
        sign, logdet = np.linalg.slogdet(4.0 * self.cov)
        if sign <= 0:
            raise SolverFailure("covariance has non-positive determinant")
        return math.exp(-0.5 * logdet)

    def minimum_uncertainty_eigenvalue(self) -> float:
        """Smallest eigenvalue of cov + i J/4; >= 0 for a physical state."""
        m = self.cov.astype(complex) + 0.25j * symplectic_form(self.n_modes)
        return float(np.linalg.eigvalsh(m)[0])

    def assert_physical(self, tol: float = 1e-10) -> None:
        lam = self.minimum_uncertainty_eigenvalue()
        if lam < -tol:
            raise InvalidSpec(f"covariance violates the uncertainty relation ({lam:g})")


def evolve_free(state: GaussianState, omega, t: float) -> GaussianState:
    """Evolve for time t under independent free Hamiltonians omega_k a_k^dag a_k.

    Parameters
    ----------
    state : GaussianState
    omega : float or sequence of float
        Mode frequency, broadcast over modes if scalar.
    t : float
        Evolution time.

    Returns
    -------
    GaussianState
        The rotated state (a_k -> a_k exp(-i omega_k t)).
    """
    omegas = np.broadcast_to(np.asarray(omega, dtype=float), (state.n_modes,))
    return state.with_symplectic(rotation_symplectic([w * t for w in omegas]))


def log_overlap(state_a: GaussianState, state_b: GaussianState) -> float:
    """log |<psi_a|psi_b>| for two *pure* Gaussian states.

    Uses the Wigner-overlap closed form
    |<a|b>|^2 = exp(-delta^T M^{-1} delta / 2) / (2^n sqrt(det M))
    with M = cov_a + cov_b and delta the mean difference, evaluated through
    ``slogdet`` so near-unit overlaps keep full relative precision.
    """
    if state_a.n_modes != state_b.n_modes:
        raise DimensionMismatch(
            f"mode mismatch: {state_a.n_modes} vs {state_b.n_modes}"
        )
    for s in (state_a, state_b):
        p = s.purity()
        if abs(p - 1.0) > 1e-6:
            raise InvalidSpec(f"overlap is defined for pure states; purity = {p!r}")
    m = state_a.cov + state_b.cov
    sign, logdet = np.linalg.slogdet(m)
    if sign <= 0:
        raise SolverFailure("covariance sum has non-positive determinant")
    delta = state_a.mean - state_b.mean
    quad = float(delta @ np.linalg.solve(m, delta))
    n = state_a.n_modes
    return -0.25 * quad - 0.5 * n * math.log(2.0) - 0.25 * logdet


def overlap(state_a: GaussianState, state_b: GaussianState) -> float:
    """|<psi_a|psi_b>| for two pure Gaussian states."""
    return math.exp(log_overlap(state_a, state_b))


def fidelity_qfi(
    state_at: Callable[[float], GaussianState],
    omega: float,
    eps: float | None = None,
) -> float:
    """Quantum Fisher information of a pure-state family from overlap decay.

    For pure states 1 - |<psi(w)|psi(w+e)>| = I(w) e^2 / 8 + O(e^3), so
    q(e) = 8 (1 - F)/e^2 tends to the QFI.  Two Richardson extrapolations
    over step halvings (e, e/2) and (e/2, e/4) cancel the O(e) error of q;
    if they disagree beyond 0.1% (plus a small absolute allowance) the step
    has hit rounding noise and :class:`~uscmet.errors.StepTooSmall` is raised.

    Parameters
    ----------
    state_at : callable
        Maps a frequency to the pure :class:`GaussianState` probed there.
    omega : float
        Frequency at which the QFI is evaluated.
    eps : float, optional
        Base finite-difference step; defaults to ``1e-4 * |omega|``.

    Returns
    -------
    float
        The extrapolated QFI.
    """
    if eps is None:
        eps = DEFAULT_QFI_STEP * abs(omega)
    if not (eps > 0.0 and math.isfinite(eps)):
        raise InvalidSpec(f"eps must be a positive finite number, got {eps!r}")
    reference = state_at(omega)

    def q(h: float) -> float:
        lf = log_overlap(reference, state_at(omega + h))
        return -8.0 * math.expm1(lf) / (h * h)

    q1, q2, q3 = q(eps), q(eps / 2.0), q(eps / 4.0)
    if q1 == 0.0 and q2 == 0.0 and q3 == 0.0:
        # The overlap deficit underflowed the absolute resolution of
        # log_overlap at every step, which looks self-consistent to the
        # extrapolation test below.  Zero is only the right answer if the
        # family does not move at all.
        probe = state_at(omega + eps)
        moved = max(
            float(np.max(np.abs(probe.mean - reference.mean))),
            float(np.max(np.abs(probe.cov - reference.cov))),
        )
        if moved != 0.0:
            raise StepTooSmall(
                f"overlap deficit underflowed at eps={eps!r}; increase eps"
            )
    r1 = 2.0 * q2 - q1
    r2 = 2.0 * q3 - q2
    if abs(r1 - r2) > 1e-3 * max(abs(r1), abs(r2)) + 1e-6:
        raise StepTooSmall(
            f"overlap-QFI extrapolations disagree ({r1!r} vs {r2!r}); "
            f"adjust eps (currently {eps!r})"
        )
    return r2


def make_squeezed_vacuum(xi: float, n_modes: int = 1) -> GaussianState:
    """Product of ``n_modes`` identical squeezed vacua with Var(X) = e^{-2 xi}/4."""
    if n_modes < 1:
        raise InvalidSpec(f"n_modes must be >= 1, got {n_modes}")
    one = GaussianState.squeezed_vacuum(xi)
    if n_modes == 1:
        return one
    return GaussianState.product([one] * n_modes)


def make_two_mode_ground(p) -> GaussianState:
    """Ground state of the resonant coupled-boson pair in the lab mode basis.

    Builds the two independently squeezed normal modes c = (a - b)/sqrt(2)
    and d = (a + b)/sqrt(2) from the closed-form squeezing parameters, then
    rotates back to the (a, b) basis with the balanced mixer.  The result is
    an entangled two-mode squeezed ground state whose local occupations can
    be compared against the closed-form lab-mode occupation.
    """
    from .dicke import squeezing_parameters

    sq = squeezing_parameters(p)
    normal = GaussianState.product(
        [
            GaussianState.squeezed_vacuum(sq.xi_minus),
            GaussianState.squeezed_vacuum(sq.xi_plus),
        ]
    )
    return normal.with_symplectic(balanced_mixer())


def quadrature_moments(state: GaussianState, mode: int = 0) -> tuple[float, float, float]:
    """(mean, second, fourth) moments of the X quadrature of one mode.

    ``second`` and ``fourth`` are the *raw* moments <X^2> and <X^4>, using the
    Gaussian closed form for the fourth moment.
    """
    return state.mean_x(mode), state.x2_moment(mode), state.x4_moment(mode)
