"""Sparse number-basis engine: truncated spaces, Hamiltonians, spectra.

The second independent numerical route (next to :mod:`uscmet.gaussian`).
Everything is built from raw ladder-operator matrix elements in a truncated
number basis, diagonalized with dense or sparse eigensolvers; no closed-form
dispersion or squeezing formula enters anywhere, so spectra obtained here can
referee the analytic modules.

A truncation cutoff is the largest *occupation* kept, i.e. a mode truncated
at cutoff ``c`` spans the ``c + 1`` states ``|0> .. |c>``; a two-level system
attached through ``spin_n=1`` contributes a factor of dimension 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import (
    ConvergenceError,
    DimensionCap,
    DimensionMismatch,
    InvalidSpec,
    StepTooSmall,
)

#: Largest total Hilbert-space dimension a TruncatedSpace will construct.
DIMENSION_CAP = 20_000

#: Below this dimension Hamiltonians are diagonalized densely (LAPACK);
#: above it, with the sparse Lanczos solver.
DENSE_LIMIT = 1200


def _boson_destroy(cutoff: int) -> sp.csr_matrix:
    data = np.sqrt(np.arange(1.0, cutoff + 1.0))
    return sp.diags(data, offsets=1, format="csr")


class TruncatedSpace:
    """Tensor product of truncated boson modes and an optional collective spin.

    Parameters
    ----------
    boson_cutoffs : sequence of int
        Maximum occupation kept in each boson mode (local dimension
        ``cutoff + 1``).
    spin_n : int, optional
        If given, append a collective spin built from ``spin_n`` two-level
        systems in the symmetric sector (spin j = spin_n/2, local dimension
        ``spin_n + 1``).
    dimension_cap : int
        Guard against runaway tensor products; exceeding it raises
        :class:`~uscmet.errors.DimensionCap`.
    """

    def __init__(
        self,
        boson_cutoffs,
        spin_n: int | None = None,
        dimension_cap: int = DIMENSION_CAP,
    ) -> None:
        cutoffs = tuple(int(c) for c in boson_cutoffs)
        if not cutoffs and spin_n is None:
            raise InvalidSpec("a TruncatedSpace needs at least one subsystem")
        if any(c < 1 for c in cutoffs):
            raise InvalidSpec(f"boson cutoffs must be >= 1, got {cutoffs}")
        if spin_n is not None and (not isinstance(spin_n, int) or spin_n < 1):
            raise InvalidSpec(f"spin_n must be a positive int, got {spin_n!r}")
        self.boson_cutoffs = cutoffs
        self.spin_n = spin_n
        self.dims = tuple(c + 1 for c in cutoffs) + (
            (spin_n + 1,) if spin_n is not None else ()
        )
        self.dim = int(np.prod(self.dims))
        if self.dim > dimension_cap:
            raise DimensionCap(
                f"total dimension {self.dim} exceeds the cap {dimension_cap}"
            )

    # -- embedding ------------------------------------------------------

    def _embed(self, local: sp.spmatrix, which: int) -> sp.csr_matrix:
        op = None
        for k, d in enumerate(self.dims):
            factor = local if k == which else sp.identity(d, format="csr")
            op = factor if op is None else sp.kron(op, factor, format="csr")
        return op.tocsr()

    def identity(self) -> sp.csr_matrix:
        return sp.identity(self.dim, format="csr")

    # -- boson operators -------------------------------------------------

    def _check_boson(self, mode: int) -> int:
        if not 0 <= mode < len(self.boson_cutoffs):
            raise DimensionMismatch(
                f"boson mode {mode} out of range for {len(self.boson_cutoffs)} modes"
            )
        return mode

    def destroy(self, mode: int = 0) -> sp.csr_matrix:
        mode = self._check_boson(mode)
        return self._embed(_boson_destroy(self.boson_cutoffs[mode]), mode)

    def create(self, mode: int = 0) -> sp.csr_matrix:
        return self.destroy(mode).T.tocsr()

    def number(self, mode: int = 0) -> sp.csr_matrix:
        mode = self._check_boson(mode)
        local = sp.diags(np.arange(self.boson_cutoffs[mode] + 1.0), format="csr")
        return self._embed(local, mode)

    def position(self, mode: int = 0) -> sp.csr_matrix:
        """X = (a + a^dag)/2 for one mode."""
        a = self.destroy(mode)
        return (0.5 * (a + a.T)).tocsr()

    # -- collective spin operators ----------------------------------------

    def _spin_axis(self) -> int:
        if self.spin_n is None:
            raise InvalidSpec("this space has no spin subsystem")
        return len(self.boson_cutoffs)

    def _spin_ladder(self) -> sp.csr_matrix:
        """Local raising operator J_+ in the |j, m> basis, m ascending."""
        j = self.spin_n / 2.0
        m = np.arange(-j, j)  # m values that can be raised
        data = np.sqrt(j * (j + 1.0) - m * (m + 1.0))
        return sp.diags(data, offsets=-1, format="csr")

    def spin_plus(self) -> sp.csr_matrix:
        return self._embed(self._spin_ladder(), self._spin_axis())

    def spin_minus(self) -> sp.csr_matrix:
        return self.spin_plus().T.tocsr()

    def spin_x(self) -> sp.csr_matrix:
        ladder = self._spin_ladder()
        return self._embed((0.5 * (ladder + ladder.T)).tocsr(), self._spin_axis())

    def spin_z(self) -> sp.csr_matrix:
        j = self.spin_n / 2.0
        local = sp.diags(np.arange(-j, j + 1.0), format="csr")
        return self._embed(local, self._spin_axis())


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------


def quadratic_pair_hamiltonian(
    space: TruncatedSpace, omega: float, Omega: float, g: float
) -> sp.csr_matrix:
    """Two bilinearly coupled bosons: w n_a + W n_b + (g/2)(a + a^dag)(b + b^dag).

    The soft normal mode of this Hamiltonian loses its restoring force at
    g = sqrt(omega * Omega).
    """
    if len(space.boson_cutoffs) != 2:
        raise DimensionMismatch("quadratic_pair_hamiltonian needs exactly 2 boson modes")
    xa = space.destroy(0) + space.create(0)
    xb = space.destroy(1) + space.create(1)
    h = omega * space.number(0) + Omega * space.number(1) + 0.5 * g * (xa @ xb)
    return h.tocsr()


def qubit_cavity_hamiltonian(
    space: TruncatedSpace, omega: float, Omega: float, g: float
) -> sp.csr_matrix:
    """Single qubit in a cavity: w n + (W/2) sigma_z + (g/2)(a + a^dag) sigma_x.

    With this normalization the quadratic (large-W) description becomes
    unstable at g = sqrt(omega * Omega).
    """
    if len(space.boson_cutoffs) != 1 or space.spin_n != 1:
        raise DimensionMismatch("qubit_cavity_hamiltonian needs 1 boson mode and spin_n=1")
    x = space.destroy(0) + space.create(0)
    # For spin_n=1 the collective operators are the halved Pauli matrices.
    h = (
        omega * space.number(0)
        + Omega * space.spin_z()
        + g * (x @ space.spin_x())
    )
    return h.tocsr()


def collective_spin_cavity_hamiltonian(
    space: TruncatedSpace, omega: float, Omega: float, g: float
) -> sp.csr_matrix:
    """N emitters in a cavity: w n + W S_z + (g/sqrt(N))(a + a^dag) S_x."""
    if len(space.boson_cutoffs) != 1 or space.spin_n is None:
        raise DimensionMismatch(
            "collective_spin_cavity_hamiltonian needs 1 boson mode and a spin sector"
        )
    x = space.destroy(0) + space.create(0)
    h = (
        omega * space.number(0)
        + Omega * space.spin_z()
        + (g / math.sqrt(space.spin_n)) * (x @ space.spin_x())
    )
    return h.tocsr()


def shifted_quadratic_hamiltonian(
    space: TruncatedSpace, omega: float, shift: float
) -> sp.csr_matrix:
    """Single mode with a quadrature-squared shift: w n + shift (a + a^dag)^2."""
    if len(space.boson_cutoffs) != 1 or space.spin_n is not None:
        raise DimensionMismatch("shifted_quadratic_hamiltonian needs exactly 1 boson mode")
    x = space.destroy(0) + space.create(0)
    return (omega * space.number(0) + shift * (x @ x)).tocsr()


def build_hp_two_mode(p, space: TruncatedSpace) -> sp.csr_matrix:
    """Truncated coupled-boson Hamiltonian for a parameter set ``p``.

    ``p`` provides ``omega``, ``Omega`` and ``g``; the space must hold two
    boson modes (cavity first, matter mode second) and no spin sector.
    """
    if space.spin_n is not None:
        raise DimensionMismatch("build_hp_two_mode expects a purely bosonic space")
    return quadratic_pair_hamiltonian(space, p.omega, p.Omega, p.g)


def build_rabi(p, space: TruncatedSpace) -> sp.csr_matrix:
    """Truncated qubit-cavity Hamiltonian for a parameter set ``p``."""
    return qubit_cavity_hamiltonian(space, p.omega, p.Omega, p.g)


def build_dicke_finite(p, space: TruncatedSpace) -> sp.csr_matrix:
    """Truncated N-emitter collective Hamiltonian for a parameter set ``p``.

    ``p.n_atoms`` must be set and must match the spin sector of ``space``.
    """
    if p.n_atoms is None:
        raise InvalidSpec("build_dicke_finite needs a parameter set with n_atoms")
    if space.spin_n != p.n_atoms:
        raise DimensionMismatch(
            f"space holds a spin sector for {space.spin_n} emitters, "
            f"parameters declare {p.n_atoms}"
        )
    return collective_spin_cavity_hamiltonian(space, p.omega, p.Omega, p.g)


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------


def lowest_eigenvalues(h: sp.spmatrix, k: int = 2) -> np.ndarray:
    """The k smallest eigenvalues of a sparse Hermitian matrix, ascending.

    Dense LAPACK below :data:`DENSE_LIMIT`, sparse Lanczos above.
    """
    dim = h.shape[0]
    if k < 1 or k >= dim:
        raise InvalidSpec(f"need 1 <= k < dim, got k={k}, dim={dim}")
    if dim <= DENSE_LIMIT:
        return np.linalg.eigvalsh(np.asarray(h.todense()))[:k]
    vals = spla.eigsh(h.tocsc(), k=k, which="SA", return_eigenvectors=False)
    return np.sort(vals)


def ground_state(h: sp.spmatrix) -> tuple[float, np.ndarray]:
    """Ground energy and (real) ground vector of a sparse Hermitian matrix."""
    dim = h.shape[0]
    if dim <= DENSE_LIMIT:
        vals, vecs = np.linalg.eigh(np.asarray(h.todense()))
        return float(vals[0]), vecs[:, 0]
    vals, vecs = spla.eigsh(h.tocsc(), k=1, which="SA")
    return float(vals[0]), vecs[:, 0]


def excitation_gap(h: sp.spmatrix) -> float:
    """E_1 - E_0."""
    e = lowest_eigenvalues(h, k=2)
    return float(e[1] - e[0])


def expectation(op: sp.spmatrix, vec: np.ndarray) -> float:
    """<v|op|v> for a normalized real vector."""
    return float(vec @ (op @ vec))


@dataclass(frozen=True)
class SpectrumResult:
    """Low-lying spectral data of one diagonalization.

    ``eigenvalues`` are the k smallest eigenvalues in ascending order,
    ``gap`` is ``eigenvalues[1] - eigenvalues[0]`` (0.0 when k == 1), and
    ``ground_state`` is the normalized ground vector in the number basis.
    """

    eigenvalues: np.ndarray
    gap: float
    ground_state: np.ndarray


def spectrum(h: sp.spmatrix, k: int = 2) -> SpectrumResult:
    """Diagonalize once and package eigenvalues, gap, and ground vector."""
    dim = h.shape[0]
    if k < 1 or k >= dim:
        raise InvalidSpec(f"need 1 <= k < dim, got k={k}, dim={dim}")
    if dim <= DENSE_LIMIT:
        vals, vecs = np.linalg.eigh(np.asarray(h.todense()))
        vals, vecs = vals[:k], vecs[:, :k]
    else:
        vals, vecs = spla.eigsh(h.tocsc(), k=k, which="SA")
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    gap = float(vals[1] - vals[0]) if k >= 2 else 0.0
    return SpectrumResult(np.asarray(vals, dtype=float), gap, vecs[:, 0])


def ground_expectation(result: SpectrumResult, obs: sp.spmatrix) -> float:
    """<obs> in the ground state of a :func:`spectrum` result."""
    return expectation(obs, result.ground_state)


# ---------------------------------------------------------------------------
# convergence and differentiation
# ---------------------------------------------------------------------------


def converged_value(
    eval_at_cutoff: Callable[[int], float],
    start_cutoff: int,
    rtol: float = 1e-8,
    probe: int = 10,
    max_doublings: int = 8,
) -> tuple[float, int]:
    """Evaluate a cutoff-dependent quantity until a +probe enlargement stops moving it.

    Parameters
    ----------
    eval_at_cutoff : callable
        Maps a cutoff to the scalar of interest (gap, occupation, ...).
    start_cutoff : int
        First cutoff tried; doubled while the probe test fails.
    rtol : float
        Relative agreement required between cutoff and cutoff + probe.
    probe : int
        Enlargement used for the convergence test.
    max_doublings : int
        Attempts before giving up with :class:`~uscmet.errors.ConvergenceError`.

    Returns
    -------
    (value, cutoff)
        The converged value (taken at the enlarged cutoff) and that cutoff.
    """
    if start_cutoff < 1:
        raise InvalidSpec(f"start_cutoff must be >= 1, got {start_cutoff}")
    cutoff = int(start_cutoff)
    for _ in range(max_doublings + 1):
        coarse = eval_at_cutoff(cutoff)
        fine = eval_at_cutoff(cutoff + probe)
        if abs(fine - coarse) <= rtol * max(abs(coarse), abs(fine), 1e-300):
            return fine, cutoff + probe
        cutoff *= 2
    raise ConvergenceError(
        f"no cutoff convergence reached below cutoff {cutoff} "
        f"(last values {coarse!r} -> {fine!r})"
    )


def derivative(
    value_at: Callable[[float], float],
    x: float,
    step: float | None = None,
    rtol: float = 1e-4,
) -> float:
    """d(value)/dx by central differences with one Richardson extrapolation.

    Central differences D(h) carry an O(h^2) error, so R(h) = (4 D(h/2) -
    D(h))/3 removes it; two such extrapolants from (h, h/2) and (h/2, h/4)
    must agree to ``rtol`` or :class:`~uscmet.errors.StepTooSmall` is raised
    (the step either truncates too coarsely or has hit eigenvalue noise).

    Parameters
    ----------
    value_at : callable
        Smooth scalar function of one variable (e.g. a spectral gap).
    x : float
        Point of differentiation.
    step : float, optional
        Base half-width h; defaults to ``1e-3 * |x|``.
    rtol : float
        Relative agreement demanded between the two extrapolants.
    """
    if step is None:
        step = 1e-3 * abs(x)
    if not (step > 0.0 and math.isfinite(step)):
        raise InvalidSpec(f"step must be a positive finite number, got {step!r}")

    def central(h: float) -> float:
        return (value_at(x + h) - value_at(x - h)) / (2.0 * h)

    d1, d2, d3 = central(step), central(step / 2.0), central(step / 4.0)
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d3 - d2) / 3.0
    if abs(r1 - r2) > rtol * max(abs(r1), abs(r2)) + 1e-10:
        raise StepTooSmall(
            f"derivative extrapolations disagree ({r1!r} vs {r2!r}) at step {step!r}"
        )
    return r2


def gap_derivative(
    builder: Callable[[float], sp.spmatrix],
    omega0: float,
    eps: float | None = None,
    rtol: float = 1e-4,
) -> float:
    """d(gap)/d(omega) of a frequency-parametrized Hamiltonian family.

    ``builder`` maps a cavity frequency to a truncated Hamiltonian with every
    other parameter frozen; the excitation gap of each build is differentiated
    at ``omega0`` with :func:`derivative`.  Keep the truncation fixed inside
    ``builder`` so the finite difference sees a smooth function.
    """
    return derivative(
        lambda w: excitation_gap(builder(w)), omega0, step=eps, rtol=rtol
    )
