"""Truncated-space engine: operators, model builders, convergence helpers."""

import math

import numpy as np
import pytest
import scipy.sparse as sp

from uscmet import DickeParams, RabiParams
from uscmet.errors import (
    ConvergenceError,
    DimensionCap,
    DimensionMismatch,
    InvalidSpec,
    StepTooSmall,
)
from uscmet import dicke, fock


def test_destroy_matrix_elements():
    space = fock.TruncatedSpace([4])
    a = space.destroy(0).toarray()
    for n in range(1, 5):
        assert a[n - 1, n] == pytest.approx(math.sqrt(n), rel=1e-15)
    assert np.count_nonzero(a) == 4


def test_number_operator_diagonal():
    space = fock.TruncatedSpace([5])
    n = space.number(0).toarray()
    np.testing.assert_allclose(np.diag(n), np.arange(6.0))


def test_position_is_scaled_sum():
    space = fock.TruncatedSpace([6])
    x = space.position(0)
    ref = (space.destroy(0) + space.create(0)) / 2.0
    assert abs(x - ref).max() == 0.0


def test_two_mode_embedding_commutes():
    space = fock.TruncatedSpace([5, 5])
    a, b = space.destroy(0), space.destroy(1)
    comm = a @ b - b @ a
    assert abs(comm).max() == pytest.approx(0.0, abs=1e-15)
    assert space.dim == 36


def test_spin_algebra():
    space = fock.TruncatedSpace([2], spin_n=3)
    sz = space.spin_z().toarray()
    sp_ = space.spin_plus().toarray()
    sm = space.spin_minus().toarray()
    # [S+, S-] = 2 Sz and the ladder is the adjoint pair
    np.testing.assert_allclose(sp_ @ sm - sm @ sp_, 2 * sz, atol=1e-13)
    np.testing.assert_allclose(sp_, sm.T, atol=1e-15)
    # Casimir: Sx^2 + Sy^2 + Sz^2 = j(j+1) with j = 3/2
    sx = space.spin_x().toarray()
    sy = (sp_ - sm) / 2j
    casimir = sx @ sx + (sy @ sy).real + sz @ sz
    np.testing.assert_allclose(
        np.diag(casimir), np.full(space.dim, 1.5 * 2.5), atol=1e-13
    )


def test_dimension_cap_enforced():
    with pytest.raises(DimensionCap):
        fock.TruncatedSpace([200, 200])


def test_harmonic_ladder():
    space = fock.TruncatedSpace([40])
    h = fock.shifted_quadratic_hamiltonian(space, 0.7, 0.0)
    vals = fock.lowest_eigenvalues(h, 6)
    np.testing.assert_allclose(np.diff(vals), np.full(5, 0.7), atol=1e-12)


@pytest.mark.parametrize(
    "params, lower",
    [
        (DickeParams.from_coupling_ratio(0.5), math.sqrt(0.5)),
        (DickeParams.from_coupling_ratio(0.9), math.sqrt(0.1)),
        (DickeParams(omega=1.0, Omega=4.0, g=1.0), 0.8590184234752989),
    ],
)
def test_pair_gap_matches_closed_form(params, lower):
    space = fock.TruncatedSpace([40, 40])
    gap = fock.excitation_gap(fock.build_hp_two_mode(params, space))
    assert gap == pytest.approx(lower, rel=1e-10)


def test_pair_builder_rejects_spin_space():
    space = fock.TruncatedSpace([10], spin_n=2)
    with pytest.raises(DimensionMismatch):
        fock.build_hp_two_mode(DickeParams.from_coupling_ratio(0.5), space)


def test_single_emitter_equals_qubit_model():
    """One collective emitter is the qubit-cavity model, eigenvalue for eigenvalue."""
    rp = RabiParams(omega=1.0, Omega=1.7, g=0.8)
    dp = DickeParams(omega=1.0, Omega=1.7, g=0.8, n_atoms=1)
    space = fock.TruncatedSpace([50], spin_n=1)
    vr = fock.lowest_eigenvalues(fock.build_rabi(rp, space), 8)
    vd = fock.lowest_eigenvalues(fock.build_dicke_finite(dp, space), 8)
    np.testing.assert_allclose(vr, vd, atol=1e-12)


def test_finite_builder_needs_atom_number():
    space = fock.TruncatedSpace([10], spin_n=2)
    p = DickeParams(omega=1.0, Omega=1.0, g=0.5)
    with pytest.raises(InvalidSpec):
        fock.build_dicke_finite(p, space)


def test_finite_builder_checks_spin_sector():
    space = fock.TruncatedSpace([10], spin_n=2)
    p = DickeParams(omega=1.0, Omega=1.0, g=0.5, n_atoms=4)
    with pytest.raises(DimensionMismatch):
        fock.build_dicke_finite(p, space)


@pytest.mark.parametrize("n_atoms", [2, 4, 8, 16])
def test_finite_size_gap_decreases_with_atom_number(n_atoms):
    """At fixed g/g_c the gap shrinks with emitter number toward the pair limit."""
    p = DickeParams(omega=1.0, Omega=1.0, g=0.9, n_atoms=n_atoms)
    space = fock.TruncatedSpace([60], spin_n=n_atoms)
    gap = fock.excitation_gap(fock.build_dicke_finite(p, space))
    limit = dicke.normal_frequencies(DickeParams.from_coupling_ratio(0.9)).omega_minus
    assert gap > limit
    p_half = DickeParams(omega=1.0, Omega=1.0, g=0.9, n_atoms=2 * n_atoms)
    space_half = fock.TruncatedSpace([60], spin_n=2 * n_atoms)
    gap_next = fock.excitation_gap(fock.build_dicke_finite(p_half, space_half))
    assert gap_next < gap


def test_spectrum_result_and_ground_expectation():
    """Soft-mode occupation from the eigenvector matches the closed form."""
    p = DickeParams.from_coupling_ratio(0.5)
    space = fock.TruncatedSpace([40, 40])
    result = fock.spectrum(fock.build_hp_two_mode(p, space), k=3)
    assert result.gap == pytest.approx(result.eigenvalues[1] - result.eigenvalues[0])
    # difference-mode occupation c^dag c with c = (a - b)/sqrt(2)
    na, nb = space.number(0), space.number(1)
    cross = space.create(0) @ space.destroy(1)
    n_soft = 0.5 * (na + nb - cross - cross.conj().T)
    occ = fock.ground_expectation(result, n_soft)
    assert occ == pytest.approx(0.030330085889910645, rel=1e-8)


def test_expectation_is_real_for_hermitian():
    space = fock.TruncatedSpace([20])
    h = fock.shifted_quadratic_hamiltonian(space, 1.0, 0.1)
    energy, vec = fock.ground_state(h)
    assert fock.expectation(h, vec) == pytest.approx(energy, rel=1e-12)


def test_converged_value_reports_cutoff():
    p = DickeParams.from_coupling_ratio(0.9)

    def gap_at(cutoff: int) -> float:
        space = fock.TruncatedSpace([cutoff, cutoff])
        return fock.excitation_gap(fock.build_hp_two_mode(p, space))

    value, cutoff = fock.converged_value(gap_at, start_cutoff=8)
    assert value == pytest.approx(math.sqrt(0.1), rel=1e-8)
    assert cutoff >= 8


def test_converged_value_raises_when_hopeless():
    # 1/cutoff never stabilizes under doubling at rtol 1e-8
    with pytest.raises(ConvergenceError):
        fock.converged_value(lambda c: 1.0 / c, start_cutoff=4, max_doublings=3)


def test_derivative_quadratic_exact():
    d = fock.derivative(lambda x: 3.0 * x * x + 2.0 * x, 1.5)
    assert d == pytest.approx(11.0, rel=1e-10)


def test_derivative_step_too_small():
    rng = np.random.default_rng(0)

    def noisy(x: float) -> float:
        return x + 1e-3 * rng.standard_normal()

    with pytest.raises(StepTooSmall):
        fock.derivative(noisy, 1.0, step=1e-9)


def test_gap_derivative_matches_closed_form():
    """Frequency slope of the pair gap against the analytic derivative."""
    p0 = DickeParams.from_coupling_ratio(0.5)

    def builder(w: float):
        space = fock.TruncatedSpace([30, 30])
        return fock.build_hp_two_mode(
            DickeParams(omega=w, Omega=1.0, g=p0.g), space
        )

    num = fock.gap_derivative(builder, 1.0)
    # d(omega_minus)/d(omega) at fixed Omega and g, from the closed form
    h = 1e-6
    up = dicke.normal_frequencies(DickeParams(omega=1 + h, Omega=1.0, g=p0.g))
    dn = dicke.normal_frequencies(DickeParams(omega=1 - h, Omega=1.0, g=p0.g))
    ref = (up.omega_minus - dn.omega_minus) / (2 * h)
    assert num == pytest.approx(ref, rel=1e-5)


def test_lowest_eigenvalues_sparse_dense_agree():
    p = DickeParams.from_coupling_ratio(0.8)
    dense_space = fock.TruncatedSpace([30, 30])  # 961 states: dense path
    sparse_space = fock.TruncatedSpace([45, 45])  # 2116 states: sparse path
    v_dense = fock.lowest_eigenvalues(fock.build_hp_two_mode(p, dense_space), 4)
    v_sparse = fock.lowest_eigenvalues(fock.build_hp_two_mode(p, sparse_space), 4)
    np.testing.assert_allclose(v_dense, v_sparse, rtol=1e-9)
