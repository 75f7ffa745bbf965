import numpy as np
import pytest
from conftest import P_GEN, P_REST, P_Z, branches, momenta, spins
from hypothesis import given

from fieldpos import operators, spinors
from fieldpos.dirac import GAMMA0, I4
from fieldpos.spinors import MomentumGrid1D, MomentumGrid3D, PlaneWaveState


def test_dirac_spinor_examples():
    rest = spinors.dirac_spinor(P_REST, 1, 0.5).components
    assert np.allclose(rest, np.array([1, 0, 1, 0]) / np.sqrt(2))
    psi = spinors.dirac_spinor(P_Z, 1, 0.5).components
    assert np.allclose(psi, [0.5, 0, 1, 0], atol=1e-15)
    assert np.vdot(psi, psi).real == pytest.approx(1.25, abs=1e-15)
    anti = spinors.dirac_spinor(P_Z, -1, 0.5).components
    assert np.allclose(anti, [0.5, 0, -1, 0], atol=1e-15)
    assert spinors.dirac_adjoint_product(anti, anti).real == pytest.approx(-1.0, abs=1e-15)


def test_bad_labels_rejected():
    with pytest.raises(ValueError):
        spinors.chi(1.0)
    with pytest.raises(ValueError):
        spinors.rest_spinor(0, 0.5)


@given(momenta, branches, spins)
def test_normalization(p, branch, spin):
    psi = spinors.dirac_spinor(p, branch, spin).components
    assert abs(np.vdot(psi, psi).real - p.energy / p.mass) < 1e-12 * p.energy
    assert abs(spinors.dirac_adjoint_product(psi, psi) - branch) < 1e-12 * p.energy


@given(momenta, spins, spins)
def test_branch_orthogonality_at_paired_modes(p, s1, s2):
    u = spinors.dirac_spinor(p, 1, s1).components
    v = spinors.dirac_spinor(-p, -1, s2).components
    assert abs(np.vdot(u, v)) < 1e-12 * p.energy


@given(momenta, branches, spins)
def test_field_spin_eigenvalue(p, branch, spin):
    psi = spinors.dirac_spinor(p, branch, spin).components
    sz = operators.field_spin(p)[2]
    assert np.max(np.abs(sz @ psi - spin * psi)) < 1e-12 * p.energy


@given(momenta, branches, spins)
def test_branch_projectors_fix_spinors(p, branch, spin):
    psi = spinors.dirac_spinor(p, branch, spin).components
    proj = spinors.branch_projector(p, branch)
    assert np.max(np.abs(proj @ psi - psi)) < 1e-12 * p.energy
    # the complement at the same Fourier mode
    mode = p if branch == 1 else -p
    assert np.max(np.abs(spinors.energy_projector(mode, -1 * branch) @ psi)) < 1e-12 * p.energy


def test_energy_projector_examples():
    assert np.allclose(spinors.energy_projector(P_REST, 1), (I4 + GAMMA0) / 2)
    lp, lm = spinors.energy_projector(P_GEN, 1), spinors.energy_projector(P_GEN, -1)
    assert np.max(np.abs(lp @ lm)) < 1e-13
    assert np.allclose(lp + lm, I4, atol=1e-13)
    assert np.allclose(lp @ lp, lp, atol=1e-13)
    assert np.allclose(lp, lp.conj().T, atol=1e-13)


@given(momenta)
def test_energy_projector_trace(p):
    assert abs(np.trace(spinors.energy_projector(p, 1)) - 2) < 1e-12


@given(momenta, branches)
def test_parity_on_spinors(p, branch):
    from fieldpos.dirac import boost_spinor_inverse_batch

    mi = boost_spinor_inverse_batch(p.spatial, p.mass)
    for spin in spinors.SPINS:
        psi = spinors.dirac_spinor(p, branch, spin).components
        assert np.max(np.abs(mi @ mi @ psi - branch * GAMMA0 @ psi)) < 1e-12 * p.energy


def test_translate_phase_examples():
    for branch, expected in ((1, np.exp(0.75j)), (-1, np.exp(-0.75j))):
        state = PlaneWaveState(spinors.dirac_spinor(P_Z, branch, 0.5))
        moved = spinors.translate_phase(state, [0, 0, 1])
        nz = np.abs(state.components) > 0
        ratio = moved.components[nz] / state.components[nz]
        assert np.allclose(ratio, expected, atol=1e-15)
        assert spinors.translation_factor(P_Z, [0, 0, 1], branch) == pytest.approx(expected, abs=1e-15)
        same = spinors.translate_phase(state, [0, 0, 0])
        assert np.array_equal(same.components, state.components)


def test_grid_geometry():
    grid = MomentumGrid1D(256, 8.0)
    assert grid.dp * grid.n == pytest.approx(16.0)
    assert grid.dx == pytest.approx(2 * np.pi / 16)
    assert np.allclose(grid.nodes, -grid.nodes[::-1])
    with pytest.raises(ValueError):
        MomentumGrid1D(100, 8.0)
    with pytest.raises(ValueError):
        MomentumGrid3D(6, 2.0)


def test_scalar_product_self_overlap_counts_modes():
    grid = MomentumGrid1D(256, 8.0)
    for branch in (1, -1):
        psi = spinors.localized_state_on_grid(grid, branch, 0.5)
        # integrand is exactly 1 per node: dp/(2pi) per mode
        assert spinors.scalar_product(psi, psi, grid).real == pytest.approx(grid.n * grid.dp / (2 * np.pi), rel=1e-13)


def test_scalar_product_properties(rng):
    grid = MomentumGrid1D(64, 4.0)
    f = rng.normal(size=(64, 4)) + 1j * rng.normal(size=(64, 4))
    g = rng.normal(size=(64, 4)) + 1j * rng.normal(size=(64, 4))
    assert spinors.scalar_product(f, f, grid).real >= 0
    assert spinors.scalar_product(f, g, grid) == pytest.approx(np.conj(spinors.scalar_product(g, f, grid)))
    assert spinors.scalar_product(2j * f, g, grid) == pytest.approx(-2j * spinors.scalar_product(f, g, grid))
    with pytest.raises(ValueError):
        spinors.scalar_product(f, g[:32], grid)


def test_displaced_states_orthogonal():
    grid = MomentumGrid1D(256, 8.0)
    for branch in (1, -1):
        psi0 = spinors.localized_state_on_grid(grid, branch, 0.5)
        norm = spinors.scalar_product(psi0, psi0, grid).real
        for n in range(1, 9):
            psi_d = spinors.localized_state_on_grid(grid, branch, 0.5, x=(0, 0, n * grid.dx))
            assert abs(spinors.scalar_product(psi0, psi_d, grid)) / norm < 1e-8


def test_scalar_product_is_pairwise_order_independent(rng):
    grid = MomentumGrid1D(1024, 8.0)
    f = rng.normal(size=(1024, 4)) + 1j * rng.normal(size=(1024, 4))
    perm = rng.permutation(1024)
    base = spinors.scalar_product(f, f, grid)
    dens = grid.weights * np.sum(np.abs(f) ** 2, axis=1)
    shuffled = np.add.reduce(dens[perm])
    assert abs(base - shuffled) < 1e-13 * abs(base)


def test_spectral_derivative_gaussian():
    grid = MomentumGrid1D(256, 8.0)
    q = grid.nodes
    f = np.exp(-q**2)
    d = spinors.spectral_derivative(f, grid)
    assert np.max(np.abs(d - (-2 * q * f))) < 1e-12
