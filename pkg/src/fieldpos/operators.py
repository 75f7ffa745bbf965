"""Momentum-space operators for the spin-1/2 representation and a commutator
engine for operators of the form  c d/dp^k + A(p).

Spatial component indices are 0-based here (0, 1, 2 for x, y, z). Matrix
fields take the spatial momentum as a length-3 array; the mass is fixed per
operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Callable, Optional

import numpy as np

from fieldpos.dirac import (
    BIG_SIGMA,
    GAMMA,
    GAMMA0,
    GAMMA5,
    I4,
    SIGMA_MUNU,
    boost_spinor_closed_batch,
    boost_spinor_derivative_batch,
    boost_spinor_inverse_batch,
    dirac_hamiltonian_batch,
    fw_unitary_batch,
    fw_unitary_derivative_batch,
    gamma_dot,
    sigma_dot,
)
from fieldpos.tensor import METRIC, Momentum, levi_civita

MatrixField = Callable[[np.ndarray], np.ndarray]
Jacobian = Callable[[np.ndarray, int], np.ndarray]


def _check_mass(m: float):
    if not m > 0:
        raise ValueError(f"mass must be positive, got {m}")


def _energy(p: np.ndarray, m: float) -> float:
    return float(np.sqrt(p @ p + m * m))


# --- finite differences ----------------------------------------------------


@dataclass(frozen=True)
class FDScheme:
    """Central differences at steps h and h/2 combined by one Richardson step, O(h^4).

    ``h`` overrides the default step ``rel_step * (m + |p|)``.
    """

    h: Optional[float] = None
    rel_step: float = 1e-4

    def step(self, p: np.ndarray, m: float) -> float:
        if self.h is not None:
            return float(self.h)
        return self.rel_step * (m + float(np.linalg.norm(p)))

    def derivative(self, func: Callable[[np.ndarray], np.ndarray], p, k: int, m: float = 1.0) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        h = self.step(p, m)
        e = np.zeros(3)
        e[k] = 1.0
        if not h > 0 or p[k] + h / 2 == p[k]:
            raise FloatingPointError(f"finite-difference step underflow (h={h})")

        def central(step):
            return (np.asarray(func(p + step * e)) - np.asarray(func(p - step * e))) / (2.0 * step)

        d1 = central(h)
        d2 = central(h / 2)
        return (4.0 * d2 - d1) / 3.0


DEFAULT_FD = FDScheme()


# --- operator components ---------------------------------------------------


@dataclass(frozen=True)
class OperatorComponent:
    """One component of a momentum-space operator: ``deriv_coeff`` d/dp^axis + A(p).

    ``axis`` is None for operators without a derivative term (W, S, H, P, ...).
    ``jacobian(p, j)`` optionally returns the analytic dA/dp^j.
    """

    deriv_coeff: complex
    axis: Optional[int]
    matrix_field: MatrixField
    mass: float
    jacobian: Optional[Jacobian] = None
    name: str = ""

    def matrix(self, p) -> np.ndarray:
        return np.asarray(self.matrix_field(np.asarray(p, dtype=float)), dtype=complex)

    def matrix_derivative(self, p, j: int, fd: Optional[FDScheme] = None) -> np.ndarray:
        """dA/dp^j: analytic when fd is None and a jacobian exists, else finite differences."""
        p = np.asarray(p, dtype=float)
        if fd is None and self.jacobian is not None:
            return np.asarray(self.jacobian(p, j), dtype=complex)
        return (fd or DEFAULT_FD).derivative(self.matrix, p, j, self.mass)

    def apply(self, field: Callable[[np.ndarray], np.ndarray], p, fd: Optional[FDScheme] = None) -> np.ndarray:
        """(c d/dp^k + A(p)) f at p, derivative of the spinor field by finite differences."""
        p = np.asarray(p, dtype=float)
        out = self.matrix(p) @ np.asarray(field(p), dtype=complex)
        if self.axis is not None and self.deriv_coeff != 0:
            out = out + self.deriv_coeff * (fd or DEFAULT_FD).derivative(field, p, self.axis, self.mass)
        return out


def _as_spatial(p) -> tuple:
    if isinstance(p, Momentum):
        return p.spatial, p.mass
    return np.asarray(p, dtype=float), None


def commutator(a: OperatorComponent, b: OperatorComponent, p, fd: Optional[FDScheme] = None) -> np.ndarray:
    """Matrix of [a, b] at p:  c_a dB/dp^{k_a} - c_b dA/dp^{k_b} + [A(p), B(p)].

    With ``fd=None`` analytic jacobians are used where both operators provide them
    (finite differences with the default scheme otherwise).
    """
    if a.mass != b.mass:
        raise ValueError("operators belong to different masses")
    q, m = _as_spatial(p)
    if m is not None and abs(m - a.mass) > 1e-12 * a.mass:
        raise ValueError("momentum is not on the operators' mass shell")
    amat, bmat = a.matrix(q), b.matrix(q)
    out = amat @ bmat - bmat @ amat
    if a.axis is not None and a.deriv_coeff != 0:
        out = out + a.deriv_coeff * b.matrix_derivative(q, a.axis, fd)
    if b.axis is not None and b.deriv_coeff != 0:
        out = out - b.deriv_coeff * a.matrix_derivative(q, b.axis, fd)
    return out


# --- Pauli-Lubanski vector and spins ---------------------------------------

_EPS_TERMS = [(perm, levi_civita(*perm)) for perm in permutations(range(4))]


def _contract_pl(j_upper: np.ndarray, p: Momentum) -> np.ndarray:
    """1/2 eps^{mu nu rho sigma} J_{nu rho} P_sigma for generator matrices J^{nu rho}."""
    j_lower = np.einsum("ma,nb,abij->mnij", METRIC, METRIC, j_upper)
    p_lower = METRIC @ p.four_vector
    w = np.zeros((4, 4, 4), dtype=complex)
    for (mu, nu, rho, sig), eps in _EPS_TERMS:
        w[mu] += 0.5 * eps * j_lower[nu, rho] * p_lower[sig]
    return w


def canonical_generators(p: Momentum) -> np.ndarray:
    """Spin parts of the Lorentz generators J^{nu rho} in the canonical (Wigner-induced)
    representation at momentum p:

    J^{ij} = eps_{ijk} Sigma^k / 2,   J^{0k} = (Sigma x p)^k / (2(m + E)).

    Orbital parts are omitted; they cancel in the contraction with P.
    """
    m, e, q = p.mass, p.energy, p.spatial
    j = np.zeros((4, 4, 4, 4), dtype=complex)
    j[1:, 1:] = SIGMA_MUNU[1:, 1:]
    boost = _cross_ops(BIG_SIGMA, q) / (2.0 * (m + e))
    j[0, 1:] = boost
    j[1:, 0] = -boost
    return j


def pauli_lubanski_definition(p: Momentum) -> np.ndarray:
    """W^mu = 1/2 eps^{mu nu rho sigma} J_{nu rho} P_sigma with the canonical generators."""
    return _contract_pl(canonical_generators(p), p)


def pauli_lubanski_covariant(p: Momentum) -> np.ndarray:
    """Same contraction with the Dirac spinor generators sigma^{nu rho}.

    Equals M(L_p) W M(L_p)^{-1} with W the canonical form.
    """
    return _contract_pl(SIGMA_MUNU, p)


def pauli_lubanski_closed(p: Momentum) -> np.ndarray:
    """W^0 = Sigma.p/2,  W = m Sigma/2 + p (Sigma.p) / (2(m+E))."""
    m, e, q = p.mass, p.energy, p.spatial
    sp = sigma_dot(q)
    w = np.zeros((4, 4, 4), dtype=complex)
    w[0] = sp / 2.0
    for k in range(3):
        w[k + 1] = m * BIG_SIGMA[k] / 2.0 + q[k] * sp / (2.0 * (m + e))
    return w


def pauli_lubanski(p: Momentum, mode: str = "closed") -> np.ndarray:
    """Stack W^0..W^3 of 4x4 matrices in the Dirac representation at momentum p."""
    _check_mass(p.mass)
    if mode == "definition":
        return pauli_lubanski_definition(p)
    if mode == "closed":
        return pauli_lubanski_closed(p)
    raise ValueError(f"unknown mode {mode!r}")


def minkowski_square(w: np.ndarray) -> np.ndarray:
    """W_mu W^mu for a stack of four matrices."""
    return w[0] @ w[0] - w[1] @ w[1] - w[2] @ w[2] - w[3] @ w[3]


def _cross_ops(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """(a x v)^k for a stack of three matrices a and a numeric 3-vector v."""
    return np.array(
        [
            a[1] * v[2] - a[2] * v[1],
            a[2] * v[0] - a[0] * v[2],
            a[0] * v[1] - a[1] * v[0],
        ]
    )


def field_spin(p: Momentum, branch: int = 1, mode: str = "closed") -> np.ndarray:
    """S = (P^0 W - P W^0)/m^2 + i gamma5 (W x P)/m^2, shape (3, 4, 4).

    On the antiparticle branch P and W both change sign, which leaves every
    bilinear unchanged, so the result does not depend on ``branch``.
    """
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    m = p.mass
    w = branch * pauli_lubanski(p, mode)
    p4 = branch * p.four_vector
    wv, pv = w[1:], p4[1:]
    return (p4[0] * wv - pv[:, None, None] * w[0]) / m**2 + 1j * GAMMA5 @ _cross_ops(wv, pv) / m**2


def chiral_spin_blocks(p: Momentum) -> tuple:
    """(S_-, S_+): the 2x2 diagonal blocks of the field spin on the left- and
    right-handed components."""
    s = field_spin(p)
    return s[:, :2, :2], s[:, 2:, 2:]


def wigner_spin(p: Momentum, mode: str = "closed") -> np.ndarray:
    """S_W = (W - W^0 P/(m + P^0)) / m, which reduces to Sigma/2."""
    m, e = p.mass, p.energy
    w = pauli_lubanski(p, mode)
    return (w[1:] - p.spatial[:, None, None] * w[0] / (m + e)) / m


def dirac_adjoint(a: np.ndarray) -> np.ndarray:
    """gamma0 A^dagger gamma0, the adjoint with respect to psibar phi."""
    return GAMMA0 @ np.conj(np.swapaxes(a, -1, -2)) @ GAMMA0


def field_spin_operator(m: float, j: int) -> OperatorComponent:
    """S^j as an operator component, with analytic jacobian from S = M (Sigma/2) M^{-1}."""
    _check_mass(m)

    def mat(q):
        return field_spin(Momentum(q, m))[j]

    def jac(q, i):
        mm = boost_spinor_closed_batch(q, m)
        mi = boost_spinor_inverse_batch(q, m)
        dm = boost_spinor_derivative_batch(q, m, i)
        dmi = -mi @ dm @ mi
        half = BIG_SIGMA[j] / 2.0
        return dm @ half @ mi + mm @ half @ dmi

    return OperatorComponent(0.0, None, mat, m, jac, name=f"S{j + 1}")


def momentum_operator(m: float, j: int) -> OperatorComponent:
    def mat(q):
        return q[j] * I4

    def jac(q, i):
        return (1.0 if i == j else 0.0) * I4

    return OperatorComponent(0.0, None, mat, m, jac, name=f"P{j + 1}")


# --- position operators ----------------------------------------------------


def field_position_matrix(q, m: float, k: int) -> np.ndarray:
    """Matrix part of the particle position operator, component k:

    (Sigma x p)^k / (2m(m+E)) - i gamma5 (Sigma^k/(2m) - (Sigma.p) p^k / (2mE(m+E))).
    """
    q = np.asarray(q, dtype=float)
    e = _energy(q, m)
    sxp = _cross_ops(BIG_SIGMA, q)[k]
    return sxp / (2 * m * (m + e)) - 1j * GAMMA5 @ (
        BIG_SIGMA[k] / (2 * m) - sigma_dot(q) * q[k] / (2 * m * e * (m + e))
    )


def field_position_jacobian(q, m: float, k: int, j: int) -> np.ndarray:
    """Analytic d/dp^j of field_position_matrix(., m, k)."""
    q = np.asarray(q, dtype=float)
    e = _energy(q, m)
    f1 = 1.0 / (2 * m * (m + e))
    df1 = -q[j] / (2 * m * e * (m + e) ** 2)
    g = 1.0 / (2 * m * e * (m + e))
    dg = -g * q[j] * (m + 2 * e) / (e * e * (m + e))
    unit = np.zeros(3)
    unit[j] = 1.0
    dsxp = _cross_ops(BIG_SIGMA, unit)[k]
    sxp = _cross_ops(BIG_SIGMA, q)[k]
    sp = sigma_dot(q)
    d_prod = BIG_SIGMA[j] * q[k] + (sp if j == k else 0.0)
    return dsxp * f1 + sxp * df1 + 1j * GAMMA5 @ (d_prod * g + sp * q[k] * dg)


def field_position(m: float, branch: int = 1, b: float = 0.0, time: float = 0.0) -> list:
    """Components X^1..X^3 of the field position operator on one branch.

    Particle (branch=+1):  i d/dp^k + A^k(p);  antiparticle:  -i d/dp^k - A^k(p).
    ``b`` adds the constant-b term b p^k (same sign convention); ``time`` gives the
    operator on the slice x^0 = time, which adds time * p^k / E for both branches.
    """
    _check_mass(m)
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    ops = []
    for k in range(3):

        def mat(q, k=k):
            e = _energy(q, m)
            return branch * (field_position_matrix(q, m, k) + b * q[k] * I4) + time * q[k] / e * I4

        def jac(q, j, k=k):
            e = _energy(q, m)
            dvel = ((1.0 if j == k else 0.0) / e - q[j] * q[k] / e**3) * I4
            db = b * (1.0 if j == k else 0.0) * I4
            return branch * (field_position_jacobian(q, m, k, j) + db) + time * dvel

        ops.append(OperatorComponent(branch * 1j, k, mat, m, jac, name=f"X{k + 1}"))
    return ops


def local_position_matrix(q, m: float, k: int) -> np.ndarray:
    """-i (dM/dp^k) M^{-1}: matrix part of M (i d/dp^k) M^{-1}."""
    dm = boost_spinor_derivative_batch(q, m, k)
    return -1j * dm @ boost_spinor_inverse_batch(q, m)


def dirac_position(m: float) -> list:
    """x^k = i d/dp^k."""
    zero = np.zeros((4, 4), dtype=complex)
    return [
        OperatorComponent(1j, k, lambda q: zero, m, lambda q, j: zero, name=f"x{k + 1}")
        for k in range(3)
    ]


def nw_position(m: float) -> list:
    """U_P (i d/dp^k - i p^k/(2E^2)) U_P^dagger, the FW mean position operator.

    Matrix part: i U_P dU_P^dagger/dp^k - i p^k/(2E^2).
    """
    _check_mass(m)
    ops = []
    for k in range(3):

        def mat(q, k=k):
            u = fw_unitary_batch(q, m)
            du = fw_unitary_derivative_batch(q, m, k)
            e2 = q @ q + m * m
            return 1j * u @ du.conj().T - 0.5j * q[k] / e2 * I4

        ops.append(OperatorComponent(1j, k, mat, m, None, name=f"X_NW{k + 1}"))
    return ops


def nw_counterterm(p: Momentum, k: int) -> complex:
    """Scalar -i p^k / (2 E^2)."""
    return -0.5j * p.spatial[k] / p.energy**2


# --- Hamiltonians and velocities -------------------------------------------


def hamiltonian(branch: int, p: Momentum) -> np.ndarray:
    """H_P = gamma0 gamma.p + m gamma0 (branch=+1), H_AP = gamma0 gamma.p - m gamma0."""
    _check_mass(p.mass)
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    return dirac_hamiltonian_batch(p.spatial, p.mass, branch)


def hamiltonian_operator(m: float, branch: int = 1) -> OperatorComponent:
    def mat(q):
        return dirac_hamiltonian_batch(q, m, branch)

    def jac(q, j):
        return GAMMA0 @ GAMMA[j]

    return OperatorComponent(0.0, None, mat, m, jac, name="H_P" if branch == 1 else "H_AP")


def velocity(branch: int, p: Momentum, fd: Optional[FDScheme] = DEFAULT_FD) -> np.ndarray:
    """V^k = -i [X^k, H] on branch ``branch``; shape (3, 4, 4).

    Pass ``fd=None`` for analytic derivatives.
    """
    xs = field_position(p.mass, branch)
    h = hamiltonian_operator(p.mass, branch)
    return np.array([-1j * commutator(x, h, p, fd) for x in xs])


def velocity_closed_form(p: Momentum) -> np.ndarray:
    """Particle velocity matrix

    (E/m) gamma0 gamma^k + gamma^k + i (Sigma x p)^k/m
        - (gamma0 gamma.p) p^k (E - m gamma0) / (m E (m + E)).
    """
    m, e, q = p.mass, p.energy, p.spatial
    g0gp = GAMMA0 @ gamma_dot(q)
    sxp = _cross_ops(BIG_SIGMA, q)
    out = np.zeros((3, 4, 4), dtype=complex)
    for k in range(3):
        out[k] = (
            (e / m) * GAMMA0 @ GAMMA[k]
            + GAMMA[k]
            + 1j * sxp[k] / m
            - g0gp * q[k] / (m * e * (m + e)) @ (e * I4 - m * GAMMA0)
        )
    return out


def velocity_added_term(p: Momentum, k: int) -> np.ndarray:
    """[gamma0 gamma^k/m - (gamma0 gamma.p) p^k/(mE(m+E))] (gamma0 gamma.p + m gamma0 - E).

    Annihilates particle spinors; adding it to the particle velocity gives p^k/E.
    """
    m, e, q = p.mass, p.energy, p.spatial
    g0gp = GAMMA0 @ gamma_dot(q)
    left = GAMMA0 @ GAMMA[k] / m - g0gp * q[k] / (m * e * (m + e))
    return left @ (g0gp + m * GAMMA0 - e * I4)


def dirac_velocity(k: int) -> np.ndarray:
    """-i [i d/dp^k, H_P] = gamma0 gamma^k, eigenvalues +/-1."""
    return GAMMA0 @ GAMMA[k]
