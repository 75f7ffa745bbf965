"""Clifford algebra in the Weyl basis and spinor representations of Lorentz
transformations.

All exponentials are evaluated through closed 2x2 Pauli-vector forms; no general
matrix exponential is used. Functions whose name ends in ``_batch`` accept
momentum arrays of shape (..., 3) and return matrices of shape (..., 4, 4).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from fieldpos.tensor import Boost, Momentum, Rotation, _unit_axis, is_rotation

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
Z2 = np.zeros((2, 2), dtype=complex)

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)


def _block(a, b, c, d) -> np.ndarray:
    return np.block([[a, b], [c, d]])


GAMMA0 = _block(Z2, I2, I2, Z2)
GAMMA = np.array([_block(Z2, s, -s, Z2) for s in SIGMA])
GAMMA_MU = np.concatenate([GAMMA0[None], GAMMA])
GAMMA5 = 1j * GAMMA0 @ GAMMA[0] @ GAMMA[1] @ GAMMA[2]
BIG_SIGMA = np.array([_block(s, Z2, Z2, s) for s in SIGMA])
METRIC_INV = np.diag([1.0, -1.0, -1.0, -1.0])


def _sigma_munu() -> np.ndarray:
    out = np.zeros((4, 4, 4, 4), dtype=complex)
    for mu in range(4):
        for nu in range(4):
            g1, g2 = GAMMA_MU[mu], GAMMA_MU[nu]
            out[mu, nu] = 0.25j * (g1 @ g2 - g2 @ g1)
    return out


SIGMA_MUNU = _sigma_munu()


def clifford_basis() -> dict:
    """Fixed Weyl-basis matrices.

    Keys: ``gamma`` (gamma^0..gamma^3 stacked), ``gamma5``, ``Sigma`` (Sigma^1..3),
    ``sigma_munu`` (full 4x4 array of spinor generators (i/4)[gamma^mu, gamma^nu];
    the entries with mu < nu are the independent ones).
    """
    return {
        "gamma": GAMMA_MU.copy(),
        "gamma5": GAMMA5.copy(),
        "Sigma": BIG_SIGMA.copy(),
        "sigma_munu": SIGMA_MUNU.copy(),
    }


def pauli_dot(v) -> np.ndarray:
    """sigma . v for v of shape (..., 3); returns (..., 2, 2)."""
    return np.einsum("...k,kab->...ab", np.asarray(v, dtype=complex), SIGMA)


def sigma_dot(v) -> np.ndarray:
    """Sigma . v (4x4) for v of shape (..., 3)."""
    return np.einsum("...k,kab->...ab", np.asarray(v, dtype=complex), BIG_SIGMA)


def gamma_dot(v) -> np.ndarray:
    """gamma . v = gamma^k v^k (4x4) for spatial v of shape (..., 3)."""
    return np.einsum("...k,kab->...ab", np.asarray(v, dtype=complex), GAMMA)


def block_diag(upper, lower) -> np.ndarray:
    upper = np.asarray(upper, dtype=complex)
    lower = np.asarray(lower, dtype=complex)
    shape = np.broadcast_shapes(upper.shape, lower.shape)[:-2]
    out = np.zeros(shape + (4, 4), dtype=complex)
    out[..., :2, :2] = upper
    out[..., 2:, 2:] = lower
    return out


def exp_pauli_real(v) -> np.ndarray:
    """exp(sigma . v) for real v of shape (..., 3)."""
    v = np.asarray(v, dtype=float)
    a = np.sqrt(np.sum(v * v, axis=-1))
    # sinh(a)/a with the removable singularity at a = 0
    shc = np.where(a > 1e-8, np.sinh(a) / np.where(a > 1e-8, a, 1.0), 1.0 + a * a / 6.0)
    return np.cosh(a)[..., None, None] * I2 + shc[..., None, None] * pauli_dot(v)


def su2(axis, angle: float) -> np.ndarray:
    """u = exp(-i sigma . axis angle / 2)."""
    n = _unit_axis(axis)
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * pauli_dot(n)


def _check_mass(m: float):
    if not m > 0:
        raise ValueError(f"mass must be positive, got {m}")


# --- boosts ----------------------------------------------------------------


def boost_spinor_closed_batch(p, m: float) -> np.ndarray:
    """(E + m + gamma5 Sigma.p) / sqrt(2m(E+m)) for p of shape (..., 3)."""
    _check_mass(m)
    p = np.asarray(p, dtype=float)
    e = np.sqrt(np.sum(p * p, axis=-1) + m * m)
    norm = np.sqrt(2.0 * m * (e + m))
    num = (e + m)[..., None, None] * I4 + GAMMA5 @ sigma_dot(p)
    return num / norm[..., None, None]


def boost_spinor_inverse_batch(p, m: float) -> np.ndarray:
    """M(L_p)^{-1} = (E + m - gamma5 Sigma.p) / sqrt(2m(E+m))."""
    return boost_spinor_closed_batch(-np.asarray(p, dtype=float), m)


def boost_spinor_derivative_batch(p, m: float, k: int) -> np.ndarray:
    """Analytic d M(L_p) / d p^k from the rational closed form."""
    p = np.asarray(p, dtype=float)
    e = np.sqrt(np.sum(p * p, axis=-1) + m * m)
    norm = np.sqrt(2.0 * m * (e + m))
    pk = p[..., k]
    dnum = (pk / e)[..., None, None] * I4 + GAMMA5 @ BIG_SIGMA[k]
    mm = boost_spinor_closed_batch(p, m)
    dlog_norm = m * pk / (e * norm * norm)
    return dnum / norm[..., None, None] - mm * dlog_norm[..., None, None]


def boost_spinor_exp(p: Momentum) -> np.ndarray:
    """M(L_p) = diag(exp(-sigma.xi/2), exp(+sigma.xi/2)) from the rapidity."""
    half = p.rapidity / 2.0
    return block_diag(exp_pauli_real(-half), exp_pauli_real(half))


def boost_spinor_rep(p: Momentum, check: bool = True) -> np.ndarray:
    """Spinor representation M(L_p) of the standard boost.

    Evaluates both the exponential and the rational closed form; with
    ``check`` they must agree to 1e-12 relative to the entry scale.
    """
    _check_mass(p.mass)
    closed = boost_spinor_closed_batch(p.spatial, p.mass)
    if check:
        expo = boost_spinor_exp(p)
        scale = max(1.0, float(np.max(np.abs(closed))))
        if np.max(np.abs(expo - closed)) > 1e-12 * scale:
            raise ArithmeticError("exponential and closed forms of M(L_p) disagree")
    return closed


def boost_axis_spinor(axis, rapidity: float) -> np.ndarray:
    """exp(gamma5 Sigma . n eta / 2) for a boost along unit n."""
    n = _unit_axis(axis)
    half = n * rapidity / 2.0
    return block_diag(exp_pauli_real(-half), exp_pauli_real(half))


def rotation_spinor_rep(axis, angle: float) -> np.ndarray:
    """diag(u, u) with u = exp(-i sigma . axis angle / 2)."""
    u = su2(axis, angle)
    return block_diag(u, u)


def spinor_rep_from_word(word: Sequence) -> np.ndarray:
    """M(Lambda) for Lambda = lorentz_from_word(word), multiplied in the same order."""
    out = I4.copy()
    for prim in word:
        if isinstance(prim, Boost):
            out = out @ boost_axis_spinor(prim.axis, prim.rapidity)
        elif isinstance(prim, Rotation):
            out = out @ rotation_spinor_rep(prim.axis, prim.angle)
        else:
            raise TypeError(f"not a Lorentz primitive: {prim!r}")
    return out


# --- rotations -------------------------------------------------------------


def axis_angle(r: np.ndarray) -> tuple:
    """Axis and angle in [0, pi] of a spatial rotation (4x4 or 3x3)."""
    r = np.asarray(r, dtype=float)
    s = r[1:, 1:] if r.shape == (4, 4) else r
    cos_t = np.clip((np.trace(s) - 1.0) / 2.0, -1.0, 1.0)
    anti = np.array([s[2, 1] - s[1, 2], s[0, 2] - s[2, 0], s[1, 0] - s[0, 1]]) / 2.0
    sin_t = np.linalg.norm(anti)
    angle = float(np.arctan2(sin_t, cos_t))
    if sin_t > 1e-6 or (cos_t > 0 and sin_t > 0):
        return anti / sin_t, angle
    if cos_t > 0:
        return np.array([0.0, 0.0, 1.0]), 0.0
    # near pi: s + 1 = 2 n n^T (plus a small antisymmetric part)
    sym = (s + s.T) / 2.0 + np.eye(3)
    col = int(np.argmax(np.diag(sym)))
    n = sym[:, col] / np.sqrt(sym[col, col])
    n /= np.linalg.norm(n)
    # fix the sign of n from the antisymmetric part, sin(angle) n = anti
    if n @ anti < 0:
        n = -n
    return n, angle


def wigner_d_block(r: np.ndarray) -> np.ndarray:
    """SU(2) block u of a spatial rotation R, with trace(u) = 2 cos(angle/2) >= 0.

    R fixes only the SO(3) element; the sign of u is the one with angle in [0, pi].
    """
    r = np.asarray(r, dtype=float)
    if not is_rotation(r, tol=1e-9):
        raise ValueError("matrix is not a spatial rotation")
    s = r[1:, 1:] if r.shape == (4, 4) else r
    cos_t = (np.trace(s) - 1.0) / 2.0
    if cos_t > -0.5:
        # sin(angle/2) n = anti / (2 cos(angle/2)): no division by a small sine
        anti = np.array([s[2, 1] - s[1, 2], s[0, 2] - s[2, 0], s[1, 0] - s[0, 1]]) / 2.0
        c_half = np.sqrt((1.0 + min(cos_t, 1.0)) / 2.0)
        return c_half * I2 - 0.5j * pauli_dot(anti) / c_half
    n, angle = axis_angle(r)
    return np.cos(angle / 2) * I2 - 1j * np.sin(angle / 2) * pauli_dot(n)


def wigner_d(r: np.ndarray) -> np.ndarray:
    """Dirac representation D(R) = diag(u, u)."""
    u = wigner_d_block(r)
    return block_diag(u, u)


# --- Foldy-Wouthuysen ------------------------------------------------------


def fw_angle(p: Momentum) -> float:
    """Half-angle theta of the FW rotation, tan(2 theta) = |p| / m."""
    return 0.5 * float(np.arctan2(p.norm, p.mass))


def fw_unitary_batch(p, m: float) -> np.ndarray:
    """U_P(p) = U_FW(p)^dagger = (E + m - gamma.p) / sqrt(2E(E+m))."""
    _check_mass(m)
    p = np.asarray(p, dtype=float)
    e = np.sqrt(np.sum(p * p, axis=-1) + m * m)
    num = (e + m)[..., None, None] * I4 - gamma_dot(p)
    return num / np.sqrt(2.0 * e * (e + m))[..., None, None]


def fw_unitary_derivative_batch(p, m: float, k: int) -> np.ndarray:
    """Analytic d U_P / d p^k."""
    p = np.asarray(p, dtype=float)
    e = np.sqrt(np.sum(p * p, axis=-1) + m * m)
    pk = p[..., k]
    n2 = 2.0 * e * (e + m)
    norm = np.sqrt(n2)
    dnum = (pk / e)[..., None, None] * I4 - GAMMA[k]
    # d(n2)/dp^k = 2 (2E + m) p^k / E
    dn2 = 2.0 * (2.0 * e + m) * pk / e
    u = fw_unitary_batch(p, m)
    return dnum / norm[..., None, None] - u * (dn2 / (2.0 * n2))[..., None, None]


def fw_unitary(p: Momentum) -> np.ndarray:
    """U_P(p) = exp(-gamma0 gamma5 Sigma . n theta) with n = p/|p|, tan 2theta = |p|/m.

    gamma0 gamma5 Sigma^k = gamma^k, so the exponent squares to -theta^2 and the
    exponential is cos(theta) - sin(theta) gamma . n.
    """
    _check_mass(p.mass)
    pn = p.norm
    if pn < 1e-12 * p.mass:
        return I4.copy()
    theta = fw_angle(p)
    n = p.spatial / pn
    expo = np.cos(theta) * I4 - np.sin(theta) * (GAMMA0 @ GAMMA5 @ sigma_dot(n))
    closed = fw_unitary_batch(p.spatial, p.mass)
    if np.max(np.abs(expo - closed)) > 1e-12:
        raise ArithmeticError("exponential and closed forms of U_P disagree")
    return closed


def energy_projector_matrix(p, m: float, sign: int) -> np.ndarray:
    """(E +/- H_D(p)) / (2E) with H_D(p) = gamma0 gamma.p + m gamma0."""
    _check_mass(m)
    p = np.asarray(p, dtype=float)
    e = np.sqrt(np.sum(p * p, axis=-1) + m * m)
    h = GAMMA0 @ gamma_dot(p) + m * GAMMA0
    return (e[..., None, None] * I4 + sign * h) / (2.0 * e)[..., None, None]


def dirac_hamiltonian_batch(p, m: float, branch: int = 1) -> np.ndarray:
    """H_P (branch=+1) or H_AP (branch=-1): gamma0 gamma.p +/- m gamma0."""
    return GAMMA0 @ gamma_dot(p) + branch * m * GAMMA0
