"""Named, tolerance-reporting verifications of the covariance, locality, parity
and FW-equivalence properties of the field position operator.

Each ``check_*`` function evaluates one configuration and returns a
:class:`CheckReport`; :func:`default_suite` draws random samples from a seeded
generator and aggregates them, one report per named property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from fieldpos import dirac, operators, spinors, tensor
from fieldpos.dirac import BIG_SIGMA, GAMMA0, GAMMA5, I4, sigma_dot
from fieldpos.operators import DEFAULT_FD, FDScheme
from fieldpos.spinors import SPINS, MomentumGrid1D, MomentumGrid3D
from fieldpos.tensor import Momentum


@dataclass(frozen=True)
class CheckReport:
    name: str
    max_residual: float
    tolerance: float
    samples: int = 1
    details: str = ""
    anchor: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def row(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<34} {self.anchor:<26} {self.max_residual:10.3e} {self.tolerance:9.1e}  {status}"

    @classmethod
    def combine(cls, name: str, reports: Sequence["CheckReport"], tolerance: Optional[float] = None,
                anchor: str = "") -> "CheckReport":
        """Aggregate per-sample reports: worst residual, total sample count."""
        if not reports:
            raise ValueError("nothing to combine")
        worst = max(reports, key=lambda r: r.max_residual)
        tol = reports[0].tolerance if tolerance is None else tolerance
        return cls(name, worst.max_residual, tol, sum(r.samples for r in reports),
                   worst.details, anchor or next((r.anchor for r in reports if r.anchor), ""))


def _report(name, residuals: dict, tolerance, anchor="", samples=1) -> CheckReport:
    key = max(residuals, key=residuals.get)
    details = ", ".join(f"{k}={v:.2e}" for k, v in residuals.items())
    return CheckReport(name, float(residuals[key]), tolerance, samples, f"worst {key}; {details}", anchor)


def _fmt(v) -> str:
    return "(" + ", ".join(f"{float(c):.4g}" for c in np.ravel(v)) + ")"


# --- position eigenstates --------------------------------------------------


def localized_field(m: float, branch: int, coeffs, x, x0: float) -> Callable:
    """q -> exp(i eps (E_q x0 - q.x)) sum_lambda c_lambda psi_eps(q, lambda)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    x = np.asarray(x, dtype=float)

    def f(q):
        e = np.sqrt(q @ q + m * m)
        spin_part = sum(c * spinors.dirac_spinor_batch(q, m, branch, s) for c, s in zip(coeffs, SPINS))
        return np.exp(1j * branch * (e * x0 - q @ x)) * spin_part

    return f


def eigen_residual(field: Callable, m: float, branch: int, q, x, x0: float, fd: Optional[FDScheme]) -> np.ndarray:
    """Per-component |X^k(x0) f - x^k f| / |f| at q."""
    xs = operators.field_position(m, branch, time=x0)
    q = np.asarray(q, dtype=float)
    f0 = field(q)
    scale = np.linalg.norm(f0)
    return np.array([np.linalg.norm(op.apply(field, q, fd) - x[k] * f0) / scale for k, op in enumerate(xs)])


def check_position_eigenstate(x, x0: float, p: Momentum, branch: int, spin: float,
                              fd: Optional[FDScheme] = DEFAULT_FD, tolerance: float = 1e-6) -> CheckReport:
    """X^k(x0) applied to the state localized at x on the slice x0 returns x^k times it."""
    x = np.asarray(x, dtype=float)
    coeffs = [1.0, 0.0] if spin == 0.5 else [0.0, 1.0]
    f = localized_field(p.mass, branch, coeffs, x, x0)
    res = eigen_residual(f, p.mass, branch, p.spatial, x, x0, fd)
    return _report("position_eigenstate", {f"k{k + 1}": r for k, r in enumerate(res)}, tolerance,
                   "position-eigenstates")


# --- Lorentz covariance ----------------------------------------------------


def _sign_matched(a: np.ndarray, b: np.ndarray) -> tuple:
    """min over s = +/-1 of max|a - s b|: R fixes the SU(2) block only up to sign."""
    r_plus = float(np.max(np.abs(a - b)))
    r_minus = float(np.max(np.abs(a + b)))
    return (r_plus, 1) if r_plus <= r_minus else (r_minus, -1)


def transformed_spinor_residual(word, p: Momentum, branch: int, spin: float) -> tuple:
    """max|M(Lambda) psi(p, lambda) - sum_l' D_{l' l}(R) psi(Lambda p, l')| up to the SU(2) sign."""
    lam = tensor.lorentz_from_word(word)
    m_lam = dirac.spinor_rep_from_word(word)
    q = Momentum.from_four_vector(lam @ p.four_vector, p.mass)
    u = dirac.wigner_d_block(tensor.wigner_rotation(lam, p))
    lhs = m_lam @ spinors.dirac_spinor(p, branch, spin).components
    col = SPINS.index(spin)
    rhs = sum(u[i, col] * spinors.dirac_spinor(q, branch, s).components for i, s in enumerate(SPINS))
    res, sign = _sign_matched(lhs, rhs)
    return res, sign, q, u[:, col] * sign


def check_covariance(word, p: Momentum, branch: int, spin: float, x, x0: float,
                     fd: Optional[FDScheme] = DEFAULT_FD, tol_spinor: float = 1e-10,
                     tol_eigen: float = 1e-6) -> list:
    """Transform a localized eigenstate by the word's Lambda and re-test it.

    Returns two reports: the spinor identity M(Lambda) psi = sum D(R) psi(Lambda p)
    and the eigenvalue equation of X(x'^0) with eigenvalue x' = Lambda x.
    """
    x = np.asarray(x, dtype=float)
    lam = tensor.lorentz_from_word(word)
    res_spinor, sign, q, coeffs = transformed_spinor_residual(word, p, branch, spin)
    x4 = lam @ np.concatenate([[x0], x])
    # the plane-wave phase is a Minkowski scalar: p.x == q.x'
    phase_res = abs(np.exp(1j * tensor.minkowski_dot(p.four_vector, np.concatenate([[x0], x])))
                    - np.exp(1j * tensor.minkowski_dot(q.four_vector, x4)))
    f = localized_field(p.mass, branch, coeffs, x4[1:], x4[0])
    res_eig = eigen_residual(f, p.mass, branch, q.spatial, x4[1:], x4[0], fd)
    spin_rep = CheckReport("covariance_spinor", max(res_spinor, phase_res), tol_spinor, 1,
                           f"su2 sign {sign:+d}; p={_fmt(p.spatial)}", "covariance/wigner-rotation")
    eig_rep = _report("covariance_eigenvalue", {f"k{k + 1}": r for k, r in enumerate(res_eig)}, tol_eigen,
                      "covariant-eigenvalues")
    return [spin_rep, eig_rep]


def wigner_cocycle_residual(word1, word2, p: Momentum) -> float:
    """D(R(w2 w1, p)) vs D(R(w2, Lambda_1 p)) D(R(w1, p)), up to the SU(2) sign."""
    lam1 = tensor.lorentz_from_word(word1)
    lam2 = tensor.lorentz_from_word(word2)
    p1 = Momentum.from_four_vector(lam1 @ p.four_vector, p.mass)
    d_total = dirac.wigner_d_block(tensor.wigner_rotation(lam2 @ lam1, p))
    d_prod = dirac.wigner_d_block(tensor.wigner_rotation(lam2, p1)) @ dirac.wigner_d_block(
        tensor.wigner_rotation(lam1, p))
    return _sign_matched(d_total, d_prod)[0]


# --- locality ----------------------------------------------------------------


def overlap_ratio(grid, branch: int, spin: float, d) -> float:
    """|<psi_0|T(d) psi_0>| / <psi_0|psi_0> for the state localized at the origin."""
    psi0 = spinors.localized_state_on_grid(grid, branch, spin)
    shift = np.exp(1j * branch * (grid.momenta @ np.asarray(d, dtype=float)))
    norm = spinors.scalar_product(psi0, psi0, grid).real
    return abs(spinors.scalar_product(psi0, shift[:, None] * psi0, grid)) / norm


def _lattice_index(d: float, dx: float, n: int) -> int:
    j = d / dx
    if abs(j - round(j)) > 1e-9 * max(1.0, abs(j)):
        raise ValueError(f"displacement {d} is not a multiple of the lattice spacing {dx}")
    return int(round(j))


def check_locality_grid(n: int = 256, p_max: float = 8.0, mass: float = 1.0, displacements: Iterable = None,
                        branches=(1, -1), tolerance: float = 1e-8) -> CheckReport:
    """Max overlap ratio over nonzero lattice displacements along z, both branches and spins.

    Displacements default to d = j 2pi/(2 p_max), j = 1..8.
    """
    grid = MomentumGrid1D(n, p_max, mass)
    if displacements is None:
        displacements = [j * grid.dx for j in range(1, 9)]
    worst, where = 0.0, ""
    count = 0
    for d in displacements:
        j = _lattice_index(float(d), grid.dx, n)
        if j % n == 0:
            raise ValueError(f"displacement {d} is zero modulo the grid period")
        for branch in branches:
            for spin in SPINS:
                r = overlap_ratio(grid, branch, spin, (0.0, 0.0, float(d)))
                count += 1
                if r >= worst:
                    worst, where = r, f"d={d:.4g}, branch={branch:+d}, spin={spin:+.1f}"
    return CheckReport("nw_locality", worst, tolerance, count, where, "NW-locality")


def check_locality_3d(n: int = 16, p_max: float = 4.0, mass: float = 1.0, tolerance: float = 1e-8) -> CheckReport:
    """Smoke variant on a small cubic grid, displacements along each axis and a diagonal."""
    grid = MomentumGrid3D(n, p_max, mass)
    dx = 2.0 * np.pi / (2.0 * p_max)
    worst, where, count = 0.0, "", 0
    for d in ([dx, 0, 0], [0, dx, 0], [0, 0, 2 * dx], [dx, dx, -dx]):
        for branch in (1, -1):
            r = overlap_ratio(grid, branch, 0.5, d)
            count += 1
            if r >= worst:
                worst, where = r, f"d={d}, branch={branch:+d}"
    return CheckReport("nw_locality_3d", worst, tolerance, count, where, "NW-locality")


# --- parity and Hamiltonians -----------------------------------------------


def check_parity(p: Momentum, branch: int, spin: float, tolerance: float = 1e-12) -> CheckReport:
    """Inverse-boost-squared form of parity and the resulting Hamiltonian eigen-equations."""
    m, e = p.mass, p.energy
    mi = dirac.boost_spinor_inverse_batch(p.spatial, m)
    m_inv2 = mi @ mi
    g5sp = GAMMA5 @ sigma_dot(p.spatial)
    psi = spinors.dirac_spinor(p, branch, spin).components
    h = operators.hamiltonian(branch, p)
    res = {
        "inv_boost_squared": float(np.max(np.abs(m_inv2 - (e / m * I4 - g5sp / m)))),
        "parity_on_spinor": float(np.max(np.abs(m_inv2 @ psi - branch * GAMMA0 @ psi))),
        "mass_term": float(np.max(np.abs(branch * m * GAMMA0 @ psi - (e * I4 - g5sp) @ psi))),
        "hamiltonian_eigen": float(np.max(np.abs(h @ psi - e * psi))),
    }
    return _report("parity_hamiltonian", res, tolerance, "parity-hamiltonians")


# --- FW / NW equivalence ---------------------------------------------------


def fw_identity_residual(p: Momentum) -> float:
    """max|M(L_p)(1+gamma0)/2 - sqrt(E/m) U_P(p)(1+gamma0)/2|."""
    proj = (I4 + GAMMA0) / 2.0
    lhs = dirac.boost_spinor_rep(p) @ proj
    rhs = np.sqrt(p.energy / p.mass) * dirac.fw_unitary(p) @ proj
    return float(np.max(np.abs(lhs - rhs)))


def gaussian_particle_field(m: float, center, width: float, coeffs) -> Callable:
    """Smooth particle-subspace field exp(-|q - center|^2 / (2 width^2)) sum c_l psi_+(q, l)."""
    center = np.asarray(center, dtype=float)
    coeffs = np.asarray(coeffs, dtype=complex)

    def f(q):
        amp = np.exp(-np.sum((q - center) ** 2) / (2.0 * width**2))
        return amp * sum(c * spinors.dirac_spinor_batch(q, m, 1, s) for c, s in zip(coeffs, SPINS))

    return f


def check_fw_equivalence(p: Momentum, trial: Callable, fd: Optional[FDScheme] = DEFAULT_FD,
                         tol_fd: float = 1e-6, tol_exact: float = 1e-12) -> list:
    """Field position vs FW mean position on a particle-subspace trial field at p,
    plus the exact boost/FW projector identity. Returns two reports."""
    xp = operators.field_position(p.mass, 1)
    xnw = operators.nw_position(p.mass)
    proj = spinors.branch_projector(p, 1)
    res = {}
    for k in range(3):
        diff = xp[k].apply(trial, p.spatial, fd) - xnw[k].apply(trial, p.spatial, fd)
        res[f"k{k + 1}"] = float(np.max(np.abs(proj @ diff)))
    op_rep = _report("fw_nw_equivalence", res, tol_fd, "FW-mean-position")
    id_rep = CheckReport("fw_boost_identity", fw_identity_residual(p), tol_exact, 1,
                         f"p={_fmt(p.spatial)}", "FW-boost-identity")
    return [op_rep, id_rep]


def nw_hermiticity_residual(grid: MomentumGrid1D, f: np.ndarray, g: np.ndarray) -> float:
    """|<f|X g> - <X f|g>| for the z-component of the FW mean position operator,
    derivative term by spectral differentiation on the periodic grid."""
    op = operators.nw_position(grid.mass)[2]
    mats = np.array([op.matrix(q) for q in grid.momenta])

    def apply(h):
        return 1j * spinors.spectral_derivative(h, grid) + np.einsum("nab,nb->na", mats, h)

    return abs(spinors.scalar_product(f, apply(g), grid) - spinors.scalar_product(apply(f), g, grid))


def smooth_trial(grid: MomentumGrid1D, rng, degree: int = 3) -> np.ndarray:
    """Generic smooth grid field: random complex cubic per component times a unit-width Gaussian."""
    q = grid.nodes
    c = rng.normal(size=(degree + 1, 4)) + 1j * rng.normal(size=(degree + 1, 4))
    poly = np.stack([np.polyval(c[:, a], q / grid.mass) for a in range(4)], axis=-1)
    center = rng.uniform(-0.5, 0.5) * grid.mass
    return np.exp(-((q - center) / grid.mass) ** 2)[:, None] * poly


# --- the default suite -----------------------------------------------------


@dataclass
class SuiteConfig:
    mass: float = 1.0
    seed: int = 0
    tol_exact: float = 1e-12
    tol_fd: float = 1e-6
    samples: int = 100
    grid_n: int = 256
    p_max: float = 8.0
    fd: FDScheme = field(default_factory=FDScheme)


def _random_x(rng) -> np.ndarray:
    return rng.uniform(-1.5, 1.5, size=3)


def default_suite(cfg: SuiteConfig) -> list:
    """Run every registered check; report order is fixed."""
    rng = np.random.default_rng(cfg.seed)
    m = cfg.mass
    n = cfg.samples
    pmax = 8.0 * m

    def momenta(count, p_max=pmax):
        return [tensor.random_momentum(rng, m, p_max / m) for _ in range(count)]

    out = []

    # operator algebra
    ps = momenta(n)
    out.append(CheckReport(
        "pauli_lubanski_forms",
        max(float(np.max(np.abs(operators.pauli_lubanski(p, "definition") - operators.pauli_lubanski(p, "closed"))))
            for p in ps), cfg.tol_exact, n, "", "PL-contraction=closed"))
    cas = []
    for p in ps:
        s = operators.field_spin(p)
        w = operators.pauli_lubanski(p)
        su2 = max(float(np.max(np.abs(s[i] @ s[j] - s[j] @ s[i] - 1j * s[k])))
                  for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)))
        cas.append(max(float(np.max(np.abs(sum(si @ si for si in s) - 0.75 * I4))),
                       float(np.max(np.abs(operators.minkowski_square(w) + 0.75 * m * m * I4))), su2))
    out.append(CheckReport("casimirs_su2", max(cas), cfg.tol_exact, n, "", "casimirs"))
    out.append(CheckReport(
        "wigner_spin",
        max(float(np.max(np.abs(operators.wigner_spin(p, mode) - BIG_SIGMA / 2)))
            for p in ps for mode in ("closed", "definition")), 1e-13, n, "", "wigner-spin=Sigma/2"))
    out.append(CheckReport(
        "spin_conjugation",
        max(float(np.max(np.abs(operators.field_spin(p) - dirac.boost_spinor_rep(p) @ (BIG_SIGMA / 2)
                                @ dirac.boost_spinor_inverse_batch(p.spatial, m)))) for p in ps),
        cfg.tol_exact, n, "", "field-spin"))
    out.append(CheckReport(
        "angular_momentum_split",
        max(_angular_momentum_residual(p) for p in ps), 1e-10, n, "", "total-angular-momentum"))

    xs = operators.field_position(m, 1)
    ss = [operators.field_spin_operator(m, j) for j in range(3)]
    ps_op = [operators.momentum_operator(m, j) for j in range(3)]
    comm_ps = momenta(min(n, 50), 4.0 * m)
    for fd, name, tol in ((cfg.fd, "commutators_fd", cfg.tol_fd), (None, "commutators_analytic", 1e-10)):
        worst = 0.0
        for p in comm_ps:
            for i in range(3):
                for j in range(3):
                    worst = max(
                        worst,
                        float(np.max(np.abs(operators.commutator(xs[i], xs[j], p, fd)))),
                        float(np.max(np.abs(operators.commutator(xs[i], ss[j], p, fd)))),
                        float(np.max(np.abs(operators.commutator(xs[i], ps_op[j], p, fd)
                                            - (1j if i == j else 0.0) * I4))),
                    )
        out.append(CheckReport(name, worst, tol, len(comm_ps), "", "canonical-commutators"))

    eig = []
    for i in range(min(n, 20)):
        p = tensor.random_momentum(rng, m, 3.0)
        branch = 1 if i % 2 == 0 else -1
        spin = SPINS[(i // 2) % 2]
        x0 = float(rng.uniform(-1.0, 1.0)) if i % 4 else 0.0
        eig.append(check_position_eigenstate(_random_x(rng), x0, p, branch, spin, cfg.fd, cfg.tol_fd))
    out.append(CheckReport.combine("position_eigenstates", eig, cfg.tol_fd))

    cov_s, cov_e, cocycle = [], [], []
    for i in range(min(n, 50)):
        word = tensor.random_word(rng, 3)
        p = tensor.random_momentum(rng, m, 2.0)
        branch = 1 if i % 2 == 0 else -1
        s_rep, e_rep = check_covariance(word, p, branch, SPINS[(i // 2) % 2], _random_x(rng),
                                        float(rng.uniform(-1, 1)), cfg.fd, 1e-10, cfg.tol_fd)
        cov_s.append(s_rep)
        cov_e.append(e_rep)
        cocycle.append(wigner_cocycle_residual(word, tensor.random_word(rng, 3), p))
    out.append(CheckReport.combine("covariance_spinor", cov_s, 1e-10))
    out.append(CheckReport.combine("covariance_eigenvalue", cov_e, cfg.tol_fd))
    out.append(CheckReport("wigner_cocycle", max(cocycle), 1e-10, len(cocycle), "", "wigner-cocycle"))

    fw_ps = momenta(min(n, 50))
    out.append(CheckReport("fw_boost_identity", max(fw_identity_residual(p) for p in fw_ps), cfg.tol_exact,
                           len(fw_ps), "", "FW-boost-identity"))
    fw_ops = []
    for _ in range(min(n, 20)):
        center = rng.uniform(-1.0, 1.0, size=3)
        trial = gaussian_particle_field(m, center, 0.7, rng.normal(size=2) + 1j * rng.normal(size=2))
        p = Momentum(center + rng.uniform(-0.5, 0.5, size=3), m)
        fw_ops.append(check_fw_equivalence(p, trial, cfg.fd, cfg.tol_fd, cfg.tol_exact)[0])
    out.append(CheckReport.combine("fw_nw_equivalence", fw_ops, cfg.tol_fd))

    grid = MomentumGrid1D(cfg.grid_n, cfg.p_max * m, m)
    f, g = smooth_trial(grid, rng), smooth_trial(grid, rng)
    out.append(CheckReport("nw_hermiticity", nw_hermiticity_residual(grid, f, g), 1e-8, grid.n, "",
                           "NW-hermiticity"))

    vel, vel_fd, added = [], [], []
    for p in momenta(min(n, 50), 4.0 * m):
        for branch in (1, -1):
            proj = spinors.branch_projector(p, branch)
            target = branch * p.spatial / p.energy
            v = operators.velocity(branch, p, cfg.fd)
            vel_fd.append(float(np.max(np.abs(v @ proj - target[:, None, None] * proj))))
        closed = operators.velocity_closed_form(p)
        v_an = operators.velocity(1, p, None)
        vel.append(float(np.max(np.abs(v_an - closed))))
        for k in range(3):
            for s in SPINS:
                added.append(float(np.max(np.abs(operators.velocity_added_term(p, k)
                                                  @ spinors.dirac_spinor(p, 1, s).components))))
    out.append(CheckReport("velocity_subspace", max(vel_fd), cfg.tol_fd, len(vel_fd), "", "classical-velocity"))
    out.append(CheckReport("velocity_closed_form", max(vel), 1e-10, len(vel), "", "velocity-matrix"))
    out.append(CheckReport("velocity_added_term", max(added), cfg.tol_exact, len(added), "",
                           "added-term-annihilates"))

    out.append(check_locality_grid(cfg.grid_n, cfg.p_max * m, m))

    par = []
    for i, p in enumerate(momenta(n)):
        par.append(check_parity(p, 1 if i % 2 == 0 else -1, SPINS[(i // 2) % 2], cfg.tol_exact))
    out.append(CheckReport.combine("parity_hamiltonian", par, cfg.tol_exact))
    return out


def _angular_momentum_residual(p: Momentum) -> float:
    """(A x p) + S - S_W with A the matrix part of the particle position operator."""
    a = np.array([operators.field_position_matrix(p.spatial, p.mass, k) for k in range(3)])
    q = p.spatial
    axp = np.array([a[1] * q[2] - a[2] * q[1], a[2] * q[0] - a[0] * q[2], a[0] * q[1] - a[1] * q[0]])
    return float(np.max(np.abs(axp + operators.field_spin(p) - operators.wigner_spin(p))))
