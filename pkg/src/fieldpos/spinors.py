"""Particle and antiparticle Dirac spinors, localized plane-wave states, the
invariant scalar product on momentum grids, translations and energy projectors.

Spinors are normalized so that psi^dagger psi = E/m and psibar psi = +/-1.
Antiparticle spinors with label p sit at spatial Fourier mode -p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from fieldpos.dirac import (
    GAMMA0,
    boost_spinor_closed_batch,
    boost_spinor_rep,
    energy_projector_matrix,
)
from fieldpos.tensor import Momentum

SPINS = (0.5, -0.5)


def chi(spin: float) -> np.ndarray:
    """Eigenspinor of sigma^z / 2 with eigenvalue ``spin``."""
    if spin == 0.5:
        return np.array([1.0, 0.0], dtype=complex)
    if spin == -0.5:
        return np.array([0.0, 1.0], dtype=complex)
    raise ValueError(f"spin label must be +1/2 or -1/2, got {spin}")


def _check_branch(branch: int):
    if branch not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")


def rest_spinor(branch: int, spin: float) -> np.ndarray:
    """(chi, branch chi) / sqrt(2)."""
    _check_branch(branch)
    c = chi(spin)
    return np.concatenate([c, branch * c]) / np.sqrt(2.0)


@dataclass(frozen=True)
class DiracSpinor:
    components: np.ndarray
    branch: int
    spin: float
    momentum: Momentum

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.components, dtype=dtype)


def dirac_spinor(p: Momentum, branch: int, spin: float) -> DiracSpinor:
    """psi_{+/-eps}(p, lambda) = M(L_p) (chi, +/-chi) / sqrt(2)."""
    comps = boost_spinor_rep(p) @ rest_spinor(branch, spin)
    comps.setflags(write=False)
    return DiracSpinor(comps, branch, spin, p)


def dirac_spinor_batch(p, m: float, branch: int, spin: float) -> np.ndarray:
    """Spinor components for momenta of shape (..., 3); returns (..., 4)."""
    return boost_spinor_closed_batch(p, m) @ rest_spinor(branch, spin)


def energy_projector(p: Momentum, sign: int) -> np.ndarray:
    """Lambda_{+/-}(p) = (E +/- H_D(p)) / (2E), H_D(p) = gamma0 gamma.p + m gamma0.

    The antiparticle spinor with label p lies in the range of Lambda_-(-p).
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return energy_projector_matrix(p.spatial, p.mass, sign)


def branch_projector(p: Momentum, branch: int) -> np.ndarray:
    """Projector onto span{psi_{branch}(p, lambda)}: Lambda_+(p) or Lambda_-(-p)."""
    _check_branch(branch)
    if branch == 1:
        return energy_projector(p, 1)
    return energy_projector(-p, -1)


def localized_phase(p: Momentum, x, x0: float, branch: int) -> complex:
    """exp(i eps (E x0 - p.x)), the phase of the state localized at x at time x0."""
    x = np.asarray(x, dtype=float)
    return complex(np.exp(1j * branch * (p.energy * x0 - p.spatial @ x)))


@dataclass(frozen=True)
class PlaneWaveState:
    """Localized state exp(i eps p.x) psi_eps(p, lambda) with Minkowski p.x.

    It is an eigenstate of the field position operator at time ``time`` with
    eigenvalue ``location``.
    """

    spinor: DiracSpinor
    location: np.ndarray = field(default_factory=lambda: np.zeros(3))
    time: float = 0.0

    @property
    def phase(self) -> complex:
        s = self.spinor
        return localized_phase(s.momentum, self.location, self.time, s.branch)

    @property
    def components(self) -> np.ndarray:
        return self.phase * np.asarray(self.spinor.components)


def translate_phase(state: PlaneWaveState, d) -> PlaneWaveState:
    """Apply T(d) = exp(i P.d): multiply by exp(+i p.d) (particle) or exp(-i p.d)
    (antiparticle).

    Because exp(-i eps p.x) exp(i eps p.d) = exp(-i eps p.(x - d)), the
    translated state is the one localized at x - d.
    """
    d = np.asarray(d, dtype=float)
    return PlaneWaveState(state.spinor, np.asarray(state.location, dtype=float) - d, state.time)


def translation_factor(p: Momentum, d, branch: int) -> complex:
    """Momentum representation of T(d) on branch ``branch``: exp(i eps p.d)."""
    _check_branch(branch)
    return complex(np.exp(1j * branch * (p.spatial @ np.asarray(d, dtype=float))))


# --- grids and the invariant scalar product --------------------------------


@dataclass(frozen=True)
class MomentumGrid1D:
    """Uniform grid of N nodes along p^z, symmetric about 0: p_n = (n - (N-1)/2) dp.

    dp = 2 p_max / N; the reciprocal lattice spacing is 2 pi / (2 p_max).
    """

    n: int
    p_max: float
    mass: float = 1.0

    def __post_init__(self):
        if self.n < 2 or self.n & (self.n - 1):
            raise ValueError(f"grid size must be a power of two, got {self.n}")
        if not self.p_max > 0:
            raise ValueError("p_max must be positive")
        if not self.mass > 0:
            raise ValueError("mass must be positive")

    @property
    def dp(self) -> float:
        return 2.0 * self.p_max / self.n

    @property
    def dx(self) -> float:
        return 2.0 * np.pi / (2.0 * self.p_max)

    @property
    def nodes(self) -> np.ndarray:
        return (np.arange(self.n) - (self.n - 1) / 2.0) * self.dp

    @property
    def momenta(self) -> np.ndarray:
        """Nodes as 3-vectors along z, shape (N, 3)."""
        out = np.zeros((self.n, 3))
        out[:, 2] = self.nodes
        return out

    @property
    def energies(self) -> np.ndarray:
        return np.sqrt(self.nodes**2 + self.mass**2)

    @property
    def weights(self) -> np.ndarray:
        """Invariant measure per node: dp / (2 pi) * m / E."""
        return self.dp / (2.0 * np.pi) * self.mass / self.energies


@dataclass(frozen=True)
class MomentumGrid3D:
    """Cubic product grid (smoke-test scale) with the same node rule per axis."""

    n: int
    p_max: float
    mass: float = 1.0

    def __post_init__(self):
        MomentumGrid1D(self.n, self.p_max, self.mass)

    @property
    def axis(self) -> np.ndarray:
        return MomentumGrid1D(self.n, self.p_max, self.mass).nodes

    @property
    def momenta(self) -> np.ndarray:
        a = self.axis
        return np.stack(np.meshgrid(a, a, a, indexing="ij"), axis=-1).reshape(-1, 3)

    @property
    def energies(self) -> np.ndarray:
        q = self.momenta
        return np.sqrt(np.sum(q * q, axis=-1) + self.mass**2)

    @property
    def weights(self) -> np.ndarray:
        dp = 2.0 * self.p_max / self.n
        return (dp / (2.0 * np.pi)) ** 3 * self.mass / self.energies


def scalar_product(f, g, grid) -> complex:
    """<f|g> = sum_lambda int dp f^dagger g with dp = d^3p/(2 pi)^3 m/E.

    ``f`` and ``g`` have shape (N, ..., 4): grid node first, spinor index last,
    any spin-label axes in between (summed).
    """
    f = np.asarray(f, dtype=complex)
    g = np.asarray(g, dtype=complex)
    if f.shape != g.shape:
        raise ValueError(f"mismatched samples: {f.shape} vs {g.shape}")
    w = grid.weights
    if f.shape[0] != w.shape[0]:
        raise ValueError("samples do not match the grid")
    dens = np.sum(np.conj(f) * g, axis=tuple(range(1, f.ndim)))
    return complex(_pairwise_sum(w * dens))


def _pairwise_sum(x: np.ndarray) -> complex:
    # numpy's add.reduce is pairwise for contiguous arrays
    return np.add.reduce(np.ascontiguousarray(x))


def localized_state_on_grid(grid, branch: int, spin: float, x=(0.0, 0.0, 0.0), x0: float = 0.0) -> np.ndarray:
    """exp(i eps (E x0 - p.x)) psi_eps(p, lambda) sampled on the grid, shape (N, 4)."""
    _check_branch(branch)
    q = grid.momenta
    e = np.sqrt(np.sum(q * q, axis=-1) + grid.mass**2)
    phase = np.exp(1j * branch * (e * x0 - q @ np.asarray(x, dtype=float)))
    return phase[:, None] * dirac_spinor_batch(q, grid.mass, branch, spin)


def dirac_adjoint_product(a, b) -> complex:
    """abar b = a^dagger gamma0 b."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return complex(np.conj(a) @ GAMMA0 @ b)


def spectral_derivative(values, grid: MomentumGrid1D) -> np.ndarray:
    """d/dp^z of samples on a periodic 1-D grid (node axis first), via FFT.

    The Nyquist mode is dropped so real input stays real.
    """
    values = np.asarray(values, dtype=complex)
    n = grid.n
    kx = 2.0 * np.pi * np.fft.fftfreq(n, d=grid.dp)
    kx[n // 2] = 0.0
    shape = (n,) + (1,) * (values.ndim - 1)
    return np.fft.ifft(1j * kx.reshape(shape) * np.fft.fft(values, axis=0), axis=0)
