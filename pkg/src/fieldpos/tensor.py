"""Minkowski kinematics: four-vectors, on-shell momenta, boosts, rotations and
Wigner rotations.

Natural units, metric diag(+, -, -, -). Lorentz matrices act on column vectors
(t, x, y, z); only restricted (proper, orthochronous) transformations are built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

_AXIS_TOL = 1e-12
_REST_GUARD = 1e-12


def minkowski_dot(a, b) -> float:
    """Return a^0 b^0 - a.b for two four-vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(a[0] * b[0] - a[1:] @ b[1:])


def levi_civita(mu: int, nu: int, rho: int, sigma: int) -> int:
    """Totally antisymmetric symbol with upper indices, eps^{1230} = +1.

    Equivalently eps^{0123} = -1.
    """
    idx = [mu, nu, rho, sigma]
    if sorted(idx) != [0, 1, 2, 3]:
        return 0
    # parity of the permutation taking (0,1,2,3) to idx
    sign = 1
    idx = list(idx)
    for i in range(4):
        while idx[i] != i:
            j = idx[i]
            idx[i], idx[j] = idx[j], idx[i]
            sign = -sign
    return -sign


@dataclass(frozen=True)
class Momentum:
    """On-shell four-momentum (E, p) of a particle with mass ``mass``."""

    spatial: np.ndarray
    mass: float = 1.0

    def __post_init__(self):
        p = np.array(self.spatial, dtype=float).reshape(3)
        p.setflags(write=False)
        object.__setattr__(self, "spatial", p)
        if not self.mass > 0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        object.__setattr__(self, "mass", float(self.mass))

    @classmethod
    def from_four_vector(cls, q, mass: float, rtol: float = 1e-10) -> "Momentum":
        q = np.asarray(q, dtype=float)
        if q[0] <= 0 or abs(minkowski_dot(q, q) - mass**2) > rtol * max(q[0] ** 2, mass**2):
            raise ValueError("four-vector is not on the positive mass shell")
        return cls(q[1:], mass)

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.spatial @ self.spatial))

    @property
    def energy(self) -> float:
        return float(np.sqrt(self.spatial @ self.spatial + self.mass**2))

    @property
    def four_vector(self) -> np.ndarray:
        return np.concatenate([[self.energy], self.spatial])

    @property
    def rapidity(self) -> np.ndarray:
        """Rapidity vector: direction of p, magnitude artanh(|p|/E)."""
        pn = self.norm
        if pn < _REST_GUARD * self.mass:
            return np.zeros(3)
        # asinh(|p|/m) == artanh(|p|/E) without cancellation at large |p|
        return self.spatial / pn * np.arcsinh(pn / self.mass)

    def __neg__(self) -> "Momentum":
        return Momentum(-self.spatial, self.mass)

    def __repr__(self) -> str:
        return f"Momentum(spatial={self.spatial.tolist()}, mass={self.mass})"


def _unit_axis(axis) -> np.ndarray:
    if isinstance(axis, str):
        if axis not in AXES:
            raise ValueError(f"axis must be x, y, z or a unit vector, got {axis!r}")
        axis = AXES[axis]
    n = np.asarray(axis, dtype=float).reshape(3)
    if abs(np.linalg.norm(n) - 1.0) > _AXIS_TOL:
        raise ValueError(f"axis must be a unit vector, got {n.tolist()}")
    return n


AXES = {"x": (1.0, 0.0, 0.0), "y": (0.0, 1.0, 0.0), "z": (0.0, 0.0, 1.0)}


@dataclass(frozen=True)
class Boost:
    """Pure boost along ``axis`` with rapidity ``rapidity``."""

    axis: tuple
    rapidity: float

    def __post_init__(self):
        object.__setattr__(self, "axis", tuple(_unit_axis(self.axis)))

    def inverse(self) -> "Boost":
        return Boost(self.axis, -self.rapidity)


@dataclass(frozen=True)
class Rotation:
    """Active rotation by ``angle`` (right-hand rule) about ``axis``."""

    axis: tuple
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "axis", tuple(_unit_axis(self.axis)))

    def inverse(self) -> "Rotation":
        return Rotation(self.axis, -self.angle)


Primitive = Union[Boost, Rotation]


def rotation_matrix3(axis, angle: float) -> np.ndarray:
    n = _unit_axis(axis)
    k = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return np.eye(3) + np.sin(angle) * k + (1.0 - np.cos(angle)) * (k @ k)


def boost_matrix(axis, rapidity: float) -> np.ndarray:
    n = _unit_axis(axis)
    ch, sh = np.cosh(rapidity), np.sinh(rapidity)
    lam = np.eye(4)
    lam[0, 0] = ch
    lam[0, 1:] = sh * n
    lam[1:, 0] = sh * n
    lam[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    return lam


def rotation_matrix(axis, angle: float) -> np.ndarray:
    lam = np.eye(4)
    lam[1:, 1:] = rotation_matrix3(axis, angle)
    return lam


def primitive_matrix(prim: Primitive) -> np.ndarray:
    if isinstance(prim, Boost):
        return boost_matrix(prim.axis, prim.rapidity)
    if isinstance(prim, Rotation):
        return rotation_matrix(prim.axis, prim.angle)
    raise TypeError(f"not a Lorentz primitive: {prim!r}")


def lorentz_from_word(word: Sequence[Primitive]) -> np.ndarray:
    """Product of the primitive matrices in word order (first element leftmost)."""
    lam = np.eye(4)
    for prim in word:
        lam = lam @ primitive_matrix(prim)
    return lam


def inverse_word(word: Sequence[Primitive]) -> list:
    return [prim.inverse() for prim in reversed(word)]


def standard_boost(p: Momentum) -> np.ndarray:
    """Pure boost L_p taking the rest momentum (m, 0, 0, 0) to (E, p)."""
    m, e = p.mass, p.energy
    v = p.spatial
    lam = np.eye(4)
    lam[0, 0] = e / m
    lam[0, 1:] = v / m
    lam[1:, 0] = v / m
    # (gamma - 1) n n^T written as p p^T / (m (E + m)) stays regular at p = 0
    lam[1:, 1:] += np.outer(v, v) / (m * (e + m))
    return lam


def lorentz_defect(lam: np.ndarray) -> float:
    """Max entry of |L^T g L - g|."""
    return float(np.max(np.abs(lam.T @ METRIC @ lam - METRIC)))


def is_restricted_lorentz(lam: np.ndarray, tol: float = 1e-10) -> bool:
    lam = np.asarray(lam, dtype=float)
    if lam.shape != (4, 4):
        return False
    return (
        lorentz_defect(lam) <= tol * max(1.0, float(np.max(np.abs(lam))) ** 2)
        and lam[0, 0] >= 1.0 - tol
        and np.linalg.det(lam) > 0
    )


def wigner_rotation(lam: np.ndarray, p: Momentum) -> np.ndarray:
    """R = L_{Lambda p}^{-1} Lambda L_p, a pure spatial rotation."""
    lam = np.asarray(lam, dtype=float)
    if not is_restricted_lorentz(lam):
        raise ValueError("not a restricted Lorentz matrix")
    q = Momentum.from_four_vector(lam @ p.four_vector, p.mass)
    return standard_boost(-q) @ lam @ standard_boost(p)


def is_rotation(r: np.ndarray, tol: float = 1e-10) -> bool:
    """True if r fixes (1, 0, 0, 0) and its spatial block is in SO(3)."""
    r = np.asarray(r, dtype=float)
    if r.shape != (4, 4):
        return False
    if abs(r[0, 0] - 1.0) > tol or np.max(np.abs(r[0, 1:])) > tol or np.max(np.abs(r[1:, 0])) > tol:
        return False
    s = r[1:, 1:]
    return bool(np.max(np.abs(s.T @ s - np.eye(3))) <= tol and np.linalg.det(s) > 0)


def random_word(rng: np.random.Generator, max_len: int = 3, max_rapidity: float = 1.0) -> list:
    """Random word of boosts and rotations about random axes."""
    word = []
    for _ in range(int(rng.integers(1, max_len + 1))):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        if rng.random() < 0.5:
            word.append(Boost(tuple(axis), float(rng.uniform(-max_rapidity, max_rapidity))))
        else:
            word.append(Rotation(tuple(axis), float(rng.uniform(-np.pi, np.pi))))
    return word


def random_momentum(rng: np.random.Generator, mass: float = 1.0, p_max: float = 8.0) -> Momentum:
    """Momentum with direction uniform on the sphere and |p| uniform in [0, p_max]."""
    d = rng.normal(size=3)
    d /= np.linalg.norm(d)
    return Momentum(d * rng.uniform(0.0, p_max) * mass, mass)
