"""1-D free Dirac wavepackets on a momentum grid.

Evolution is spectral: each branch amplitude picks up exp(-/+ i E t).  The
Dirac field sampled at Fourier mode k is

    phi(k, t) = a_+(k) e^{-iEt} psi_+(k) + a_-(-k) e^{iEt} psi_-(-k),

since the antiparticle spinor with label p sits at mode -p.  On the symmetric
grid, -k is an array reversal.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional

import numpy as np

from fieldpos import dirac, operators
from fieldpos.spinors import SPINS, MomentumGrid1D, dirac_spinor_batch, rest_spinor, spectral_derivative

BRANCHES = (1, -1)


@dataclass(frozen=True)
class WavePacket:
    """Amplitudes a[b, n, s] for branch BRANCHES[b], node n, spin SPINS[s], labelled by
    the branch's own momentum label; ``time`` is the accumulated evolution time."""

    grid: MomentumGrid1D
    amplitudes: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if self.amplitudes.shape != (2, self.grid.n, 2):
            raise ValueError(f"amplitudes must have shape (2, {self.grid.n}, 2)")

    def norm(self) -> float:
        return float(np.add.reduce((self.grid.dp * np.abs(self.amplitudes) ** 2).ravel()))

    def branch_norm(self, branch: int) -> float:
        a = self.amplitudes[BRANCHES.index(branch)]
        return float(np.add.reduce((self.grid.dp * np.abs(a) ** 2).ravel()))

    def branches(self, tol: float = 0.0) -> tuple:
        return tuple(b for b in BRANCHES if self.branch_norm(b) > tol)


def gaussian_profile(q, center: float, sigma_p: float) -> np.ndarray:
    """exp(-(q - center)^2 / (4 sigma_p^2)); |.|^2 has standard deviation sigma_p."""
    return np.exp(-((q - center) ** 2) / (4.0 * sigma_p**2))


def build_packet(grid: MomentumGrid1D, p0: float, sigma_p: float, mix: float = 1.0,
                 spin: float = 0.5) -> WavePacket:
    """Gaussian packet with particle fraction ``mix``.

    The antiparticle label profile is centred at -p0 so both branches occupy
    the same Fourier modes and interfere.
    """
    if not 0.0 <= mix <= 1.0:
        raise ValueError("mix must lie in [0, 1]")
    if not sigma_p > 2.0 * grid.dp:
        raise ValueError(f"sigma_p={sigma_p} must exceed 2 dp = {2 * grid.dp:.4g}")
    if not abs(p0) + 4.0 * sigma_p < grid.p_max:
        raise ValueError("packet does not fit on the grid: need |p0| + 4 sigma_p < p_max")
    q = grid.nodes
    amps = np.zeros((2, grid.n, 2), dtype=complex)
    s = SPINS.index(spin)
    for b, (center, weight) in enumerate(((p0, mix), (-p0, 1.0 - mix))):
        g = gaussian_profile(q, center, sigma_p)
        g = g / np.sqrt(np.add.reduce(grid.dp * g * g))
        amps[b, :, s] = np.sqrt(weight) * g
    return WavePacket(grid, amps)


def evolve(packet: WavePacket, t: float) -> WavePacket:
    e = packet.grid.energies
    phases = np.stack([np.exp(-1j * e * t), np.exp(1j * e * t)])
    return replace(packet, amplitudes=packet.amplitudes * phases[:, :, None], time=packet.time + t)


@lru_cache(maxsize=32)
def _branch_spinors(grid: MomentumGrid1D, branch: int) -> np.ndarray:
    """psi_branch(p_n, lambda), shape (N, 2, 4)."""
    out = np.stack([dirac_spinor_batch(grid.momenta, grid.mass, branch, s) for s in SPINS], axis=1)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def _position_matrices(grid: MomentumGrid1D) -> np.ndarray:
    """A^3(p_n), shape (N, 4, 4)."""
    out = np.array([operators.field_position_matrix(q, grid.mass, 2) for q in grid.momenta])
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def _boosts(grid: MomentumGrid1D) -> tuple:
    """M(L_k), dM/dk^3 at k and at -k, each shape (N, 4, 4)."""
    kv = grid.momenta
    m = grid.mass
    out = (dirac.boost_spinor_closed_batch(kv, m), dirac.boost_spinor_derivative_batch(kv, m, 2),
           dirac.boost_spinor_closed_batch(-kv, m), dirac.boost_spinor_derivative_batch(-kv, m, 2))
    for a in out:
        a.setflags(write=False)
    return out


def branch_field(packet: WavePacket, branch: int) -> np.ndarray:
    """sum_lambda a(p, lambda) psi(p, lambda) in the branch's label coordinate, shape (N, 4)."""
    a = packet.amplitudes[BRANCHES.index(branch)]
    return np.einsum("ns,nsa->na", a, _branch_spinors(packet.grid, branch))


def dirac_field(packet: WavePacket) -> np.ndarray:
    """phi(k) at Fourier modes k = grid nodes, shape (N, 4)."""
    return branch_field(packet, 1) + branch_field(packet, -1)[::-1]


def _weighted(grid: MomentumGrid1D, f, g) -> complex:
    dens = np.sum(np.conj(f) * g, axis=-1)
    return complex(np.add.reduce(grid.weights * dens))


def dirac_position_raw(packet: WavePacket) -> complex:
    """<phi| i d/dk |phi> / <phi|phi> with the invariant measure; the imaginary part
    measures the non-Hermiticity of i d/dk under that measure."""
    phi = dirac_field(packet)
    dphi = spectral_derivative(phi, packet.grid)
    return _weighted(packet.grid, phi, 1j * dphi) / _weighted(packet.grid, phi, phi).real


def field_position_raw(packet: WavePacket, branch: Optional[int] = None) -> complex:
    """<f| X^3 |f> / <f|f> for one branch f, X^3 = eps (i d/dp + A^3)."""
    if branch is None:
        present = packet.branches()
        if len(present) != 1:
            raise ValueError("field position needs a single-branch packet; pass branch= to select one")
        branch = present[0]
    grid = packet.grid
    f = branch_field(packet, branch)
    a3 = _position_matrices(grid)
    xf = branch * (1j * spectral_derivative(f, grid) + np.einsum("nab,nb->na", a3, f))
    return _weighted(grid, f, xf) / _weighted(grid, f, f).real


def expect_position(packet: WavePacket, which: str = "dirac", branch: Optional[int] = None) -> float:
    if which == "dirac":
        return dirac_position_raw(packet).real
    if which == "field":
        return field_position_raw(packet, branch).real
    raise ValueError(f"which must be 'dirac' or 'field', got {which!r}")


def analytic_dirac_position(grid: MomentumGrid1D, p0: float, sigma_p: float, mix: float, t: float,
                            spin: float = 0.5) -> float:
    """Same quadrature as ``expect_position(..., 'dirac')`` but with the k-derivative of
    phi taken analytically (Gaussian, phase and boost derivatives) rather than by FFT."""
    k = grid.nodes
    e = grid.energies
    g = gaussian_profile(k, p0, sigma_p)
    norm = np.sqrt(np.add.reduce(grid.dp * g * g))
    g, dg = g / norm, -(k - p0) / (2.0 * sigma_p**2) * g / norm
    c_plus, c_minus = np.sqrt(mix), np.sqrt(1.0 - mix)
    r_plus, r_minus = rest_spinor(1, spin), rest_spinor(-1, spin)
    m_k, dm_k, m_mk, dm_mk = _boosts(grid)
    ph_p, ph_m = np.exp(-1j * e * t), np.exp(1j * e * t)
    v = k / e
    # antiparticle label profile is centred at -p0, so a_-(-k) = c_- g(k) with g even about p0
    plus = (c_plus * ph_p * g)[:, None] * (m_k @ r_plus)
    minus = (c_minus * ph_m * g)[:, None] * (m_mk @ r_minus)
    d_plus = (c_plus * ph_p * (dg - 1j * t * v * g))[:, None] * (m_k @ r_plus) + \
        (c_plus * ph_p * g)[:, None] * (dm_k @ r_plus)
    d_minus = (c_minus * ph_m * (dg + 1j * t * v * g))[:, None] * (m_mk @ r_minus) - \
        (c_minus * ph_m * g)[:, None] * (dm_mk @ r_minus)
    phi = plus + minus
    return (_weighted(grid, phi, 1j * (d_plus + d_minus)) / _weighted(grid, phi, phi).real).real


def mean_velocity(packet: WavePacket, branch: int) -> float:
    """Probability-weighted p/E over one branch's label distribution.

    This is the drift of the field position on either branch: the particle
    amplitude carries exp(-iEt) under X = i d/dp + A, the antiparticle amplitude
    exp(+iEt) under X = -i d/dp - A, and both give +p/E per label.
    """
    grid = packet.grid
    a2 = np.sum(np.abs(packet.amplitudes[BRANCHES.index(branch)]) ** 2, axis=-1)
    return float(np.add.reduce(a2 * grid.nodes / grid.energies) / np.add.reduce(a2))


# --- trajectories ----------------------------------------------------------


@dataclass
class Oscillation:
    frequency: float
    amplitude: float


@dataclass
class TrajectoryRecord:
    times: np.ndarray
    x_dirac: np.ndarray
    x_dirac_im: np.ndarray
    x_field: np.ndarray
    x_analytic: np.ndarray
    dirac_slope: float
    field_slope: float
    field_fit_residual: float
    expected_field_slope: float
    oscillation: Oscillation = field(default_factory=lambda: Oscillation(0.0, 0.0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "x_dirac", "x_dirac_im", "x_field", "x_analytic"])
        for row in zip(self.times, self.x_dirac, self.x_dirac_im, self.x_field, self.x_analytic):
            w.writerow([f"{v:.12g}" for v in row])
        return buf.getvalue()


def linear_fit(t, y) -> tuple:
    """Least-squares line; returns (slope, intercept, max |residual|)."""
    design = np.stack([t, np.ones_like(t)], axis=1)
    (slope, icept), *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(slope), float(icept), float(np.max(np.abs(y - slope * t - icept)))


def dominant_oscillation(t, y, pad: int = 16) -> Oscillation:
    """Angular frequency of the strongest line in the detrended signal (Hann window,
    zero padding, parabolic peak interpolation) and its least-squares amplitude."""
    t = np.asarray(t, dtype=float)
    dt = t[1] - t[0]
    slope, icept, _ = linear_fit(t, y)
    r = y - slope * t - icept
    if np.max(np.abs(r)) == 0.0:
        return Oscillation(0.0, 0.0)
    nfft = pad * len(t)
    power = np.abs(np.fft.rfft(r * np.hanning(len(t)), nfft))
    i = int(np.argmax(power[1:])) + 1
    shift = 0.0
    if 0 < i < len(power) - 1:
        lo, mid, hi = np.log(power[i - 1:i + 2] + 1e-300)
        denom = lo - 2 * mid + hi
        shift = 0.5 * (lo - hi) / denom if denom != 0 else 0.0
    omega = 2.0 * np.pi * (i + shift) / (nfft * dt)
    design = np.stack([np.cos(omega * t), np.sin(omega * t), t, np.ones_like(t)], axis=1)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return Oscillation(float(omega), float(np.hypot(coef[0], coef[1])))


def zbw_report(grid: MomentumGrid1D, p0: float = 0.0, sigma_p: float = 0.2, mix: float = 0.5,
               t_max: float = 40.0, dt: float = 0.05, spin: float = 0.5) -> TrajectoryRecord:
    """Dirac-position trajectory of the mixed packet against the field-position
    trajectory of its particle component."""
    packet = build_packet(grid, p0, sigma_p, mix, spin)
    particle = WavePacket(grid, packet.amplitudes * np.array([1.0, 0.0])[:, None, None])
    times = np.arange(int(round(t_max / dt)) + 1) * dt
    xd = np.empty(len(times), dtype=complex)
    xf = np.empty(len(times))
    xa = np.empty(len(times))
    for i, t in enumerate(times):
        xd[i] = dirac_position_raw(evolve(packet, t))
        xf[i] = expect_position(evolve(particle, t), "field", branch=1)
        xa[i] = analytic_dirac_position(grid, p0, sigma_p, mix, t, spin)
    d_slope, _, _ = linear_fit(times, xd.real)
    f_slope, _, f_res = linear_fit(times, xf)
    return TrajectoryRecord(times, xd.real, xd.imag, xf, xa, d_slope, f_slope, f_res,
                            mean_velocity(particle, 1), dominant_oscillation(times, xd.real))


# --- nonlocal remainder ----------------------------------------------------


@dataclass
class YukawaReport:
    mass: float
    decay_constant: float
    ratio: float
    fit_window: tuple
    remainder: np.ndarray
    positions: np.ndarray
    field: np.ndarray


def position_samples(grid: MomentumGrid1D, mom_field: np.ndarray) -> tuple:
    """psi(x_j) = sum_n dp/(2 pi) F(p_n) e^{i p_n x_j} on the reciprocal lattice
    x_j = (j - N/2) dx, evaluated by one FFT plus the half-offset phase factors.

    Returns (x, samples) with samples shape (N, ...)."""
    n = grid.n
    idx = np.arange(n)
    x = (idx - n // 2) * grid.dx
    c = (n - 1) / 2.0
    shape = (n,) + (1,) * (np.ndim(mom_field) - 1)
    pre = ((-1.0) ** idx).reshape(shape)
    post = (np.exp(-2j * np.pi * c * idx / n) * np.exp(1j * np.pi * c)).reshape(shape)
    vals = n * np.fft.ifft(pre * np.asarray(mom_field, dtype=complex), axis=0)
    return x, grid.dp / (2.0 * np.pi) * post * vals


def nonlocal_remainder(grid: MomentumGrid1D, amplitude: np.ndarray, spin: float = 0.5) -> tuple:
    """r = X psi - x psi for the particle field a(p) psi_+(p, spin) in position space.

    With position-space Fourier weight F = (m/E) a psi_+, x acts as i dF/dp while
    X acts as (m/E) i (da/dp) psi_+, so r <-> -i a d/dp[(m/E) psi_+]; the derivative
    of the boost is analytic.
    """
    m = grid.mass
    e = grid.energies
    rest = rest_spinor(1, spin)
    m_k, dm_k, _, _ = _boosts(grid)
    psi = m_k @ rest
    dpsi = dm_k @ rest
    d_weighted = (m / e)[:, None] * dpsi - (m * grid.nodes / e**3)[:, None] * psi
    x, r = position_samples(grid, -1j * amplitude[:, None] * d_weighted)
    _, f = position_samples(grid, (amplitude * m / e)[:, None] * psi)
    return x, r, f


def yukawa_demo(grid: MomentumGrid1D, p0: float = 0.0, sigma_p: float = 1.0, window=(8.0, 20.0),
                spin: float = 0.5) -> YukawaReport:
    """Fit log|r(x)| ~ c - kappa |x| over ``window`` (in units of 1/m) on both tails."""
    m = grid.mass
    amp = gaussian_profile(grid.nodes, p0, sigma_p)
    x, r, f = nonlocal_remainder(grid, amp, spin)
    lo, hi = window[0] / m, window[1] / m
    if hi >= x[-1]:
        raise ValueError("position grid too short for the requested tail window")
    mag = np.linalg.norm(r, axis=-1)
    sel = (np.abs(x) >= lo) & (np.abs(x) <= hi)
    floor = 1e-13 * np.max(mag)
    if np.sum(sel) < 8 or np.min(mag[sel]) <= floor:
        raise ValueError("insufficient tail range above the rounding floor")
    slope, _, _ = linear_fit(np.abs(x[sel]), np.log(mag[sel]))
    return YukawaReport(m, -slope, -slope / m, (lo, hi), r, x, f)


def concentration(report: YukawaReport, width: float, support_tol: float = 1e-3) -> float:
    """Fraction of sum |r|^2 within ``width`` of the region where |psi| > support_tol max|psi|."""
    fmag = np.linalg.norm(report.field, axis=-1)
    support = report.positions[fmag > support_tol * fmag.max()]
    near = (report.positions >= support.min() - width) & (report.positions <= support.max() + width)
    r2 = np.linalg.norm(report.remainder, axis=-1) ** 2
    return float(np.sum(r2[near]) / np.sum(r2))
