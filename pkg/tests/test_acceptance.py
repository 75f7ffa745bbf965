"""Acceptance criteria, one test each.

Every criterion prints a single ``[PASS]``/``[FAIL]`` line (also collected into
the pytest terminal summary). Run standalone with ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from fieldpos import checks, dirac, operators, spinors, tensor, wavepacket
from fieldpos.dirac import BIG_SIGMA, I4
from fieldpos.operators import FDScheme
from fieldpos.spinors import SPINS, MomentumGrid1D
from fieldpos.tensor import Momentum

RESULTS = []


def _record(number, title, passed, detail):
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title}: {detail}"
    RESULTS.append(line)
    print(line)
    return passed


def _max(a):
    return float(np.max(np.abs(a)))


def _momenta(seed, count, p_max=8.0):
    rng = np.random.default_rng(seed)
    return [tensor.random_momentum(rng, 1.0, p_max) for _ in range(count)]


def criterion_01():
    start = time.perf_counter()
    ps = _momenta(1, 100)
    res = max(_max(operators.pauli_lubanski(p, "definition") - operators.pauli_lubanski(p, "closed")) for p in ps)
    elapsed = time.perf_counter() - start
    ok = res < 1e-12 and elapsed < 1.0 and max(p.norm for p in ps) <= 8.0
    return _record(1, "Pauli-Lubanski contraction = closed form", ok,
                   f"max residual {res:.2e} (< 1e-12), {elapsed:.2f} s (< 1 s)")


def criterion_02():
    worst_s = worst_w = worst_alg = 0.0
    for p in _momenta(2, 100):
        s = operators.field_spin(p)
        worst_s = max(worst_s, _max(sum(si @ si for si in s) - 0.75 * I4))
        worst_w = max(worst_w, _max(operators.minkowski_square(operators.pauli_lubanski(p)) + 0.75 * I4))
        for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
            worst_alg = max(worst_alg, _max(s[i] @ s[j] - s[j] @ s[i] - 1j * s[k]))
    ok = max(worst_s, worst_w, worst_alg) < 1e-12
    return _record(2, "Casimirs and SU(2) algebra", ok,
                   f"S.S {worst_s:.2e}, W.W {worst_w:.2e}, [S,S] {worst_alg:.2e} (< 1e-12)")


def criterion_03():
    res = max(_max(operators.wigner_spin(p, mode) - BIG_SIGMA / 2)
              for p in _momenta(3, 100) for mode in ("closed", "definition"))
    return _record(3, "Wigner spin = Sigma/2", res < 1e-13, f"max residual {res:.2e} (< 1e-13)")


def criterion_04():
    start = time.perf_counter()
    worst = {"fd": 0.0, "analytic": 0.0}
    for p in _momenta(4, 20, 4.0):
        xs = operators.field_position(1.0, 1)
        for mode, fd in (("fd", FDScheme()), ("analytic", None)):
            for i in range(3):
                for j in range(3):
                    sj = operators.field_spin_operator(1.0, j)
                    pj = operators.momentum_operator(1.0, j)
                    worst[mode] = max(
                        worst[mode],
                        _max(operators.commutator(xs[i], xs[j], p, fd)),
                        _max(operators.commutator(xs[i], sj, p, fd)),
                        _max(operators.commutator(xs[i], pj, p, fd) - (1j if i == j else 0.0) * I4),
                    )
    elapsed = time.perf_counter() - start
    ok = worst["fd"] < 1e-6 and worst["analytic"] < 1e-10 and elapsed < 5.0
    return _record(4, "canonical commutators", ok,
                   f"FD {worst['fd']:.2e} (< 1e-6), analytic {worst['analytic']:.2e} (< 1e-10), "
                   f"{elapsed:.2f} s (< 5 s)")


def criterion_05():
    rng = np.random.default_rng(5)
    worst, nonzero_slices = 0.0, 0
    for i in range(20):
        p = tensor.random_momentum(rng, 1.0, 3.0)
        x0 = float(rng.uniform(-1, 1)) if i % 2 else 0.0
        nonzero_slices += x0 != 0.0
        branch = 1 if i % 4 < 2 else -1
        rep = checks.check_position_eigenstate(rng.uniform(-1.5, 1.5, 3), x0, p, branch, SPINS[i % 2])
        worst = max(worst, rep.max_residual)
    ok = worst < 1e-6 and nonzero_slices > 0
    return _record(5, "position eigenstates", ok,
                   f"max residual {worst:.2e} (< 1e-6) over 20 tuples, {nonzero_slices} with x0 != 0")


def criterion_06():
    rng = np.random.default_rng(6)
    spin_res = eig_res = cocycle = 0.0
    for i in range(50):
        word = tensor.random_word(rng, 3)
        p = tensor.random_momentum(rng, 1.0, 2.0)
        s_rep, e_rep = checks.check_covariance(word, p, (1, -1)[i % 2], SPINS[(i // 2) % 2],
                                               rng.uniform(-1.5, 1.5, 3), float(rng.uniform(-1, 1)))
        spin_res = max(spin_res, s_rep.max_residual)
        eig_res = max(eig_res, e_rep.max_residual)
        cocycle = max(cocycle, checks.wigner_cocycle_residual(word, tensor.random_word(rng, 3), p))
    ok = spin_res < 1e-10 and eig_res < 1e-6 and cocycle < 1e-10
    return _record(6, "Lorentz covariance", ok,
                   f"spinor {spin_res:.2e} (< 1e-10), eigenvalue {eig_res:.2e} (< 1e-6), "
                   f"cocycle {cocycle:.2e} (< 1e-10)")


def criterion_07():
    ident = max(checks.fw_identity_residual(p) for p in _momenta(7, 50))
    rng = np.random.default_rng(70)
    op = 0.0
    for _ in range(10):
        center = rng.uniform(-1, 1, 3)
        trial = checks.gaussian_particle_field(1.0, center, 0.7, rng.normal(size=2) + 1j * rng.normal(size=2))
        p = Momentum(center + rng.uniform(-0.5, 0.5, 3), 1.0)
        op = max(op, checks.check_fw_equivalence(p, trial)[0].max_residual)
    ok = ident < 1e-12 and op < 1e-6
    return _record(7, "FW/NW equivalence", ok,
                   f"boost identity {ident:.2e} (< 1e-12), subspace operator {op:.2e} (< 1e-6)")


def criterion_08():
    p = Momentum(np.array([0.0, 0.0, 0.75]), 1.0)
    proj = spinors.branch_projector(p, 1)
    v3 = operators.velocity(1, p)[2]
    val = float(np.real(np.trace(v3 @ proj) / 2))
    sub = 0.0
    for q in _momenta(8, 30, 4.0):
        for branch in (1, -1):
            pr = spinors.branch_projector(q, branch)
            v = operators.velocity(branch, q)
            sub = max(sub, _max(v @ pr - (branch * q.spatial / q.energy)[:, None, None] * pr))
    added = max(_max(operators.velocity_added_term(q, k) @ spinors.dirac_spinor(q, 1, s).components)
                for q in _momenta(80, 30) for k in range(3) for s in SPINS)
    ok = abs(val - 0.6) < 1e-6 and sub < 1e-6 and added < 1e-12
    return _record(8, "velocity without Zitterbewegung", ok,
                   f"V3 at p3=0.75 is {val:.9f} (0.6), subspace {sub:.2e} (< 1e-6), "
                   f"added term {added:.2e} (< 1e-12)")


def criterion_09():
    start = time.perf_counter()
    grid = MomentumGrid1D(256, 8.0, 1.0)
    worst = max(checks.overlap_ratio(grid, branch, spin, (0.0, 0.0, j * grid.dx))
                for j in range(1, grid.n) for branch in (1, -1) for spin in SPINS)
    elapsed = time.perf_counter() - start
    ok = worst < 1e-8 and elapsed < 1.0
    return _record(9, "NW locality on the grid", ok,
                   f"max overlap ratio {worst:.2e} (< 1e-8) over all {grid.n - 1} lattice shifts, "
                   f"{elapsed:.2f} s (< 1 s)")


def criterion_10():
    start = time.perf_counter()
    grid = MomentumGrid1D(1024, 8.0, 1.0)
    mixed = wavepacket.zbw_report(grid, 0.0, 0.2, 0.5, 40.0, 0.05)
    pure = wavepacket.zbw_report(grid, 0.4, 0.2, 1.0, 40.0, 0.05)
    elapsed = time.perf_counter() - start
    freq_ok = abs(mixed.oscillation.frequency / 2.0 - 1.0) < 0.05
    amp_ok = mixed.oscillation.amplitude <= 0.5
    slope_err = abs(pure.field_slope - pure.expected_field_slope)
    ok = freq_ok and amp_ok and pure.field_fit_residual < 1e-6 and slope_err < 1e-3 and elapsed < 10.0
    return _record(10, "Zitterbewegung contrast", ok,
                   f"frequency {mixed.oscillation.frequency:.4f} (2 +/- 5%), amplitude "
                   f"{mixed.oscillation.amplitude:.4f} (<= 0.5), field fit residual {pure.field_fit_residual:.2e} "
                   f"(< 1e-6), slope error {slope_err:.2e} (< 1e-3), {elapsed:.2f} s (< 10 s)")


def criterion_11():
    worst = 0.0
    for i, p in enumerate(_momenta(11, 100)):
        worst = max(worst, checks.check_parity(p, (1, -1)[i % 2], SPINS[(i // 2) % 2]).max_residual)
    return _record(11, "parity and Hamiltonians", worst < 1e-12, f"max residual {worst:.2e} (< 1e-12)")


def criterion_12():
    rep = wavepacket.yukawa_demo(MomentumGrid1D(4096, 64.0, 1.0), sigma_p=1.0)
    ok = 0.9 <= rep.ratio <= 1.1
    return _record(12, "Yukawa tail decay", ok,
                   f"fitted decay constant / m = {rep.ratio:.4f} (in [0.9, 1.1])")


def criterion_13():
    cmd = [sys.executable, "-m", "fieldpos", "verify", "--seed", "13"]
    runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and runs[0].stderr == runs[1].stderr
    ok = same and all(r.returncode == 0 for r in runs) and len(runs[0].stdout) > 0
    return _record(13, "deterministic verify output", ok,
                   f"byte-identical: {same}, exit codes {[r.returncode for r in runs]}")


CRITERIA = [criterion_01, criterion_02, criterion_03, criterion_04, criterion_05, criterion_06, criterion_07,
            criterion_08, criterion_09, criterion_10, criterion_11, criterion_12, criterion_13]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i:02d}" for i in range(1, 14)])
def test_acceptance(criterion):
    assert criterion()


if __name__ == "__main__":
    outcomes = [c() for c in CRITERIA]
    print(f"{sum(outcomes)}/{len(outcomes)} acceptance criteria pass")
    sys.exit(0 if all(outcomes) else 1)
