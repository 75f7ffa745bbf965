"""Command-line front end: ``fieldpos {verify,zbw,locality,covariance,yukawa}``.

Exit codes: 0 pass, 1 check or physics-band failure, 2 usage, 3 I/O.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from fieldpos import checks, tensor, wavepacket
from fieldpos.spinors import SPINS, MomentumGrid1D
from fieldpos.tensor import Boost, Rotation

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

SUBCOMMANDS = ("verify", "zbw", "locality", "covariance", "yukawa")

# per-subcommand defaults for options whose natural scale differs
_DEFAULTS = {
    "verify": {"grid_n": 256, "p_max": 8.0, "sigma_p": 0.2},
    "zbw": {"grid_n": 1024, "p_max": 8.0, "sigma_p": 0.2},
    "locality": {"grid_n": 256, "p_max": 8.0, "sigma_p": 0.2},
    "covariance": {"grid_n": 256, "p_max": 8.0, "sigma_p": 0.2},
    "yukawa": {"grid_n": 4096, "p_max": 64.0, "sigma_p": 1.0},
}

DEFAULT_WORD = "boost:x:0.5,rot:y:0.3"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    mass: float = 1.0
    seed: int = 0
    tol_exact: float = 1e-12
    tol_fd: float = 1e-6
    samples: int = 100
    grid_n: int = 256
    p_max: float = 8.0
    p0: float = 0.0
    sigma_p: float = 0.2
    mix: float = 0.5
    t_max: float = 40.0
    dt: float = 0.05
    out: Optional[str] = None
    word: str = DEFAULT_WORD

    def validate(self, explicit=()):
        """``explicit`` names the keys the user set; the tolerance ordering is only
        enforced when both tolerances were chosen, so a lone tight --tol-fd makes
        the FD checks fail rather than the command line."""
        if not self.mass > 0:
            raise UsageError("mass must be positive")
        if not (self.tol_exact > 0 and self.tol_fd > 0):
            raise UsageError("tolerances must be positive")
        if "tol_exact" in explicit and "tol_fd" in explicit and not self.tol_exact < self.tol_fd:
            raise UsageError("need tol_exact < tol_fd")
        if self.samples < 1:
            raise UsageError("samples must be at least 1")
        if self.grid_n < 2 or self.grid_n & (self.grid_n - 1):
            raise UsageError("grid_n must be a power of two")
        if not self.p_max > 0:
            raise UsageError("p_max must be positive")
        if not 0.0 <= self.mix <= 1.0:
            raise UsageError("mix must lie in [0, 1]")
        if not (self.t_max > 0 and self.dt > 0):
            raise UsageError("t_max and dt must be positive")
        # momenta are in units of the mass
        if not self.sigma_p > 4.0 * self.p_max / self.grid_n:
            raise UsageError(f"sigma_p must exceed 2 dp = {4.0 * self.p_max / self.grid_n:.4g} (units of m)")
        parse_word(self.word)


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"float": float, "int": int, "Optional[str]": str, "str": str}


def _cast(key: str, value: str):
    try:
        return _CASTS[_FIELD_TYPES[key]](value)
    except ValueError as exc:
        raise UsageError(f"bad value for {key}: {value!r}") from exc


def parse_config_text(text: str) -> dict:
    """``key = value`` lines, ``#`` comments, dashes or underscores in keys."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES:
            raise UsageError(f"config line {lineno}: unknown key {key!r}")
        out[key] = _cast(key, value)
    return out


def parse_word(text: str) -> list:
    """``kind:axis:value`` items joined by commas; kind boost|rot, axis x|y|z."""
    word = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        parts = item.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad word item {item!r}; expected kind:axis:value")
        kind, axis, value = parts
        if axis not in ("x", "y", "z"):
            raise UsageError(f"axis must be x, y or z, got {axis!r}")
        try:
            val = float(value)
        except ValueError as exc:
            raise UsageError(f"bad number in {item!r}") from exc
        if kind == "boost":
            word.append(Boost(axis, val))
        elif kind in ("rot", "rotation"):
            word.append(Rotation(axis, val))
        else:
            raise UsageError(f"kind must be boost or rot, got {kind!r}")
    if not word:
        raise UsageError("empty word")
    return word


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fieldpos", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="file of key = value lines; flags override it")
    common.add_argument("--mass", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--tol-exact", type=float)
    common.add_argument("--tol-fd", type=float)
    common.add_argument("--samples", type=int)
    common.add_argument("--grid-n", type=int)
    common.add_argument("--p-max", type=float, help="in units of the mass")
    common.add_argument("--p0", type=float, help="in units of the mass")
    common.add_argument("--sigma-p", type=float, help="in units of the mass")
    common.add_argument("--mix", type=float, help="particle fraction of the packet")
    common.add_argument("--t-max", type=float)
    common.add_argument("--dt", type=float)
    common.add_argument("--out", help="CSV output path (default: stdout)")
    common.add_argument("--word", help=f"Lorentz word, e.g. {DEFAULT_WORD!r}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "verify": "run the full verification suite",
        "zbw": "Dirac vs field position trajectories of a free packet",
        "locality": "overlap of displaced localized states",
        "covariance": "covariance of localized states under a Lorentz word",
        "yukawa": "decay of the nonlocal position remainder",
    }
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values = dict(_DEFAULTS[args.command])
    explicit = set()
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise OSError(f"cannot read config {args.config}: {exc.strerror}") from exc
        from_file = parse_config_text(text)
        values.update(from_file)
        explicit.update(from_file)
    for name in _FIELD_TYPES:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
            explicit.add(name)
    cfg = RunConfig(**values)
    cfg.validate(explicit)
    return cfg


# --- subcommands -------------------------------------------------------------


def _emit(cfg: RunConfig, csv_text: Optional[str], summary: str, out, err):
    """CSV to --out (summary to stdout) or CSV to stdout (summary to stderr)."""
    if csv_text is None:
        out.write(summary)
        return
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(csv_text)
        out.write(summary)
    else:
        out.write(csv_text)
        err.write(summary)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else f"{v:.12g}" for v in row])
    return buf.getvalue()


def run_verify(cfg: RunConfig, out, err) -> int:
    suite_cfg = checks.SuiteConfig(mass=cfg.mass, seed=cfg.seed, tol_exact=cfg.tol_exact, tol_fd=cfg.tol_fd,
                                   samples=cfg.samples, grid_n=cfg.grid_n, p_max=cfg.p_max)
    reports = checks.default_suite(suite_cfg)
    lines = [f"{'check':<34} {'anchor':<26} {'residual':>10} {'tol':>9}  status"]
    lines += [r.row() for r in reports]
    failed = [r.name for r in reports if not r.passed]
    lines.append(f"{len(reports) - len(failed)}/{len(reports)} checks passed (seed {cfg.seed})")
    _emit(cfg, _csv(["check", "anchor", "max_residual", "tolerance", "samples", "status"],
                    [(r.name, r.anchor, r.max_residual, r.tolerance, str(r.samples),
                      "PASS" if r.passed else "FAIL") for r in reports]) if cfg.out else None,
          "\n".join(lines) + "\n", out, err)
    return EXIT_FAIL if failed else EXIT_OK


def run_zbw(cfg: RunConfig, out, err) -> int:
    m = cfg.mass
    grid = MomentumGrid1D(cfg.grid_n, cfg.p_max * m, m)
    try:
        rec = wavepacket.zbw_report(grid, cfg.p0 * m, cfg.sigma_p * m, cfg.mix, cfg.t_max, cfg.dt)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    e0 = float(np.hypot(cfg.p0 * m, m))
    problems = []
    mixed = 0.0 < cfg.mix < 1.0
    if mixed:
        if abs(rec.oscillation.frequency / (2 * e0) - 1.0) > 0.05:
            problems.append(f"oscillation frequency {rec.oscillation.frequency:.6g} not within 5% of 2E(p0)")
        if rec.oscillation.amplitude > 1.0 / (2 * m):
            problems.append(f"oscillation amplitude {rec.oscillation.amplitude:.6g} exceeds 1/(2m)")
    if cfg.mix > 0.0:
        if rec.field_fit_residual > 1e-6:
            problems.append(f"field trajectory not affine (residual {rec.field_fit_residual:.3g})")
        if abs(rec.field_slope - rec.expected_field_slope) > 1e-3:
            problems.append("field slope differs from <p/E>")
    summary = (
        f"dirac oscillation frequency {rec.oscillation.frequency:.6f} (2E(p0) = {2 * e0:.6f})\n"
        f"dirac oscillation amplitude {rec.oscillation.amplitude:.6e} (bound 1/(2m) = {1 / (2 * m):.6g})\n"
        f"dirac drift slope {rec.dirac_slope:.6e}\n"
        f"max |Im x_dirac| {np.max(np.abs(rec.x_dirac_im)):.3e}\n"
        f"field slope {rec.field_slope:.9f} (<p/E> = {rec.expected_field_slope:.9f})\n"
        f"field linear-fit residual {rec.field_fit_residual:.3e}\n"
    )
    summary += "".join(f"FAIL: {p}\n" for p in problems)
    _emit(cfg, rec.to_csv(), summary, out, err)
    return EXIT_FAIL if problems else EXIT_OK


def run_locality(cfg: RunConfig, out, err) -> int:
    m = cfg.mass
    grid = MomentumGrid1D(cfg.grid_n, cfg.p_max * m, m)
    rows = []
    for j in range(1, grid.n // 2 + 1):
        d = j * grid.dx
        for branch in (1, -1):
            for spin in SPINS:
                rows.append((d, str(branch), str(spin), checks.overlap_ratio(grid, branch, spin, (0.0, 0.0, d))))
    worst = max(r[3] for r in rows)
    ok = worst < 1e-8
    summary = (f"max overlap ratio {worst:.3e} over {len(rows)} displaced states "
               f"(tolerance 1e-8) {'PASS' if ok else 'FAIL'}\n")
    _emit(cfg, _csv(["d", "branch", "spin", "ratio"], rows), summary, out, err)
    return EXIT_OK if ok else EXIT_FAIL


def run_covariance(cfg: RunConfig, out, err) -> int:
    word = parse_word(cfg.word)
    rng = np.random.default_rng(cfg.seed)
    rows, spinor_reps, eig_reps = [], [], []
    for i in range(cfg.samples):
        p = tensor.random_momentum(rng, cfg.mass, 2.0)
        branch = 1 if i % 2 == 0 else -1
        spin = SPINS[(i // 2) % 2]
        x = rng.uniform(-1.5, 1.5, size=3)
        x0 = float(rng.uniform(-1.0, 1.0))
        s_rep, e_rep = checks.check_covariance(word, p, branch, spin, x, x0, tol_spinor=1e-10, tol_eigen=cfg.tol_fd)
        spinor_reps.append(s_rep)
        eig_reps.append(e_rep)
        rows.append((*p.spatial, str(branch), str(spin), s_rep.max_residual, e_rep.max_residual))
    s_all = checks.CheckReport.combine("covariance_spinor", spinor_reps)
    e_all = checks.CheckReport.combine("covariance_eigenvalue", eig_reps)
    summary = f"word {cfg.word}\n{s_all.row()}\n{e_all.row()}\n"
    _emit(cfg, _csv(["p1", "p2", "p3", "branch", "spin", "spinor_residual", "eigen_residual"], rows),
          summary, out, err)
    return EXIT_OK if s_all.passed and e_all.passed else EXIT_FAIL


def run_yukawa(cfg: RunConfig, out, err) -> int:
    m = cfg.mass
    grid = MomentumGrid1D(cfg.grid_n, cfg.p_max * m, m)
    try:
        rep = wavepacket.yukawa_demo(grid, cfg.p0 * m, cfg.sigma_p * m)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ok = 0.9 <= rep.ratio <= 1.1
    summary = (f"fitted decay constant {rep.decay_constant:.6f} over |x| in "
               f"[{rep.fit_window[0]:.4g}, {rep.fit_window[1]:.4g}]; ratio to m {rep.ratio:.4f} "
               f"(band [0.9, 1.1]) {'PASS' if ok else 'FAIL'}\n")
    rows = zip(rep.positions, np.linalg.norm(rep.remainder, axis=-1), np.linalg.norm(rep.field, axis=-1))
    _emit(cfg, _csv(["x", "remainder_abs", "field_abs"], rows), summary, out, err)
    return EXIT_OK if ok else EXIT_FAIL


RUNNERS = {"verify": run_verify, "zbw": run_zbw, "locality": run_locality,
           "covariance": run_covariance, "yukawa": run_yukawa}


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve_config(args)
        return RUNNERS[args.command](cfg, out, err)
    except UsageError as exc:
        err.write(f"fieldpos {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"fieldpos {args.command}: I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
