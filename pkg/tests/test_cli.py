import io
import subprocess
import sys

import pytest

from fieldpos import cli
from fieldpos.tensor import Boost, Rotation


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_parse_word():
    word = cli.parse_word("boost:x:0.5,rot:y:0.3")
    assert word == [Boost("x", 0.5), Rotation("y", 0.3)]
    for bad in ("boost:w:1", "spin:x:1", "boost:x", "boost:x:abc", ""):
        with pytest.raises(cli.UsageError):
            cli.parse_word(bad)


def test_parse_config_text():
    text = "# comment\nmass = 2.0\n tol-fd = 1e-5  # trailing\n\nseed=4\n"
    assert cli.parse_config_text(text) == {"mass": 2.0, "tol_fd": 1e-5, "seed": 4}
    with pytest.raises(cli.UsageError):
        cli.parse_config_text("bogus = 1")
    with pytest.raises(cli.UsageError):
        cli.parse_config_text("mass 1")
    with pytest.raises(cli.UsageError):
        cli.parse_config_text("seed = 1.5")


def test_flags_override_config(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text("samples = 3\nmass = 2.0\n")
    args = cli.build_parser().parse_args(["verify", "--config", str(cfg_file), "--samples", "5"])
    cfg = cli.resolve_config(args)
    assert cfg.samples == 5 and cfg.mass == 2.0


def test_usage_errors_exit_2():
    assert run("verify", "--samples", "0")[0] == 2
    assert run("verify", "--grid-n", "100")[0] == 2
    assert run("verify", "--tol-exact", "1e-5", "--tol-fd", "1e-6")[0] == 2
    assert run("zbw", "--mix", "1.5")[0] == 2
    assert run("covariance", "--word", "boost:q:0.1")[0] == 2
    assert run("frobnicate")[0] == 2
    assert run()[0] == 2


def test_io_errors_exit_3(tmp_path):
    assert run("locality", "--out", str(tmp_path / "missing" / "x.csv"))[0] == 3
    assert run("verify", "--config", str(tmp_path / "nope.cfg"))[0] == 3


def test_verify_small_run_and_tight_fd():
    code, out, _ = run("verify", "--samples", "5")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("19/19")
    code, out, _ = run("verify", "--samples", "5", "--tol-fd", "1e-16")
    assert code == 1
    failing = [line.split()[0] for line in out.splitlines() if line.endswith("FAIL")]
    assert "commutators_fd" in failing and "commutators_analytic" not in failing


def test_locality_and_covariance_summaries(tmp_path):
    code, out, _ = run("locality", "--out", str(tmp_path / "loc.csv"))
    assert code == 0 and "PASS" in out
    assert (tmp_path / "loc.csv").read_text().startswith("d,branch,spin,ratio\n")
    code, out, _ = run("covariance", "--word", "boost:x:0.5,rot:y:0.3", "--samples", "10",
                       "--out", str(tmp_path / "cov.csv"))
    assert code == 0
    assert out.count("PASS") == 2


def test_zbw_physics_band_failure():
    # a coarse grid with a short window cannot resolve 2m to 5%
    code, _, err = run("zbw", "--t-max", "2", "--dt", "0.5")
    assert code == 1 and "FAIL" in err


def test_csv_to_stdout_summary_to_stderr():
    code, out, err = run("yukawa")
    assert code == 0
    assert out.startswith("x,remainder_abs,field_abs\n")
    assert "ratio to m" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fieldpos", "locality"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "max overlap ratio" in proc.stderr
