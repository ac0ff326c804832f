import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from meannorm import cli
from meannorm.cli import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, SWEEP_HEADER, main, parse_config
from meannorm.matrices import hilbert_matrix, m_alpha_matrix, mv_skew_matrix, parse_csv, SpacedSequence


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_norm_cesaro(capsys):
    code, out, _ = run(capsys, "norm", "--family", "cesaro", "--n", "256", "--p", "2", "--json")
    d = json.loads(out)
    assert code == EXIT_OK
    assert d["value"] < 2 and d["ratio"] < 1 and d["analytic_bound"] == 2.0


def test_norm_hilbert(capsys):
    code, out, _ = run(capsys, "norm", "--family", "hilbert", "--n", "64", "--json")
    assert code == EXIT_OK and json.loads(out)["value"] < math.pi


def test_norm_m_alpha(capsys):
    code, out, _ = run(capsys, "norm", "--family", "m_alpha", "--alpha", "1.5", "--n", "128", "--json")
    d = json.loads(out)
    assert code == EXIT_OK and d["value"] <= 2.25 and d["analytic_bound"] == 2.25


def test_norm_text_output(capsys):
    code, out, _ = run(capsys, "norm", "--family", "cesaro", "--n", "16")
    assert code == EXIT_OK and "ratio:" in out


def test_norm_p_general(capsys):
    code, out, _ = run(capsys, "norm", "--family", "bennett7", "--alpha", "1", "--p", "3", "--n", "64", "--json")
    d = json.loads(out)
    assert code == EXIT_OK and d["value"] < 1.5 and d["analytic_bound"] == pytest.approx(1.5)


def test_violation_exits_one(capsys, monkeypatch):
    monkeypatch.setattr(cli, "analytic_bound", lambda problem: (1.0, True))
    code, _, _ = run(capsys, "norm", "--family", "cesaro", "--n", "32")
    assert code == EXIT_VIOLATION


def test_unasserted_bound_never_violates(capsys, monkeypatch):
    monkeypatch.setattr(cli, "analytic_bound", lambda problem: (1.0, False))
    assert run(capsys, "norm", "--family", "cesaro", "--n", "32")[0] == EXIT_OK


@pytest.mark.parametrize("argv", [
    ["norm", "--family", "nope"],
    ["norm", "--family", "cesaro", "--n", "0"],
    ["norm", "--family", "cesaro", "--n", "8193"],
    ["norm", "--family", "cesaro", "--p", "1"],
    ["norm", "--family", "m_alpha", "--alpha", "0.5"],
    ["norm", "--family", "m_alpha", "--alpha", "1", "--p", "3"],
    ["norm", "--family", "bennett7", "--alpha", "0.4", "--p", "2"],
    ["norm", "--family", "mv_skew", "--alpha", "0.5"],
    ["norm", "--family", "kernel_r", "--alpha", "0.5"],
    ["norm", "--family", "kernel_r", "--alpha", "0.75", "--r", "0.5"],
    ["norm", "--family", "cesaro", "--tol", "-1"],
    ["cert", "--family", "m_alpha", "--alpha", "0.5"],
    ["verify", "--suite", "nonexistent"],
    [],
    ["bogus"],
])
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_cert_examples(capsys):
    code, out, _ = run(capsys, "cert", "--family", "hardy", "--n", "100", "--json")
    hardy = json.loads(out)
    assert code == EXIT_OK and hardy["analytic_bound"] == pytest.approx(3.8) and hardy["violated"] is False
    _, out, _ = run(capsys, "cert", "--family", "m_alpha", "--alpha", "1", "--n", "100", "--json")
    m1 = json.loads(out)
    assert {k: v for k, v in m1.items() if k != "family"} == {k: v for k, v in hardy.items() if k != "family"}
    code, out, _ = run(capsys, "cert", "--family", "m_alpha", "--alpha", "0.75", "--n", "256", "--json")
    d = json.loads(out)
    assert code == EXIT_OK and d["bound"] == 9.0 and d["violated"] is False


def test_verify_examples(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "check_scalar_14", "--seed", "7")
    assert code == EXIT_OK and "INFO" in out
    code, out, err = run(capsys, "verify", "--suite", "check_gamma_le_m,check_hilbert", "--json")
    assert code == EXIT_OK
    suites = {r["suite"].split("[")[0] for r in json.loads(out)}
    assert suites == {"check_gamma_le_m", "check_hilbert"}
    assert "PASS" in err


def test_verify_all_seed_42(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all", "--seed", "42", "--json")
    assert code == EXIT_OK
    again = run(capsys, "verify", "--suite", "all", "--seed", "42", "--json", "--jobs", "2")[1]
    assert out == again


def test_verify_failure_exits_one(capsys, monkeypatch):
    from meannorm import verify
    bad = verify.CheckReport("forced", False, -1.0, "w", 1, 0.0)
    monkeypatch.setitem(verify.SUITES, "check_hilbert", lambda seed: [bad])
    assert run(capsys, "verify", "--suite", "check_hilbert")[0] == EXIT_VIOLATION


def test_dump_examples(capsys):
    code, out, _ = run(capsys, "dump", "--family", "hilbert", "--n", "2")
    assert code == EXIT_OK
    assert out == "0.5,0.33333333333333331\n0.33333333333333331,0.25\n"
    _, out, _ = run(capsys, "dump", "--family", "m_alpha", "--alpha", "1", "--n", "3")
    expected = 1.0 / np.maximum.outer(np.arange(1, 4), np.arange(1, 4))
    assert np.array_equal(parse_csv(out), expected)
    _, out, _ = run(capsys, "dump", "--family", "mv_skew", "--alpha", "2", "--n", "4")
    m = parse_csv(out)
    assert np.array_equal(m, -m.T) and np.all(np.diag(m) == 0)
    assert np.array_equal(m, mv_skew_matrix(SpacedSequence.integers(4), 2.0))


@pytest.mark.parametrize("argv,matrix", [
    (["--family", "hilbert", "--n", "17"], lambda: hilbert_matrix(17)),
    (["--family", "m_alpha", "--alpha", "0.7", "--n", "23"], lambda: m_alpha_matrix(0.7, 23)),
])
def test_dump_round_trip_bit_exact(capsys, tmp_path, argv, matrix):
    out = tmp_path / "m.csv"
    assert run(capsys, "dump", *argv, "--out", str(out))[0] == EXIT_OK
    assert np.array_equal(parse_csv(out.read_text()), matrix())


def test_lambda_file(capsys, tmp_path):
    f = tmp_path / "lam.txt"
    f.write_text("# powers of two\n1\n2\n4\n8\n16\n")
    code, out, _ = run(capsys, "norm", "--family", "mv_skew", "--alpha", "1", "--lambda-file", str(f), "--json")
    d = json.loads(out)
    assert code == EXIT_OK and d["N"] == 5 and d["analytic_bound"] == pytest.approx(math.pi)
    f.write_text("1\nx\n")
    assert run(capsys, "norm", "--family", "mv_skew", "--lambda-file", str(f))[0] == EXIT_USAGE


def sweep_m_alpha(capsys, tmp_path, *extra):
    out = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--family", "m_alpha", "--alpha-min", "0.6", "--alpha-max", "1.5",
                     "--alpha-step", "0.1", "--n", "64,256", "--out", str(out), *extra)
    return code, out.read_text()


def test_sweep_m_alpha(capsys, tmp_path):
    code, text = sweep_m_alpha(capsys, tmp_path)
    assert code == EXIT_OK
    lines = text.splitlines()
    assert lines[0] == SWEEP_HEADER
    rows = [ln.split(",") for ln in lines[1:]]
    assert len(rows) == 20
    keys = [(float(r[1]), int(r[2])) for r in rows]
    assert keys == sorted(keys)
    assert [k[0] for k in keys[::2]] == [0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4, 1.5]
    assert all(float(r[6]) <= 1.0 for r in rows)


def test_sweep_deterministic_across_jobs(capsys, tmp_path):
    _, a = sweep_m_alpha(capsys, tmp_path, "--jobs", "1")
    _, b = sweep_m_alpha(capsys, tmp_path, "--jobs", "4")
    assert a == b


def test_sweep_bennett8_open_range(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "bennett8", "--alpha-min", "1.1", "--alpha-max", "1.9",
                       "--alpha-step", "0.1", "--n", "256", "--p", "2")
    assert code == EXIT_OK
    assert len(out.splitlines()) == 10


def test_sweep_config_file(capsys, tmp_path):
    conf = tmp_path / "sweep.conf"
    conf.write_text("# grid\nfamily = cesaro\nn = 8, 4\nalpha_min = 1\n")
    code, out, _ = run(capsys, "sweep", "--config", str(conf))
    assert code == EXIT_OK
    assert [ln.split(",")[2] for ln in out.splitlines()[1:]] == ["4", "8"]
    # flags override the file
    _, out, _ = run(capsys, "sweep", "--config", str(conf), "--n", "2")
    assert len(out.splitlines()) == 2


def test_parse_config_errors():
    assert parse_config("p = 3 # comment\n\n") == {"p": 3.0}
    for bad in ("nonsense", "colour = red", "p = abc"):
        with pytest.raises(cli.UsageError):
            parse_config(bad)


@pytest.mark.parametrize("extra", [["--n", ""], ["--n", "4", "--alpha-step", "0"],
                                   ["--n", "9000"], ["--n", "4", "--jobs", "0"]])
def test_sweep_validation(capsys, extra):
    assert run(capsys, "sweep", "--family", "cesaro", *extra)[0] == EXIT_USAGE


def test_jobs_env(monkeypatch, capsys):
    monkeypatch.setenv("MEANNORM_JOBS", "3")
    assert cli._default_jobs() == 3
    monkeypatch.setenv("MEANNORM_JOBS", "zero")
    assert run(capsys, "sweep", "--family", "cesaro", "--n", "4")[0] == EXIT_USAGE
    monkeypatch.delenv("MEANNORM_JOBS")
    assert cli._default_jobs() == 1


def test_atomic_write_abort_leaves_no_partial(tmp_path, monkeypatch):
    target = tmp_path / "out.csv"
    target.write_text("old\n")

    def boom(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(cli.os, "replace", boom)
    with pytest.raises(OSError):
        cli.atomic_write(str(target), "new\n")
    assert target.read_text() == "old\n"
    assert os.listdir(tmp_path) == ["out.csv"]


def test_sweep_failure_removes_partial(capsys, tmp_path, monkeypatch):
    target = tmp_path / "sweep.csv"

    def boom(*a, **k):
        raise cli.UsageError("aborted")

    monkeypatch.setattr(cli, "sweep_rows", boom)
    code = main(["sweep", "--family", "cesaro", "--n", "4", "--out", str(target)])
    assert code == EXIT_USAGE and not target.exists() and os.listdir(tmp_path) == []


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "meannorm", "dump", "--family", "hilbert", "--n", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "0.5\n"
