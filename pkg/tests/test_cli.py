from __future__ import annotations

import csv
import json
import os

import pytest

from gl3moment.cli import EXIT_FALSIFIED, EXIT_OK, EXIT_USAGE, run


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_unknown_subcommand_prints_schema(capsys):
    assert run(["frobnicate"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "usage:" in err and "kloosterman" in err


def test_bad_flag_value(capsys, tmp_path):
    assert run(["identity", "--dmax", "many", "--out", str(tmp_path)]) == EXIT_USAGE
    assert "--dmax" in capsys.readouterr().err


def test_bad_config_is_usage_error(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text('{"no_such_key": 1}')
    assert run(["sigma-audit", "--config", str(p), "--out", str(tmp_path)]) == EXIT_USAGE
    assert "no_such_key" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0


def test_kloosterman_csv_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["kloosterman", "--dmax", "4", "--fmax", "1", "--out", str(d)]) == EXIT_OK
    assert (a / "kloosterman.csv").read_bytes() == (b / "kloosterman.csv").read_bytes()
    rows = _read_csv(a / "kloosterman.csv")
    assert rows[0] == ["m1", "m2", "n1", "n2", "D1", "D2", "N", "re", "im", "bound", "margin"]
    assert len(rows) == 1 + 16 * 16
    assert "exceedances" in capsys.readouterr().out


def test_kloosterman_falsified_with_tiny_constant(tmp_path):
    assert run(["kloosterman", "--dmax", "3", "--fmax", "1", "--constant", "0.01", "--out", str(tmp_path)]) == EXIT_FALSIFIED


def test_identity_small(tmp_path):
    assert run(["identity", "--dmax", "6", "--fmax", "1", "--qs", "3,5", "--twist-dmax", "4", "--out", str(tmp_path)]) == EXIT_OK
    doc = json.loads((tmp_path / "identity.json").read_text())
    assert doc["schema_version"] == "1.0"
    assert doc["factorization"]["failures"] == 0 and doc["prime_twist"]["failures"] == 0
    assert _read_csv(tmp_path / "identity_prime_twist.csv")[0] == ["q", "D1", "D2", "cases", "max_rel_err"]


@pytest.mark.slow
def test_identity_dmax_20(tmp_path):
    assert run(["identity", "--dmax", "20", "--out", str(tmp_path)]) == EXIT_OK


def test_env_overrides(tmp_path, monkeypatch):
    monkeypatch.setenv("GL3MOMENT_OUT", str(tmp_path / "envout"))
    monkeypatch.setenv("GL3MOMENT_AUDIT_Q", "1000")
    assert run(["sigma-audit"]) == EXIT_OK
    doc = json.loads((tmp_path / "envout" / "sigma_audit.json").read_text())
    assert doc["sigma45_audit"]["audit"]["q"] == 1000


def test_sigma_audit_falsified_control(tmp_path, monkeypatch):
    # a control at the paper cutoffs flags nothing, so the audit reports falsification
    monkeypatch.setenv("GL3MOMENT_CONTROL_M_EXP", "1.5")
    assert run(["sigma-audit", "--out", str(tmp_path)]) == EXIT_FALSIFIED


def test_ini_config(tmp_path):
    p = tmp_path / "c.ini"
    p.write_text("audit_q = 2000\n")
    assert run(["sigma-audit", "--config", str(p), "--out", str(tmp_path)]) == EXIT_OK
    doc = json.loads((tmp_path / "sigma_audit.json").read_text())
    assert doc["sigma45_audit"]["audit"]["q"] == 2000


def test_wilton_small(tmp_path):
    args = ["wilton", "--xmin", "1000", "--xmax", "4000", "--points", "3", "--alphas", "50", "--out", str(tmp_path)]
    assert run(args) in (EXIT_OK, EXIT_FALSIFIED)
    doc = json.loads((tmp_path / "wilton.json").read_text())
    assert "exponent" in json.dumps(doc)


@pytest.mark.parametrize("name", ["kloosterman", "identity", "sigma-audit", "wilton", "weights"])
def test_selftests(name, capsys):
    assert run([name, "--selftest"]) == EXIT_OK
    assert "PASS" in capsys.readouterr().out
