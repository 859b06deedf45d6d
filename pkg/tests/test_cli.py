import json
import subprocess
import sys

import pytest

from maxfield import cli
from maxfield.validate import CheckResult

SIM = ["simulate", "--shape", "gaussian", "--sigma", "1", "--dim", "1", "--R", "1",
       "--h", "0.1", "--method", "normalized", "--seed", "42"]


def test_simulate_writes_field_and_sidecar(tmp_path):
    out = tmp_path / "f"
    assert cli.main(SIM + ["--out", str(out)]) == 0
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "y1,z" and len(lines) == 22
    assert lines[1].startswith("-1.0,") and lines[-1].startswith("1.0,")
    meta = json.loads((tmp_path / "f.json").read_text())
    assert meta["schema"] == cli.SIM_SCHEMA
    assert meta["seed"] == 42 and meta["m"] >= 1 and meta["inf"] <= meta["sup"]
    assert meta["config"]["h"] == 0.1


def test_simulate_is_byte_identical(tmp_path):
    for name in ("a", "b"):
        assert cli.main(SIM + ["--dim", "2", "--h", "0.25", "--out", str(tmp_path / name)]) == 0
    for ext in ("csv", "json"):
        a = (tmp_path / f"a.{ext}").read_bytes()
        b = (tmp_path / f"b.{ext}").read_bytes().replace(b"/b", b"/a")
        assert a == b
    assert (tmp_path / "a.csv").read_text().splitlines()[0] == "y1,y2,z"


@pytest.mark.parametrize("method,extra", [
    ("schlather", ["--k", "3"]),
    ("transformed", ["--shape", "indicator", "--scaling", "raw", "--weight", "uniform:3"]),
])
def test_simulate_other_methods(tmp_path, method, extra):
    argv = SIM[:-4] + ["--method", method, "--seed", "1"] + extra + ["--out", str(tmp_path / "x")]
    assert cli.main(argv) == 0
    assert json.loads((tmp_path / "x.json").read_text())["method"] == method


def test_config_errors_exit_2(tmp_path, capsys):
    assert cli.main(["simulate", "--h", "0.3", "--R", "1", "--out", str(tmp_path / "x")]) == 2
    assert "grid_step must divide 2R" in capsys.readouterr().err
    assert cli.main(["simulate", "--weight", "beta", "--method", "transformed",
                     "--out", str(tmp_path / "x")]) == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["simulate", "--shape", "cone"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["experiment", "table1", "--N", "10"])
    assert info.value.code == 2
    assert "--seed" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        cli.main(["validate"])
    assert info.value.code == 2
    assert cli.main(["experiment", "custom", "--N", "0", "--seed", "1",
                     "--out", str(tmp_path / "e")]) == 2


def test_budget_exhausted_exit_3(tmp_path):
    assert cli.main(["simulate", "--R", "5", "--budget", "1", "--seed", "1",
                     "--out", str(tmp_path / "x")]) == 3


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# model\ndim = 2\nh = 0.25\nmethod = schlather\nk = 3\nseed = 9\n")
    out = tmp_path / "x"
    assert cli.main(["--config", str(cfg), "simulate", "--k", "2", "--out", str(out)]) == 0
    conf = json.loads((tmp_path / "x.json").read_text())["config"]
    assert conf["dim"] == 2 and conf["method"] == "schlather" and conf["seed"] == 9
    assert conf["k"] == 2.0
    bad = tmp_path / "bad.cfg"
    bad.write_text("just words\n")
    assert cli.main(["--config", str(bad), "simulate"]) == 2


def test_experiment_config_file_lists(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("R = 1 2\nN = 60\nseed = 4\ncompare_paper = true\n")
    out = tmp_path / "r"
    assert cli.main(["--config", str(cfg), "experiment", "table1", "--out", str(out)]) == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert rep["config"]["R"] == [1.0, 2.0] and rep["config"]["seed"] == 4
    assert rep["rows"][0]["paper_Q"] == 3.12


def test_experiment_threads_identical(tmp_path, monkeypatch):
    base = ["experiment", "table2", "--N", "250", "--R", "1", "--seed", "7"]
    assert cli.main(base + ["--threads", "1", "--out", str(tmp_path / "t1")]) == 0
    monkeypatch.setenv("MAXFIELD_THREADS", "8")
    assert cli.main(base + ["--out", str(tmp_path / "t8")]) == 0
    a = json.loads((tmp_path / "t1.json").read_text())
    b = json.loads((tmp_path / "t8.json").read_text())
    assert b["config"]["threads"] == 8
    a["config"].pop("threads"), b["config"].pop("threads")
    assert a == b
    assert (tmp_path / "t1.csv").read_text() == (tmp_path / "t8.csv").read_text()
    assert a["rows"][0]["by_k"][0]["paper"] is None


def test_validate_exit_codes(tmp_path, monkeypatch):
    out = tmp_path / "v.json"
    assert cli.main(["validate", "--seed", "42", "--N", "1000", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["schema"] == "maxfield.validate/1" and rep["passed"]
    assert {c["name"] for c in rep["checks"]} >= {"frechet_margins", "per_replication_identity"}

    monkeypatch.setattr(cli, "run_suite",
                        lambda *a, **k: [CheckResult("always_fails", False, {"why": "test"})])
    assert cli.main(["validate", "--seed", "1", "--out", str(out)]) == 1
    assert json.loads(out.read_text())["passed"] is False


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "maxfield.cli", "simulate", "--seed", "3",
                           "--out", str(tmp_path / "m")], capture_output=True, text=True)
    assert proc.returncode == 0 and (tmp_path / "m.csv").exists()
    proc = subprocess.run([sys.executable, "-m", "maxfield.cli", "simulate", "--h", "0.3",
                           "--out", str(tmp_path / "m")], capture_output=True, text=True)
    assert proc.returncode == 2
