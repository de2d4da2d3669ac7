import json
import subprocess
import sys

import pytest

from randassign import cli
from randassign.cli import main


@pytest.fixture
def small(tmp_path):
    path = tmp_path / "a.csv"
    path.write_text("1,2\n3,5\n")
    return path


def test_solve_max(small, capsys):
    assert main(["solve", str(small)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[:4] == ["value: 6.0", "assignment: 1 2", "objective: max", "certificate: verified"]


def test_solve_min_json(small, capsys):
    assert main(["solve", str(small), "--objective", "min", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == 5.0 and doc["assignment"] == [2, 1]


def test_solve_json_input(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 1, "m": 3, "data": [4, 9, -1]}))
    assert main(["solve", str(path)]) == 0
    assert "value: 9.0" in capsys.readouterr().out


def test_greedy_compare(tmp_path, capsys):
    path = tmp_path / "g.csv"
    path.write_text("1,2\n3,5\n")
    assert main(["greedy", str(path), "--compare"]) == 0
    out = capsys.readouterr().out
    assert "greedy: 5.0" in out and "optimum: 6.0" in out and "gap: 1.0" in out


def test_bad_csv_is_input_error(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("1,x\n")
    assert main(["solve", str(path)]) == 2
    err = capsys.readouterr().err
    assert "line 1" in err and "column 2" in err


def test_missing_file_is_input_error(tmp_path):
    assert main(["solve", str(tmp_path / "nope.csv")]) == 2


def test_usage_errors_exit_one():
    with pytest.raises(SystemExit) as exc:
        main(["experiment", "warp-drive"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_failed_certificate_is_numeric(small, monkeypatch):
    monkeypatch.setattr(cli, "verify_certificate", lambda *a: False)
    assert main(["solve", str(small)]) == 3


def test_bad_parameter_is_input_error(capsys):
    assert main(["experiment", "ldp", "--seed", "1", "--side", "sideways"]) == 2
    assert main(["experiment", "cumulant", "--seed", "1", "--t", "0.9", "--trials", "10"]) == 2


def test_rate_function(capsys):
    assert main(["rate-function"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "# experiment: rate-function"
    body = [ln for ln in lines if not ln.startswith("#")]
    assert body[0] == "r,lambda_star,t_star" and len(body) == 42


def test_seed_is_generated_and_echoed(capsys):
    assert main(["experiment", "min-expectation", "--n", "2", "--trials", "50"]) == 0
    captured = capsys.readouterr()
    seed = int(captured.err.strip().split(": ")[1])
    assert f'"seed": {seed}' in captured.out


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[common]\nseed = 5\nworkers = 2\n\n[lemma2]\nn = 200\ntrials = 500\n")
    assert main(["experiment", "lemma2", "--config", str(cfg), "--trials", "300"]) == 0
    header = capsys.readouterr().out.splitlines()[1]
    config = json.loads(header.removeprefix("# config: "))
    assert config["seed"] == 5 and config["n"] == 200 and config["trials"] == 300
    assert "workers" not in config


def test_output_independent_of_workers(tmp_path):
    paths = []
    for workers in ("1", "3"):
        out = tmp_path / f"w{workers}.csv"
        assert main(["experiment", "expectation", "--seed", "11", "--schedule", "20x30",
                     "--trials", "2100", "--workers", workers, "--out", str(out)]) == 0
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_module_entry_point(small):
    proc = subprocess.run([sys.executable, "-m", "randassign", "solve", str(small)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("value: 6.0")
