import json
import math

import pytest

from hs2.cli import EXIT_CHECK, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, dumps, run_cli
from hs2.special import mu_s

BASE = ["--N", "3", "--s", "1", "--alpha", "2", "--beta", "2"]


def _run(capsys, argv):
    code = run_cli(argv)
    return code, capsys.readouterr().out


def test_classify_example(capsys):
    code, out = _run(capsys, ["classify", *BASE, "--lambda", "2", "--mu", "1", "--kappa", "1"])
    data = json.loads(out)
    assert code == EXIT_OK and data["case"] == "II.2" and data["iota"] == 0.5
    assert data["minimizers"][0]["degenerate"] and "g2" in data["minimizers"][0]


def test_best_constant_nonpositive_kappa(capsys):
    code, out = _run(capsys, ["best-constant", *BASE, "--lambda", "1", "--mu", "1", "--kappa", "-0.5"])
    data = json.loads(out)
    assert code == EXIT_OK
    assert abs(data["best_constant"] - mu_s(3, 1)) < 1e-12


def test_sweep_csv_example(capsys):
    code, out = _run(capsys, ["stability-sweep", "--case", "II.1", "--format", "csv",
                              "--no-spot-check"])
    assert code == EXIT_OK
    header = dict(line[2:].split("=", 1) for line in out.splitlines() if line.startswith("# "))
    assert abs(float(header["slope_deficit"]) - 4) < 0.05
    assert abs(float(header["slope_distance"]) - 2) < 0.05
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert rows[0] == "epsilon,deficit,distance" and len(rows) == 13


def test_domain_error_exit(capsys):
    code = run_cli(["classify", "--N", "3", "--s", "1", "--alpha", "2", "--beta", "3",
                    "--lambda", "1", "--mu", "1", "--kappa", "1"])
    assert code == EXIT_DOMAIN
    assert "alpha + beta" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [[], ["no-such-command"], ["classify", "--N", "three"],
                                  ["best-constant", "--bogus", "1"]])
def test_usage_errors(capsys, argv):
    assert run_cli(argv) == EXIT_USAGE


def test_config_file_and_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# instance\nN = 3\ns=1\nalpha=2\nbeta=2\nlambda=2\nmu=1\nkappa=1\n")
    code, out = _run(capsys, ["classify", "--config", str(cfg)])
    assert code == EXIT_OK and json.loads(out)["case"] == "II.2"
    code, out = _run(capsys, ["classify", "--config", str(cfg), "--lambda", "1", "--mu", "2"])
    assert code == EXIT_OK and json.loads(out)["case"] == "II.3"


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("N=3\ncolour=blue\n")
    assert run_cli(["classify", "--config", str(cfg)]) == EXIT_USAGE


def test_output_is_deterministic(capsys):
    argv = ["ineq-test", "--case", "L2_BOTH_LT2", "--alpha", "1.4", "--beta", "1.6",
            "--samples", "5000", "--seed", "7"]
    first = _run(capsys, argv)
    second = _run(capsys, argv)
    assert first == second and first[0] == EXIT_OK
    other = _run(capsys, argv[:-1] + ["8"])
    assert other[1] != first[1]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out = _run(capsys, ["best-constant", *BASE, "--lambda", "1", "--mu", "1", "--kappa", "1",
                              "--output", str(target)])
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text())["best_constant"] > 0


def test_minimize_and_deficit(capsys):
    code, out = _run(capsys, ["minimize-g", *BASE, "--lambda", "1", "--mu", "1", "--kappa", "1"])
    ts = [m["t"] for m in json.loads(out)["minimizers"]]
    assert code == EXIT_OK and abs(ts[0] - 1) < 1e-10
    code, out = _run(capsys, ["deficit", *BASE, "--lambda", "1", "--mu", "1", "--kappa", "1",
                              "--distance"])
    data = json.loads(out)
    assert code == EXIT_OK and abs(data["deficit"]) < 1e-7 and data["distance"]["distance"] < 1e-7


def test_transform_check_extremal(capsys):
    code, out = _run(capsys, ["transform-check", *BASE, "--lambda", "1", "--mu", "1",
                              "--kappa", "1", "--ell", "0.5", "--extremal"])
    assert code == EXIT_OK and abs(json.loads(out)["delta_ell"]) < 1e-7


def test_ineq_violation_exit_code_is_reserved():
    assert EXIT_CHECK == 3


def test_dumps_formatting():
    text = dumps({"b": 1.0, "a": [0.1, math.inf, -math.inf, math.nan], "c": "x", "d": 2})
    assert text.index('"a"') < text.index('"b"')
    assert '"b": 1.0' in text and '"inf"' in text and '"-inf"' in text and '"nan"' in text
    assert "0.10000000000000001" in text
