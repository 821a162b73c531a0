import json
import time

import numpy as np
import pytest

from gcca.cli import main
from gcca.data import RawMatrix, write_csv
from gcca.datasets import load_toy, toy_paths

TINY_SIM = """
[simulation]
n = 60
p = 20
q = 15
block_rows = 3
block_cols = 3
rho_lo = 0.5
rho_hi = 0.6
seed = 5
replicates = 1

[gcca]
epsilon = 0.25
max_subgraphs = 1
"""


@pytest.fixture
def toy_files():
    px, py, _ = toy_paths()
    return str(px), str(py)


def test_fit_toy_recovers_truth(tmp_path, toy_files):
    out = tmp_path / "out"
    assert main(["fit", *toy_files, "-o", str(out)]) == 0
    fit = json.loads((out / "fit.json").read_text())
    _, _, truth = load_toy()
    assert fit["i_x"] == truth["i_x"] and fit["i_y"] == truth["i_y"]
    assert (out / "lambda_scores.csv").read_text().startswith("lambda,pi0,pi1,pi,divergence")
    assert (out / "heatmap.csv").read_text().startswith("row_name,col_name,r,in_subgraph,block_id")
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "fit" and "version" in manifest and "seed" in manifest


def test_fit_emit_table(tmp_path, toy_files, capsys):
    assert main(["fit", *toy_files, "-o", str(tmp_path), "--emit", "table"]) == 0
    text = capsys.readouterr().out
    for key in ("lambda*", "|I_X|", "|I_Y|", "rho_hat"):
        assert key in text
    assert not (tmp_path / "fit.json").exists()
    assert main(["fit", *toy_files, "-o", str(tmp_path), "--emit-table"]) == 0
    assert "rho_hat" in capsys.readouterr().out


def test_row_mismatch_exit_code(tmp_path, capsys):
    rng = np.random.default_rng(0)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(a, RawMatrix(rng.normal(size=(10, 3))))
    write_csv(b, RawMatrix(rng.normal(size=(12, 3))))
    assert main(["fit", str(a), str(b), "-o", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    assert str(a) in err and str(b) in err


def test_data_and_model_exit_codes(tmp_path):
    assert main(["fit", str(tmp_path / "missing.csv"), str(tmp_path / "x.csv")]) == 2
    rng = np.random.default_rng(1)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_csv(a, RawMatrix(rng.normal(size=(300, 4))))
    write_csv(b, RawMatrix(rng.normal(size=(300, 4))))
    assert main(["fit", str(a), str(b), "--epsilon", "0.6", "-o", str(tmp_path / "o")]) == 3


def test_usage_errors(tmp_path, toy_files):
    with pytest.raises(SystemExit) as exc:
        main(["fit"])
    assert exc.value.code == 1
    assert main(["fit", *toy_files, "--epsilon", "1.5", "-o", str(tmp_path)]) == 1
    assert main(["fit", *toy_files, "--lambdas", "0.3,0.5", "-o", str(tmp_path)]) == 1
    bad = tmp_path / "bad.toml"
    bad.write_text("[gcca]\nepsilon = 0.2\nbogus = 1\n")
    assert main(["fit", *toy_files, "--config", str(bad), "-o", str(tmp_path)]) == 1


def test_flag_overrides_config(tmp_path, toy_files):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"gcca": {"epsilon": 0.3, "max_subgraphs": 2}}))
    out = tmp_path / "o"
    assert main(["fit", *toy_files, "--config", str(cfg), "--epsilon", "0.25", "-o", str(out)]) == 0
    used = json.loads((out / "manifest.json").read_text())["gcca"]
    assert used["epsilon"] == 0.25 and used["max_subgraphs"] == 2


def test_fit_does_not_touch_inputs(tmp_path, toy_files):
    before = [open(f, "rb").read() for f in toy_files]
    main(["fit", *toy_files, "-o", str(tmp_path)])
    assert [open(f, "rb").read() for f in toy_files] == before


def test_simulate_tiny_is_fast_and_reproducible(tmp_path):
    cfg = tmp_path / "sim.toml"
    cfg.write_text(TINY_SIM)
    t0 = time.perf_counter()
    assert main(["simulate", str(cfg), "-o", str(tmp_path / "a"), "--threads", "1"]) == 0
    assert time.perf_counter() - t0 < 1.0
    assert main(["simulate", str(cfg), "-o", str(tmp_path / "b"), "--threads", "2"]) == 0
    for name in ("report.json", "table2.csv", "table3.csv", "manifest.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    report = json.loads((tmp_path / "a" / "report.json").read_text())
    assert len(report["per_replicate"]) == 1
    assert report["variance"] == 0.0


def test_simulate_convergence_and_table(tmp_path, capsys):
    cfg = tmp_path / "sim.toml"
    cfg.write_text(TINY_SIM)
    out = tmp_path / "c"
    assert main(["simulate", str(cfg), "-o", str(out), "--replicates", "3",
                 "--convergence", "60,120,240", "--emit", "json,table", "--threads", "1"]) == 0
    conv = json.loads((out / "convergence.json").read_text())
    assert conv["n_values"] == [60, 120, 240] and np.isfinite(conv["slope"])
    assert "log-log slope" in capsys.readouterr().out
    assert json.loads((out / "manifest.json").read_text())["simulation"]["replicates"] == 3


def test_oracle_check(capsys):
    assert main(["oracle-check", "--instances", "30"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out


def test_oracle_check_hidden_from_help(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    assert "oracle-check" not in capsys.readouterr().out
