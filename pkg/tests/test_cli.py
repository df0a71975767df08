"""End-to-end CLI behavior: exit codes, config diagnostics, CSV contracts."""

import json
import math
import os

import numpy as np
import pytest

from oustop import presets
from oustop.cli import (
    EXIT_CHECK_FAILED,
    EXIT_CONFIG,
    EXIT_NO_CONVERGENCE,
    EXIT_OK,
    main,
)
from oustop.model import OUModel, gamma_bound
from oustop.params import Constant
from oustop.solver import SolverConfig, backward_induction_solve, picard_solve

BASE_MODEL = {
    "theta": {"kind": "constant", "params": [1.0]},
    "alpha": {"kind": "constant", "params": [0.0]},
    "sigma": {"kind": "constant", "params": [1.0]},
    "T": 1.0,
    "lam": 1.0,
    "strike": 0.0,
}


def write_config(tmp_path, name="cfg.json", N=20, extra=None):
    cfg = {"model": dict(BASE_MODEL), "solver": {"N": N}}
    if extra:
        cfg.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(cfg, indent=2), encoding="utf-8")
    return str(path)


def base_model():
    return OUModel(Constant(1.0), Constant(0.0), Constant(1.0), T=1.0, lam=1.0, strike=0.0)


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


# -- config diagnostics --------------------------------------------------


def test_missing_config_lists_presets(capsys):
    assert main(["boundary", "--config", "nope.json"]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "no such config file or preset" in err
    assert "fig3" in err


def test_bad_json_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "model": oops\n}\n', encoding="utf-8")
    assert main(["boundary", "--config", str(path)]) == EXIT_CONFIG
    assert f"{path}:2:" in capsys.readouterr().err


def test_unknown_param_kind_reports_line(tmp_path, capsys):
    path = tmp_path / "kind.json"
    path.write_text(
        "{\n"
        '  "model": {\n'
        '    "theta": {"kind": "bogus", "params": []},\n'
        '    "alpha": {"kind": "constant", "params": [0.0]},\n'
        '    "sigma": {"kind": "constant", "params": [1.0]},\n'
        '    "T": 1.0\n'
        "  }\n"
        "}\n",
        encoding="utf-8",
    )
    assert main(["boundary", "--config", str(path)]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert f"{path}:3: bad theta" in err


def test_unknown_section_reports_line(tmp_path, capsys):
    path = tmp_path / "sect.json"
    path.write_text('{\n  "solver2": {}\n}\n', encoding="utf-8")
    assert main(["boundary", "--config", str(path)]) == EXIT_CONFIG
    assert f"{path}:2: unknown section 'solver2'" in capsys.readouterr().err


def test_missing_model_section(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text("{}\n", encoding="utf-8")
    assert main(["boundary", "--config", str(path)]) == EXIT_CONFIG
    assert "needs a 'model' object" in capsys.readouterr().err


def test_unknown_scenario_preset(capsys):
    assert main(["scenario", "bogus"]) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "unknown preset 'bogus'" in err
    assert "fig2a-bb" in err


def test_bad_thread_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("OSB_OU_THREADS", "many")
    assert main(["scenario", "fig1a", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "OSB_OU_THREADS" in capsys.readouterr().err


# -- boundary ------------------------------------------------------------


def test_boundary_csv_roundtrips_solver_output(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out = tmp_path / "o"
    assert main(["boundary", "--config", cfg, "--out", str(out)]) == EXIT_OK
    assert "converged" in capsys.readouterr().out

    report = picard_solve(base_model(), SolverConfig(N=20))
    header, rows = read_csv(out / "boundary.csv")
    assert header == ["t", "boundary", "gamma_bound", "strike"]
    assert len(rows) == 21
    nodes = report.boundary.mesh.nodes
    gb = gamma_bound(base_model(), nodes)
    for i, row in enumerate(rows):
        assert float(row[0]) == nodes[i]
        assert float(row[1]) == report.boundary.values[i]
        assert float(row[2]) == gb[i]
        assert float(row[3]) == 0.0

    eheader, erows = read_csv(out / "errors.csv")
    assert eheader == ["k", "d_k", "log10_d_k"]
    assert len(erows) == report.iterations
    assert [int(r[0]) for r in erows] == list(range(1, report.iterations + 1))
    for r, d in zip(erows, report.errors):
        assert float(r[1]) == d
        assert float(r[2]) == math.log10(d)


def test_boundary_nonconvergence_exit_code(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "o"
    rc = main(["boundary", "--config", cfg, "--out", str(out),
               "--max-iter", "2", "--delta", "1e-30"])
    assert rc == EXIT_NO_CONVERGENCE
    # outputs still land for diagnosis
    _, erows = read_csv(out / "errors.csv")
    assert len(erows) == 2


def test_backward_solver_writes_no_error_sequence(tmp_path):
    cfg = write_config(tmp_path, N=30)
    out = tmp_path / "o"
    assert main(["boundary", "--config", cfg, "--solver", "backward",
                 "--out", str(out)]) == EXIT_OK
    report = backward_induction_solve(base_model(), SolverConfig(N=30))
    header, rows = read_csv(out / "boundary.csv")
    for i, row in enumerate(rows):
        assert float(row[1]) == report.boundary.values[i]
    _, erows = read_csv(out / "errors.csv")
    assert erows == []


def test_dump_config_reruns_identically(tmp_path, capsys):
    assert main(["boundary", "--config", "fig3", "--N", "15", "--dump-config"]) == EXIT_OK
    dumped = capsys.readouterr().out
    resolved = json.loads(dumped)
    assert resolved["solver"]["N"] == 15
    path = tmp_path / "resolved.json"
    path.write_text(dumped, encoding="utf-8")

    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["boundary", "--config", "fig3", "--N", "15", "--out", str(out_a)]) == EXIT_OK
    assert main(["boundary", "--config", str(path), "--out", str(out_b)]) == EXIT_OK
    assert (out_a / "boundary.csv").read_bytes() == (out_b / "boundary.csv").read_bytes()
    assert (out_a / "errors.csv").read_bytes() == (out_b / "errors.csv").read_bytes()


def test_outputs_key_used_when_no_flag(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = write_config(tmp_path, extra={"outputs": "from_config"})
    assert main(["boundary", "--config", cfg]) == EXIT_OK
    assert (tmp_path / "from_config" / "boundary.csv").exists()


def test_outputs_key_must_be_string(tmp_path, capsys):
    cfg = write_config(tmp_path, extra={"outputs": 7})
    assert main(["boundary", "--config", cfg, ]) == EXIT_CONFIG
    assert "'outputs' must be a string" in capsys.readouterr().err


# -- value ---------------------------------------------------------------


def test_value_grid_and_expiry_rows(tmp_path):
    cfg = write_config(
        tmp_path, extra={"grid": {"t": [0.0, 1.0], "x": [-0.5, 0.0, 0.5]}}
    )
    out = tmp_path / "o"
    assert main(["value", "--config", cfg, "--out", str(out)]) == EXIT_OK
    header, rows = read_csv(out / "value.csv")
    assert header == ["t", "x", "value", "european", "premium", "gain",
                      "in_stopping_region"]
    assert len(rows) == 6
    assert {r[6] for r in rows} <= {"true", "false"}
    for row in rows:
        if float(row[0]) == 1.0:
            # at expiry the value is the gain and the premium sum is empty
            assert float(row[2]) == float(row[5])
            assert float(row[4]) == 0.0
    by_x = {float(r[1]): float(r[2]) for r in rows if float(r[0]) == 0.0}
    assert by_x[-0.5] > by_x[0.0] > by_x[0.5]


def test_value_rejects_bad_grid(tmp_path, capsys):
    cfg = write_config(tmp_path, extra={"grid": {"t": [2.0]}})
    assert main(["value", "--config", cfg, "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert "outside" in capsys.readouterr().err

    cfg2 = write_config(tmp_path, name="cfg2.json", extra={"grid": {"x": ["a"]}})
    assert main(["value", "--config", cfg2, "--out", str(tmp_path / "o")]) == EXIT_CONFIG
    assert "list of finite numbers" in capsys.readouterr().err


# -- mc-check ------------------------------------------------------------


def test_mc_check_passes_and_writes_table(tmp_path, capsys):
    cfg = write_config(tmp_path)
    out = tmp_path / "o"
    rc = main(["mc-check", "--config", cfg, "--out", str(out),
               "--N", "60", "--paths", "4000", "--steps", "100"])
    stdout = capsys.readouterr().out
    assert rc == EXIT_OK
    assert stdout.count("[PASS]") == 12
    assert "12/12 comparisons passed" in stdout

    header, rows = read_csv(out / "mc.csv")
    assert header == ["t", "x", "method", "estimate", "stderr"]
    assert len(rows) == 15  # 3 points x 5 methods
    methods = {r[2] for r in rows}
    assert methods == {"value", "strategy_mc", "lsmc", "european", "european_mc"}
    for row in rows:
        # closed-form rows carry no stderr
        assert (row[4] == "") == (row[2] in ("value", "european"))


def test_mc_check_detects_perturbed_boundary(tmp_path, capsys):
    cfg = write_config(tmp_path)
    rc = main(["mc-check", "--config", cfg, "--out", str(tmp_path / "o"),
               "--N", "60", "--paths", "4000", "--steps", "100",
               "--perturb", "0.5"])
    stdout = capsys.readouterr().out
    assert rc == EXIT_CHECK_FAILED
    assert "shifted by +0.5" in stdout
    assert "[FAIL]" in stdout


def test_mc_check_requires_convergence(tmp_path, capsys):
    cfg = write_config(tmp_path)
    rc = main(["mc-check", "--config", cfg, "--out", str(tmp_path / "o"),
               "--max-iter", "1", "--delta", "1e-30", "--paths", "100"])
    assert rc == EXIT_NO_CONVERGENCE
    assert "not running MC" in capsys.readouterr().err


# -- scenario ------------------------------------------------------------


def test_scenario_writes_manifest_and_member_files(tmp_path):
    out = tmp_path / "o"
    assert main(["scenario", "fig2a-bb", "--out", str(out), "--N", "60"]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["schema"] == 1
    assert manifest["preset"] == "fig2a-bb"
    assert manifest["strike"] == 0.0
    (panel,) = manifest["panels"]
    assert len(panel["members"]) == 4
    for member in panel["members"]:
        for key in ("boundary_csv", "errors_csv", "alpha_csv"):
            assert (out / member[key]).exists(), member[key]
        aheader, arows = read_csv(out / member["alpha_csv"])
        assert aheader == ["t", "alpha"]
        assert len(arows) == 401

    assert panel["reference_csv"] == "fig2a_bb_reference.csv"
    rheader, rrows = read_csv(out / panel["reference_csv"])
    assert rheader == ["t", "boundary"]
    assert len(rrows) == 401
    assert float(rrows[0][1]) == pytest.approx(-presets.BB_COEFFICIENT, abs=1e-12)
    assert float(rrows[-1][1]) == pytest.approx(0.0, abs=1e-12)


def test_scenario_parallel_matches_serial(tmp_path, monkeypatch):
    serial, parallel = tmp_path / "s", tmp_path / "p"
    monkeypatch.setenv("OSB_OU_THREADS", "1")
    assert main(["scenario", "fig2b-oub", "--out", str(serial), "--N", "40"]) == EXIT_OK
    monkeypatch.setenv("OSB_OU_THREADS", "2")
    assert main(["scenario", "fig2b-oub", "--out", str(parallel), "--N", "40"]) == EXIT_OK
    names = sorted(os.listdir(serial))
    assert names == sorted(os.listdir(parallel))
    for name in names:
        assert (serial / name).read_bytes() == (parallel / name).read_bytes(), name


def test_scenario_nonconvergence_exit(tmp_path, capsys):
    out = tmp_path / "o"
    rc = main(["scenario", "fig1a", "--out", str(out), "--N", "20",
               "--max-iter", "1", "--delta", "1e-30"])
    assert rc == EXIT_NO_CONVERGENCE
    assert "NOT CONVERGED" in capsys.readouterr().err
    # members are still written for inspection
    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert len(manifest["panels"][0]["members"]) == 3
