"""End-to-end CLI tests: every subcommand, exit codes, determinism."""

import json

import numpy as np
import pytest

from minphase import fileio
from minphase.cli import main
from minphase.signals import TimeGrid, rho0, sigma0, sigma1, translate

GRID = TimeGrid(1.0 / 256.0, 256 * 40 + 1)


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    fileio.write_signal_csv(d / "rho0.csv", rho0(GRID))
    fileio.write_signal_csv(d / "t1rho0.csv", translate(rho0(GRID), 1.0))
    fileio.write_signal_csv(d / "s0.csv", sigma0(GRID))
    fileio.write_signal_csv(d / "s1.csv", sigma1(GRID))
    fileio.write_signal_csv(d / "t05s0.csv", translate(sigma0(GRID), 0.5))
    fileio.write_signal_csv(d / "t05s1.csv", translate(sigma1(GRID), 0.5))
    return d


def test_classify_minimum_phase(workdir):
    out = workdir / "c1.json"
    assert main(["classify", str(workdir / "rho0.csv"), "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["class"] == "minimum_phase"
    assert payload["tau"] == 0.0


def test_classify_translated(workdir):
    out = workdir / "c2.json"
    assert main(["classify", str(workdir / "t1rho0.csv"), "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["class"] == "translated_minimum_phase"
    assert abs(payload["tau"] - 1.0) < 1e-2


def test_classify_empty_file_exits_2(workdir):
    empty = workdir / "empty.csv"
    empty.write_text("")
    assert main(["classify", str(empty)]) == 2


def test_factor_writes_components(workdir):
    out = workdir / "fact.json"
    assert main(["factor", str(workdir / "t1rho0.csv"), "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert abs(payload["tau"] - 1.0) < 1e-2
    assert payload["inner_modulus_deviation"] < 1e-6
    outer = fileio.read_boundary_csv(payload["outer_csv_path"])
    assert outer.grid.kind == "circle"
    assert np.max(np.abs(outer.values - 1.0)) < 1e-3  # H(T1 rho0) is pure inner


def test_identify_apply_pipeline(workdir):
    op_json = workdir / "op.json"
    code = main(["identify", str(workdir / "t05s0.csv"), str(workdir / "t05s1.csv"),
                 "--probe-set", "sigma", "--out", str(op_json)])
    assert code == 0
    payload = json.loads(op_json.read_text())
    assert abs(payload["epsilon"] - 0.5) < 1e-2

    out_csv = workdir / "applied.csv"
    assert main(["apply", str(op_json), str(workdir / "rho0.csv"),
                 "--out", str(out_csv)]) == 0
    got = fileio.read_signal_csv(out_csv)
    want = translate(rho0(GRID), 0.5)
    assert np.linalg.norm(got.values - want.values) / want.norm < 1e-3


def test_identify_plain_mode_flags_delay(workdir):
    code = main(["identify", str(workdir / "t05s0.csv"), str(workdir / "t05s1.csv"),
                 "--probe-set", "sigma", "--mode", "plain",
                 "--out", str(workdir / "opp.json")])
    assert code == 1  # math-level failure: delay found in plain mode


def test_identify_usage_error():
    assert main(["identify", "only_one.csv", "--probe-set", "sigma"]) == 2


def test_apply_corrupt_json(workdir):
    bad = workdir / "bad.json"
    bad.write_text("{not json")
    assert main(["apply", str(bad), str(workdir / "rho0.csv")]) == 2


def test_synth_and_apply(workdir):
    spec = workdir / "spec.json"
    spec.write_text(json.dumps({
        "psi": {"kind": "exp_singular", "domain": "disk", "tau": 0.5},
        "phi": {"kind": "mobius", "domain": "disk",
                "coeffs": [[1, 0], [0, 0], [0, 0], [1, 0]]},
    }))
    op_json = workdir / "synth_op.json"
    assert main(["synth", str(spec), "--out", str(op_json)]) == 0
    out_csv = workdir / "synth_applied.csv"
    assert main(["apply", str(op_json), str(workdir / "rho0.csv"),
                 "--out", str(out_csv)]) == 0
    got = fileio.read_signal_csv(out_csv)
    want = translate(rho0(GRID), 0.5)
    assert np.linalg.norm(got.values - want.values) / want.norm < 1e-3


def test_synth_invalid_self_map(workdir):
    spec = workdir / "badspec.json"
    spec.write_text(json.dumps({
        "psi": {"kind": "rational", "domain": "disk",
                "num": [[1, 0]], "den": [[1, 0]]},
        "phi": {"kind": "mobius", "domain": "disk",
                "coeffs": [[2, 0], [0, 0], [0, 0], [1, 0]]},
    }))
    assert main(["synth", str(spec), "--out", str(workdir / "bad_op.json")]) == 1


def test_synth_missing_keys(workdir):
    spec = workdir / "incomplete.json"
    spec.write_text(json.dumps({"psi": {"kind": "exp_singular",
                                        "domain": "disk", "tau": 0.1}}))
    assert main(["synth", str(spec)]) == 2


def test_config_unknown_key_rejected(workdir):
    cfg = workdir / "cfg.json"
    cfg.write_text(json.dumps({"dt": 0.01, "bogus": 1}))
    assert main(["classify", str(workdir / "rho0.csv"),
                 "--config", str(cfg)]) == 2


def test_experiment_small_family(workdir):
    spec = workdir / "family.json"
    spec.write_text(json.dumps({
        "operators": [{
            "name": "identity",
            "psi": {"kind": "rational", "domain": "disk",
                    "num": [[1, 0]], "den": [[1, 0]]},
            "phi": {"kind": "mobius", "domain": "disk",
                    "coeffs": [[1, 0], [0, 0], [0, 0], [1, 0]]},
        }],
        "signals": [{"name": "exp2t", "kind": "builtin"}],
    }))
    outdir = workdir / "exp"
    assert main(["experiment", str(spec), "--out", str(outdir)]) == 0
    report = json.loads((outdir / "report.json").read_text())
    assert report["max_rel_error"] < 1e-4
    assert (outdir / "report.csv").exists()
    assert (outdir / "errors.png").exists()
    assert (outdir / "probes.png").exists()


def test_experiment_no_figures(workdir):
    spec = workdir / "family.json"
    outdir = workdir / "exp_nofig"
    assert main(["experiment", str(spec), "--out", str(outdir),
                 "--no-figures"]) == 0
    assert not (outdir / "errors.png").exists()


def test_experiment_deterministic(workdir):
    spec = workdir / "family.json"
    d1, d2 = workdir / "det1", workdir / "det2"
    assert main(["experiment", str(spec), "--out", str(d1), "--no-figures"]) == 0
    assert main(["experiment", str(spec), "--out", str(d2), "--no-figures"]) == 0
    assert (d1 / "report.csv").read_bytes() == (d2 / "report.csv").read_bytes()


def test_experiment_invalid_descriptor_reported(workdir):
    spec = workdir / "badfamily.json"
    spec.write_text(json.dumps({
        "operators": [{
            "name": "broken",
            "psi": {"kind": "rational", "domain": "disk",
                    "num": [[1, 0]], "den": [[1, 0]]},
            "phi": {"kind": "mobius", "domain": "disk",
                    "coeffs": [[2, 0], [0, 0], [0, 0], [1, 0]]},
        }],
        "signals": [{"name": "exp2t", "kind": "builtin"}],
    }))
    outdir = workdir / "exp_bad"
    assert main(["experiment", str(spec), "--out", str(outdir),
                 "--no-figures"]) == 1
    report = json.loads((outdir / "report.json").read_text())
    assert report["failures"] and report["failures"][0]["operator"] == "broken"


def test_experiment_empty_family(workdir):
    spec = workdir / "emptyfamily.json"
    spec.write_text(json.dumps({"operators": [],
                                "signals": [{"name": "exp2t",
                                             "kind": "builtin"}]}))
    outdir = workdir / "exp_empty"
    assert main(["experiment", str(spec), "--out", str(outdir),
                 "--no-figures"]) == 0
    assert (outdir / "report.csv").read_text() == "operator,signal,rel_error\n"
