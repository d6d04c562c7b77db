"""Command-line behavior: config validation, artifacts, reproducibility."""

import json

import pytest

from vhjlab.cli import ConfigError, build_profile, main, resolve_experiment
from vhjlab.exponents import ProblemParams


BASE = {
    "problem": {"N": 1, "p": 2.0, "q": 0.5},
    "ic": {"kind": "bump", "m": 1.0 / 96.0, "R0": 1.0},
    "grid": {"r_max": 4.0, "M": 128},
    "regularization": {"eps": 1e-7},
    "solver": {"t_end": 0.3, "tol_ext": 1e-7, "tol_pos": 1e-7,
               "snapshot_times": [0.05]},
}


def write_config(tmp_path, doc, name="exp.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_derive_prints_constants_json(capsys):
    assert main(["derive", "1", "2.0", "0.5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["regime"] == "single_point"
    assert out["constants"]["omega"] == pytest.approx(3.0)


def test_derive_out_of_scope_is_not_an_error(capsys):
    assert main(["derive", "1", "2.5", "0.5"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["regime"] == "out_of_scope"
    assert out["constants"] is None


def test_type_error_names_the_key_path(tmp_path, capsys):
    doc = json.loads(json.dumps(BASE))
    doc["grid"]["M"] = "lots"
    code = main(["simulate", write_config(tmp_path, doc)])
    assert code == 2
    assert "grid.M" in capsys.readouterr().err


def test_unknown_keys_are_rejected_with_their_path(tmp_path, capsys):
    doc = json.loads(json.dumps(BASE))
    doc["solver"]["hteng"] = 1.0
    code = main(["simulate", write_config(tmp_path, doc)])
    assert code == 2
    assert "solver.hteng" in capsys.readouterr().err


def test_missing_required_key_is_reported(tmp_path, capsys):
    doc = json.loads(json.dumps(BASE))
    del doc["solver"]["t_end"]
    code = main(["simulate", write_config(tmp_path, doc)])
    assert code == 2
    assert "solver.t_end" in capsys.readouterr().err


def test_invalid_json_exits_with_usage_error(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["simulate", str(path)]) == 2
    assert "not valid JSON" in capsys.readouterr().err


def test_simulate_writes_run_directory(tmp_path, capsys):
    doc = json.loads(json.dumps(BASE))
    doc["output"] = {"dir": str(tmp_path / "run")}
    assert main(["simulate", write_config(tmp_path, doc)]) == 0
    run = tmp_path / "run"
    assert (run / "resolved-config.json").exists()
    assert (run / "series.csv").exists()
    assert (run / "summary.json").exists()
    assert (run / "snapshots" / "index.csv").exists()
    summary = json.loads((run / "summary.json").read_text())
    assert summary["outcome"] == "extinct"
    header = (run / "series.csv").read_text().splitlines()[0]
    assert header.split(",")[:3] == ["t", "sup", "support_radius"]


def test_two_runs_are_byte_identical(tmp_path):
    for name in ("a", "b"):
        doc = json.loads(json.dumps(BASE))
        doc["output"] = {"dir": str(tmp_path / name)}
        assert main(["simulate", write_config(tmp_path, doc, f"{name}.json")]) == 0
    assert ((tmp_path / "a" / "series.csv").read_bytes()
            == (tmp_path / "b" / "series.csv").read_bytes())
    assert ((tmp_path / "a" / "snapshots" / "snap-0001.csv").read_bytes()
            == (tmp_path / "b" / "snapshots" / "snap-0001.csv").read_bytes())


def test_resolved_config_reproduces_the_run(tmp_path):
    doc = json.loads(json.dumps(BASE))
    doc["output"] = {"dir": str(tmp_path / "orig")}
    assert main(["simulate", write_config(tmp_path, doc)]) == 0

    resolved = json.loads((tmp_path / "orig" / "resolved-config.json").read_text())
    resolved["output"]["dir"] = str(tmp_path / "redo")
    assert main(["simulate", write_config(tmp_path, resolved, "redo.json")]) == 0

    assert ((tmp_path / "orig" / "series.csv").read_bytes()
            == (tmp_path / "redo" / "series.csv").read_bytes())
    orig = json.loads((tmp_path / "orig" / "summary.json").read_text())
    redo = json.loads((tmp_path / "redo" / "summary.json").read_text())
    assert orig == redo


def test_analyze_reports_fits_on_a_run(tmp_path, capsys):
    doc = json.loads(json.dumps(BASE))
    doc["output"] = {"dir": str(tmp_path / "run")}
    doc["analysis"] = {"j_R0": 1.0}
    assert main(["simulate", write_config(tmp_path, doc)]) == 0
    capsys.readouterr()
    assert main(["analyze", str(tmp_path / "run")]) == 0
    report = json.loads(capsys.readouterr().out)
    quantities = {f["quantity"] for f in report["fits"]}
    assert quantities == {"sup", "support_radius"}
    sup_fit = next(f for f in report["fits"] if f["quantity"] == "sup")
    assert 1.0 < sup_fit["exponent"] < 2.5
    assert report["j_diagnostic"]["passed"] is True
    assert (tmp_path / "run" / "analysis-report.json").exists()


def test_analyze_rejects_a_non_run_directory(tmp_path, capsys):
    assert main(["analyze", str(tmp_path)]) == 2
    assert "resolved-config.json" in capsys.readouterr().err


def test_residual_pass_and_fail_exit_codes(tmp_path, capsys):
    ok = {"problem": {"N": 1, "p": 2.0, "q": 0.5},
          "profile": {"kind": "barrier"},
          "box": [0.0, 1.0, 0.001, 1000.0],
          "sense": "super", "tol": 1e-10}
    assert main(["residual", write_config(tmp_path, ok, "ok.json")]) == 0
    cert = json.loads(capsys.readouterr().out)
    assert cert["passed"] is True

    bad = dict(ok, profile={"kind": "tail_floor", "T": 2.0},
               box=[0.0, 1.9, 0.001, 100.0])
    assert main(["residual", write_config(tmp_path, bad, "bad.json")]) == 1
    cert = json.loads(capsys.readouterr().out)
    assert cert["passed"] is False


def test_verify_algebra_suite_passes(tmp_path, capsys):
    out_json = tmp_path / "results.json"
    assert main(["verify", "algebra", "--json", str(out_json)]) == 0
    assert "criterion  1 PASS" in capsys.readouterr().out
    results = json.loads(out_json.read_text())
    assert results[0]["number"] == 1 and results[0]["passed"] is True


def test_verify_rejects_unknown_suite():
    with pytest.raises(SystemExit) as err:
        main(["verify", "everything"])
    assert err.value.code == 2


def test_sweep_runs_the_cartesian_product(tmp_path, capsys):
    doc = {"base": json.loads(json.dumps(BASE)),
           "sweep": {"grid.M": [96, 128], "problem.q": [0.5, 0.6]},
           "dir": str(tmp_path / "fan")}
    assert main(["sweep", write_config(tmp_path, doc), "--workers", "2"]) == 0
    summary = json.loads((tmp_path / "fan" / "sweep-summary.json").read_text())
    assert len(summary) == 4
    assert all(row["outcome"] == "extinct" for row in summary)
    dirs = {row["dir"].rsplit("/", 1)[-1] for row in summary}
    assert dirs == {"M=96_q=0.5", "M=96_q=0.6", "M=128_q=0.5", "M=128_q=0.6"}


def test_build_profile_rejects_unknown_kind():
    problem = ProblemParams(1, 2.0, 0.5)
    with pytest.raises(ConfigError, match="profile.kind"):
        build_profile(problem, {"kind": "mystery"})


def test_resolve_experiment_materializes_defaults():
    exp = resolve_experiment(json.loads(json.dumps(BASE)))
    solver = exp.resolved["solver"]
    assert solver["scheme"] == "explicit"
    assert solver["series_stride"] == 8
    assert exp.resolved["regularization"]["counterterm"] is True
    assert exp.resolved["regularization"]["gamma_lift"] is not None
    assert exp.resolved["seed"] == 0
