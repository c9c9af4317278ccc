"""Subcommands, output files and the exit-code contract."""

from __future__ import annotations

import csv
import json

import pytest

from slablb.cli import RunConfig, main

SMALL = {
    "lemma_trials": 100,
    "closed_form_trials": 5,
    "reduction_trials": 20,
    "samples": 20_000,
    "pairs": 4,
    "construction": {"n": 200, "grid": 2, "min_separation": 0.0, "min_aspect": 0.0},
}


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_bounds_prints_exponents(capsys):
    assert main(["bounds", "--d", "3"]) == 0
    out = capsys.readouterr().out
    assert "63" in out and "131" not in out
    assert main(["bounds"]) == 0
    out = capsys.readouterr().out
    assert "131          125  DISCREPANCY" in out


def test_bounds_rejects_small_d(capsys):
    assert main(["bounds", "--d", "2"]) == 2


def test_verify_lemmas_is_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["verify-lemmas", "--trials", "100", "--seed", "7", "--out", str(a)]) == 0
    assert main(["verify-lemmas", "--trials", "100", "--seed", "7", "--out", str(b)]) == 0
    assert (a / "lemmas.json").read_bytes() == (b / "lemmas.json").read_bytes()
    data = json.loads((a / "lemmas.json").read_text())
    assert data["seed"] == 7 and {r["status"] for r in data["reports"]} == {"pass"}


def test_verify_reduction(tmp_path):
    assert main(["verify-reduction", "--trials", "30", "--seed", "1", "--out", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "reduction.json").read_text())
    assert data["seed"] == 1 and len(data["reports"]) == 7


@pytest.mark.parametrize("content", ["{not json", json.dumps({"bogus": 1}),
                                     json.dumps({"construction": {"C": 5.0}}),
                                     json.dumps({"construction": {"grid": "x"}}), json.dumps([1, 2])])
def test_bad_config_exits_2(tmp_path, content, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(content)
    assert main(["build", "--config", str(cfg), "--out", str(tmp_path / "i.json")]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_missing_files_exit_2(tmp_path):
    assert main(["verify-lemmas", "--config", str(tmp_path / "nope.json")]) == 2
    assert main(["check", "--inst", str(tmp_path / "nope.json")]) == 2


def test_build_then_check(tmp_path):
    cfg = _write(tmp_path / "cfg.json", SMALL)
    inst = tmp_path / "inst.json"
    assert main(["build", "--config", cfg, "--out", str(inst)]) == 0
    data = json.loads(inst.read_text())
    assert len(data["queries"]) == 16 and len(data["inputs"]) == 200
    assert data["config"]["seed"] == 7
    code = main(["check", "--inst", str(inst), "--samples", "20000", "--pairs", "4", "--seed", "3",
                 "--out", str(tmp_path)])
    assert code in (0, 1)
    rows = list(csv.reader((tmp_path / "conditions.csv").open()))
    assert rows[0][-1] == "seed" and all(r[-1] == "3" for r in rows[1:])
    rep = json.loads((tmp_path / "conditions.json").read_text())
    assert rep["seed"] == 3 and (rep["reports"][0]["status"] == "pass") == (code == 0)


def test_check_rejects_tiny_samples(tmp_path):
    cfg = _write(tmp_path / "cfg.json", SMALL)
    inst = tmp_path / "inst.json"
    main(["build", "--config", cfg, "--out", str(inst)])
    assert main(["check", "--inst", str(inst), "--samples", "100"]) == 2


def test_negative_control_check_exits_1(tmp_path):
    cfg = _write(tmp_path / "cfg.json", {"construction": {"C": 1.0, "negative_control": True}})
    inst = tmp_path / "neg.json"
    assert main(["build", "--config", cfg, "--out", str(inst)]) == 0
    assert main(["check", "--inst", str(inst), "--samples", "20000", "--pairs", "4",
                 "--out", str(tmp_path)]) == 1


def test_all_writes_every_output(tmp_path):
    cfg = _write(tmp_path / "cfg.json", SMALL)
    out = tmp_path / "run"
    assert main(["all", "--config", cfg, "--out", str(out)]) in (0, 1)
    for name in ("lemmas.json", "reduction.json", "inst.json", "conditions.csv", "conditions.json",
                 "bounds.json", "manifest.json"):
        assert (out / name).exists(), name
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "all" and manifest["seed"] == 7 and manifest["timestamp"]
    assert json.loads((out / "bounds.json").read_text())["seed"] == 7


def test_run_config_defaults_roundtrip():
    cfg = RunConfig()
    assert RunConfig.from_json(cfg.to_json()) == cfg
    assert cfg.samples == 200_000 and cfg.pairs == 64 and cfg.construction.grid == 4
