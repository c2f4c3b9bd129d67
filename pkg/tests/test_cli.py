"""Command-line surface: outputs, exit codes, env overrides, round trips."""

import json
import random

import pytest

from sncresolve import cli
from sncresolve import resolution_engine as re_
from sncresolve import snc_model as sm


@pytest.fixture()
def triangle_file(tmp_path):
    path = tmp_path / "triangle.json"
    path.write_text(json.dumps(sm.to_json_obj(sm.coordinate_germ(3))))
    return str(path)


@pytest.fixture()
def cycle_file(tmp_path):
    cyc = sm.from_index_sets(["E1", "E2", "E3"],
                             [{"E1", "E2"}, {"E2", "E3"}, {"E1", "E3"}])
    path = tmp_path / "cycle3.json"
    path.write_text(json.dumps(sm.to_json_obj(cyc)))
    return str(path)


@pytest.fixture()
def seed_file(tmp_path):
    germ = sm.coordinate_germ(3)
    coranks = {s.id: (2 if len(s.indices) == 3 else 1)
               for s in germ.strata if len(s.indices) >= 2}
    path = tmp_path / "seed.json"
    path.write_text(json.dumps({"snc": sm.to_json_obj(germ), "coranks": coranks}))
    return str(path)


# --------------------------------------------------------------------------
# dualcomplex
# --------------------------------------------------------------------------

def test_dualcomplex_triangle(triangle_file, capsys):
    assert cli.main(["dualcomplex", "--input", triangle_file]) == 0
    out = capsys.readouterr().out
    assert "cells: 3/3/1" in out
    assert "betti: 1 0 0" in out
    assert "Q-acyclic: yes" in out


def test_dualcomplex_cycle(cycle_file, capsys):
    assert cli.main(["dualcomplex", "--input", cycle_file]) == 0
    out = capsys.readouterr().out
    assert "betti: 1 1" in out
    assert "Q-acyclic: no" in out


def test_dualcomplex_dangling_facet_diagnostic(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"cells": [
        {"id": "v", "dim": 0, "facets": []},
        {"id": "e", "dim": 1, "facets": ["v", "ghost"]}]}))
    assert cli.main(["dualcomplex", "--input", str(bad)]) == cli.EXIT_INPUT
    err = capsys.readouterr().err
    assert "dangling facet" in err


def test_dualcomplex_unparseable_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.main(["dualcomplex", "--input", str(bad)]) == cli.EXIT_INPUT


def test_dualcomplex_missing_input(capsys):
    assert cli.main(["dualcomplex"]) == cli.EXIT_INPUT


def test_dualcomplex_accepts_raw_complex_documents(tmp_path, capsys):
    doc = {"cells": [{"id": "v", "dim": 0, "facets": []}]}
    path = tmp_path / "point.json"
    path.write_text(json.dumps(doc))
    assert cli.main(["dualcomplex", "--input", str(path)]) == 0
    assert "betti: 1" in capsys.readouterr().out


def test_dualcomplex_dot_export(triangle_file, tmp_path, capsys):
    dot = tmp_path / "skeleton.dot"
    assert cli.main(["dualcomplex", "--input", triangle_file,
                     "--dot", str(dot)]) == 0
    text = dot.read_text()
    assert text.startswith("graph") and text.count("--") == 3


# --------------------------------------------------------------------------
# resolve
# --------------------------------------------------------------------------

def test_resolve_triangle(seed_file, tmp_path, capsys):
    trace = tmp_path / "trace.json"
    assert cli.main(["resolve", "--input", seed_file, "--trace", str(trace)]) == 0
    out = capsys.readouterr().out
    assert "dual complex preserved: yes" in out
    assert "all resolved" in out
    doc = json.loads(trace.read_text())
    assert re_.replay_trace(doc).ok


def test_resolve_double_point_event_count(tmp_path, capsys):
    snc = sm.from_index_sets(["E1", "E2"], [{"E1", "E2"}])
    path = tmp_path / "dp.json"
    path.write_text(json.dumps({"snc": sm.to_json_obj(snc),
                                "coranks": {"E1+E2": 1}}))
    assert cli.main(["resolve", "--input", str(path)]) == 0
    out = capsys.readouterr().out
    assert "events: 1" in out
    assert "final charts: 2" in out


def test_resolve_ceiling_exit_code(seed_file, capsys):
    assert cli.main(["resolve", "--input", seed_file,
                     "--ceiling", "1"]) == cli.EXIT_SCALE
    assert "ceiling" in capsys.readouterr().err


def test_resolve_bad_input_exit_code(tmp_path, capsys):
    path = tmp_path / "junk.json"
    path.write_text(json.dumps({"surprise": True}))
    assert cli.main(["resolve", "--input", str(path)]) == cli.EXIT_INPUT


def test_resolve_accepts_generated_states(tmp_path, capsys):
    state = cli.random_state(random.Random(5))
    path = tmp_path / "state.json"
    path.write_text(json.dumps(re_.state_to_obj(state)))
    assert cli.main(["resolve", "--input", str(path)]) == 0


def test_resolve_policy_flag_recorded_in_trace(seed_file, tmp_path):
    trace = tmp_path / "trace.json"
    assert cli.main(["resolve", "--input", seed_file, "--trace", str(trace),
                     "--exponent-policy", "paper"]) == 0
    doc = json.loads(trace.read_text())
    assert doc["config"]["exponent_policy"] == "paper"
    assert re_.replay_trace(doc).ok


def test_resolve_ordering_flag(seed_file, tmp_path):
    trace = tmp_path / "trace.json"
    assert cli.main(["resolve", "--input", seed_file, "--trace", str(trace),
                     "--ordering", "E3,E2,E1"]) == 0
    doc = json.loads(trace.read_text())
    assert doc["config"]["ordering"] == ["E3", "E2", "E1"]
    assert doc["events"][0]["rule"]["pair"] == ["E3", "E2"]


def test_env_override_supplies_policy(seed_file, tmp_path, monkeypatch):
    monkeypatch.setenv("SNCRESOLVE_EXPONENT_POLICY", "paper")
    trace = tmp_path / "trace.json"
    assert cli.main(["resolve", "--input", seed_file, "--trace", str(trace)]) == 0
    doc = json.loads(trace.read_text())
    assert doc["config"]["exponent_policy"] == "paper"


def test_explicit_flag_beats_env(seed_file, tmp_path, monkeypatch):
    monkeypatch.setenv("SNCRESOLVE_EXPONENT_POLICY", "paper")
    trace = tmp_path / "trace.json"
    assert cli.main(["resolve", "--input", seed_file, "--trace", str(trace),
                     "--exponent-policy", "oracle"]) == 0
    doc = json.loads(trace.read_text())
    assert doc["config"]["exponent_policy"] == "oracle"


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def test_verify_mon1_grid(capsys):
    assert cli.main(["verify", "--rule", "mon1", "--d", "2", "--a", "2..4"]) == 0
    out = capsys.readouterr().out
    assert "pass" in out and "FAIL" not in out


def test_verify_det_prints_measured_exponents(capsys):
    assert cli.main(["verify", "--rule", "det", "--m", "2", "--d", "2..3"]) == 0
    out = capsys.readouterr().out
    assert "exc-exp" in out
    assert "m^2-2 = 2" in out  # the discrepancy note


def test_verify_rejects_out_of_scale(capsys):
    assert cli.main(["verify", "--rule", "det", "--m", "7"]) == cli.EXIT_SCALE
    assert "capped" in capsys.readouterr().err


def test_verify_paper_policy_fails_loudly(capsys):
    code = cli.main(["verify", "--rule", "det", "--m", "2", "--d", "2",
                     "--exponent-policy", "paper"])
    assert code == cli.EXIT_BREACH
    assert "FAIL" in capsys.readouterr().out


def test_verify_unknown_rule(capsys):
    assert cli.main(["verify", "--rule", "frobnicate"]) == cli.EXIT_INPUT


def test_verify_all_rules_pass_defaults(capsys):
    for rule in ("det", "mon1", "mon2", "mon3", "bin"):
        assert cli.main(["verify", "--rule", rule]) == 0, rule


# --------------------------------------------------------------------------
# gen
# --------------------------------------------------------------------------

def test_gen_writes_a_runnable_state(tmp_path, capsys):
    out = tmp_path / "state.json"
    assert cli.main(["gen", "--seed", "11", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    state = re_.state_from_obj(doc)
    final, _ = re_.run(state)
    assert final.is_finished()


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["gen", "--seed", "7", "--out", str(a)])
    cli.main(["gen", "--seed", "7", "--out", str(b)])
    assert a.read_text() == b.read_text()


def test_gen_respects_bounds():
    for seed in range(40):
        state = cli.random_state(random.Random(seed))
        for chart, _ in state.charts:
            assert len(chart.x_indices) <= 5
            assert chart.det_size <= 3
            assert sum(a for _, a in chart.exponents) <= 6


def test_emitted_json_reparses_to_equal_value(seed_file, tmp_path):
    trace = tmp_path / "trace.json"
    cli.main(["resolve", "--input", seed_file, "--trace", str(trace)])
    doc = json.loads(trace.read_text())
    seed = re_.state_from_obj(doc["seed"])
    assert re_.canonical_dumps(re_.state_to_obj(seed)) \
        == re_.canonical_dumps(doc["seed"])
