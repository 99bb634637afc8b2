import io
import json
from pathlib import Path

import jsonschema
import pytest

from conceal.cli import run
from conceal.schemas import load_schema

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def call(*argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def payload(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return json.loads(out)


def check(schema, data):
    jsonschema.validate(data, load_schema(schema))
    return data


def test_input_files_match_schemas():
    for name in ("fig2", "fig1_loop", "fig1_noloop", "gap"):
        check("system", json.loads((FIX / ("%s.json" % name)).read_text()))
    for name in ("ex5", "gap_defense", "fig2_unconstrained"):
        check("defense", json.loads((FIX / ("%s.json" % name)).read_text()))


def test_check(tmp_path):
    data = check("concealability", payload("check", FIX / "fig2.json"))
    assert data["concealable"] is False and len(data["witnesses"]) == 2


def test_validate_and_graphs():
    assert check("validation", payload("validate", FIX / "fig2.json"))["ok"]
    diag = check("graph", payload("diagnoser", FIX / "fig2.json"))
    assert diag["initial"] == "{1N,2S}" and len(diag["states"]) == 4
    ver = check("graph", payload("verifier", FIX / "fig2.json"))
    assert len(ver["states"]) == 6


def test_diagnosable():
    data = check("diagnosability", payload("diagnosable", FIX / "fig1_loop.json"))
    assert data["diagnosable"] is False and data["uncertain_cycles"]


def test_enforce_modes():
    data = check("unconstrained", payload("enforce", "--mode", "unconstrained", FIX / "fig2.json"))
    assert data == {"enforceable": True, "safe_lasso": {"stem": ["c"], "cycle": ["d"]}}
    data = check("necessary", payload("enforce", "--mode", "necessary", FIX / "fig2.json", FIX / "ex5.json"))
    assert data["witness"] == {"state": "{5N,5N}", "event": "b"}
    data = check("sufficient", payload("enforce", "--mode", "sufficient", FIX / "fig2.json", FIX / "ex5.json"))
    assert data["verdict"] == "Inconclusive" and "strategy" not in data
    data = check("exact", payload("enforce", "--mode", "exact", FIX / "fig2.json", FIX / "ex5.json"))
    assert data["enforceable"] is False and data["reduced_states"] == []


def test_sufficient_prints_strategy_table():
    data = payload("enforce", "--mode", "sufficient", FIX / "fig2.json", FIX / "fig2_unconstrained.json")
    check("sufficient", data)
    assert data["verdict"] == "Enforceable"
    assert data["strategy"]["policy"][0] == {"belief": ["({1N,1N},{1N,1N})"], "event": "c", "action": "c/c"}


def test_defend(tmp_path):
    trace = tmp_path / "trace.txt"
    trace.write_text("s\nd\na\na\n")
    data = check("defend", payload("defend", "--trace", trace, FIX / "fig2.json"))
    assert data["emitted"] == ["c", "d", "d"] and data["certain_secret"] is False
    data = check("defend", payload("defend", "--trace", trace, "--strategy", "identity", FIX / "fig2.json"))
    assert data["certain_secret"] is True
    data = check("defend", payload("defend", "--trace", trace, FIX / "fig2.json", FIX / "ex5.json"))
    assert data["defended"] is False


def test_defend_foreign_trace_is_invalid_input(tmp_path):
    trace = tmp_path / "trace.txt"
    trace.write_text("a\n")
    code, _, err = call("defend", "--trace", trace, FIX / "fig2.json")
    assert code == 2 and "not a string" in err


def test_oracle():
    data = check("oracle", payload("oracle", "--horizon", "4", FIX / "fig2.json", FIX / "ex5.json"))
    assert data["agree"] and data["defense_game"] == "lose"


def test_export(tmp_path):
    code, out, _ = call("export", "--what", "diagnoser", FIX / "fig2.json")
    assert code == 0 and out.startswith("digraph diagnoser {")
    target = tmp_path / "e.dot"
    code, out, _ = call(
        "export", "--what", "ediagnoser", "--show-pruned", "--show-infeasible", "-o", target,
        FIX / "fig2.json", FIX / "ex5.json",
    )
    assert code == 0 and out == "" and "color=red" in target.read_text()


def test_exit_codes(tmp_path, monkeypatch):
    assert call()[0] == 1
    assert call("nonsense")[0] == 1
    assert call("enforce", FIX / "fig2.json")[0] == 1
    assert call("enforce", "--mode", "exact", FIX / "fig2.json")[0] == 1
    assert call("oracle", "--horizon", "40", FIX / "fig2.json")[0] == 1
    assert call("check", tmp_path / "missing.json")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert call("check", bad)[0] == 2
    looped = tmp_path / "loop.json"
    looped.write_text(json.dumps({
        "states": ["1", "2"], "initial": "1", "observable": ["a"], "unobservable": ["u"],
        "secret": [], "transitions": [["1", "u", "2"], ["2", "u", "1"], ["1", "a", "1"]],
    }))
    assert call("check", looped)[0] == 2
    assert call("validate", looped)[0] == 0
    assert call("enforce", "--mode", "exact", "--size-limit", "3", FIX / "fig2.json", FIX / "ex5.json")[0] == 3
    monkeypatch.setenv("CONCEAL_SIZE_LIMIT", "3")
    assert call("enforce", "--mode", "exact", FIX / "fig2.json", FIX / "ex5.json")[0] == 3
    assert call("export", "--what", "ediagnoser", FIX / "fig2.json", FIX / "ex5.json")[0] == 3
    monkeypatch.setenv("CONCEAL_SIZE_LIMIT", "20")
    assert call("enforce", "--mode", "exact", FIX / "fig2.json", FIX / "ex5.json")[0] == 0


def test_spec_with_unobservable_event_is_invalid_input(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"replacements": {"a": ["s"]}}))
    assert call("enforce", "--mode", "necessary", FIX / "fig2.json", spec)[0] == 2
