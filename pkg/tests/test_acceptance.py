"""Acceptance suite: one group of tests per criterion.

Each test carries ``@pytest.mark.criterion(n)``; the conftest prints one
PASS/FAIL line per criterion at the end of the run.
"""

import io
import json
import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conceal import fixtures
from conceal.cli import run
from conceal.defense import (
    check_necessary,
    check_sufficient,
    e_verifier_of,
    reduce_e_verifier,
    simulate_defense,
    unconstrained_strategy,
)
from conceal.diagnoser import Classification, build_diagnoser, classify, is_concealable, is_diagnosable
from conceal.exact import is_c_enforceable_exact
from conceal.generate import random_spec, random_system
from conceal.oracle import GameVerdict, brute_concealability, brute_defense_game, brute_diagnosable
from conceal.verifier import verifier_of

FIX = Path(__file__).resolve().parent.parent / "fixtures"
criterion = pytest.mark.criterion


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out=out, err=err)
    assert code == 0, err.getvalue()
    return json.loads(out.getvalue())


# -- 1 ------------------------------------------------------------------------


@criterion(1)
def test_fig2_two_secret_cycles():
    start = time.perf_counter()
    data = cli("check", FIX / "fig2.json")
    elapsed = time.perf_counter() - start
    assert data["concealable"] is False
    assert [w["states"] for w in data["witnesses"]] == [["{4S}"], ["{7S}"]]
    assert elapsed < 1.0


# -- 2 ------------------------------------------------------------------------


@criterion(2)
def test_fig2_safe_lasso():
    data = cli("enforce", "--mode", "unconstrained", FIX / "fig2.json")
    assert data == {"enforceable": True, "safe_lasso": {"stem": ["c"], "cycle": ["d"]}}


# -- 3 ------------------------------------------------------------------------


@criterion(3)
def test_fig2_ex5_three_verdicts():
    start = time.perf_counter()
    necessary = cli("enforce", "--mode", "necessary", FIX / "fig2.json", FIX / "ex5.json")
    sufficient = cli("enforce", "--mode", "sufficient", FIX / "fig2.json", FIX / "ex5.json")
    exact = cli("enforce", "--mode", "exact", FIX / "fig2.json", FIX / "ex5.json")
    elapsed = time.perf_counter() - start
    assert necessary["verdict"] == "NotEnforceable"
    assert necessary["witness"] == {"state": "{5N,5N}", "event": "b"}
    assert sufficient["verdict"] == "Inconclusive"
    # the two pair states reached only through b and the later d loop
    assert {"{5N,5N}", "{7S,7S}"} <= set(sufficient["missing"])
    assert exact["enforceable"] is False and exact["reduced_states"] == []
    assert elapsed < 1.0


# -- 4 ------------------------------------------------------------------------


@criterion(4)
@pytest.mark.parametrize("name, concealable", [("fig1_noloop", True), ("fig1_loop", False)])
def test_fig1_verdicts_oracle_confirmed(name, concealable):
    system = getattr(fixtures, name)()
    assert is_concealable(system).concealable is concealable
    assert is_diagnosable(system) is False
    report = brute_concealability(system, 8)
    assert report.agree
    assert (report.revealing == ()) is concealable
    assert brute_diagnosable(system, 8, 4) is False


# -- 5 ------------------------------------------------------------------------


@criterion(5)
def test_substitution_replay(fig2):
    report = simulate_defense(fig2, unconstrained_strategy(fig2), ["s", "d", "a", "a"])
    diag = build_diagnoser(fig2)
    assert not any(classify(q) is Classification.SECRET for q in report.eavesdropper_states)
    assert report.consistent and not report.certain_secret
    assert diag.accepts(report.emitted)
    assert list(report.emitted) == ["c", "d", "d", "d"]


# -- 6 ------------------------------------------------------------------------

RANDOM_SEEDS = range(200)


@pytest.fixture(scope="module")
def random_results():
    start = time.perf_counter()
    rows = []
    for seed in RANDOM_SEEDS:
        system = random_system(seed)
        spec = random_spec(seed + 10000, system)
        ev = e_verifier_of(system, spec)
        reduced = reduce_e_verifier(ev)
        rows.append(
            {
                "seed": seed,
                "system": system,
                "spec": spec,
                "concealable": is_concealable(system).concealable,
                "diagnosable": is_diagnosable(system),
                "necessary": check_necessary(ev).holds,
                "sufficient": check_sufficient(reduced).enforceable,
                "exact": is_c_enforceable_exact(system, spec),
                "labels": brute_concealability(system, 6),
                "n": len(system.states),
                "verifier_size": len(verifier_of(system).states),
                "e_size": len(ev.states),
            }
        )
    return rows, time.perf_counter() - start


@criterion(6)
def test_random_concealable_implies_not_diagnosable(random_results):
    rows, _ = random_results
    bad = [r["seed"] for r in rows if r["concealable"] and r["diagnosable"]]
    assert bad == []


@criterion(6)
def test_random_necessary_direction(random_results):
    rows, _ = random_results
    bad = [r["seed"] for r in rows if not r["necessary"] and r["exact"]]
    assert bad == []


@criterion(6)
def test_random_sufficient_direction(random_results):
    rows, _ = random_results
    bad = [r["seed"] for r in rows if r["sufficient"] and not r["exact"]]
    assert bad == [], "sufficient check passed but no defense exists for seeds %s" % bad


def test_sufficient_direction_counterexamples_are_genuine(random_results):
    # every instance breaking the direction above is a certified loss for the defender
    rows, _ = random_results
    for r in rows:
        if r["sufficient"] and not r["exact"]:
            assert brute_defense_game(r["system"], r["spec"], 10) is GameVerdict.LOSE, r["seed"]


@criterion(6)
def test_random_label_agreement(random_results):
    rows, _ = random_results
    bad = [r["seed"] for r in rows if not r["labels"].agree]
    assert bad == []


@criterion(6)
def test_random_size_bounds(random_results):
    rows, _ = random_results
    for r in rows:
        assert r["verifier_size"] <= 4 * r["n"] ** 2, r["seed"]
        assert r["e_size"] <= 16 * r["n"] ** 4, r["seed"]


@criterion(6)
def test_random_suite_budget(random_results):
    _, elapsed = random_results
    assert elapsed < 300


# -- 7 ------------------------------------------------------------------------


@criterion(7)
def test_curated_gap_instance(gap):
    system, spec = gap
    assert check_necessary(e_verifier_of(system, spec)).holds
    assert not is_c_enforceable_exact(system, spec)
    assert brute_defense_game(system, spec, 10) is GameVerdict.LOSE


@criterion(7)
def test_random_gap_instance(random_results):
    rows, _ = random_results
    found = [r for r in rows if r["necessary"] and not r["exact"]]
    assert found
    certified = [r for r in found if brute_defense_game(r["system"], r["spec"], 10) is GameVerdict.LOSE]
    assert certified


# -- 8 ------------------------------------------------------------------------

SYSTEMS = {
    "fig2": (["ex5", "fig2_unconstrained"], "trace_sdaa.txt"),
    "fig1_noloop": (["fig1_unconstrained"], "trace_fig1.txt"),
    "fig1_loop": (["fig1_unconstrained"], "trace_fig1.txt"),
    "gap": (["gap_defense"], "trace_gap.txt"),
}


def _commands():
    for name, (defenses, trace) in SYSTEMS.items():
        system = FIX / ("%s.json" % name)
        for sub in ("validate", "diagnoser", "verifier", "check", "diagnosable"):
            yield [sub, system]
        yield ["enforce", "--mode", "unconstrained", system]
        yield ["oracle", "--horizon", "5", system]
        yield ["defend", "--trace", FIX / trace, system]
        for what in ("diagnoser", "verifier"):
            yield ["export", "--what", what, system]
        for d in defenses:
            spec = FIX / ("%s.json" % d)
            for mode in ("necessary", "sufficient", "exact"):
                yield ["enforce", "--mode", mode, system, spec]
            yield ["oracle", "--horizon", "5", system, spec]
            for strategy in ("constrained", "exact"):
                yield ["defend", "--trace", FIX / trace, "--strategy", strategy, system, spec]
            for what in ("dverifier", "everifier", "reduced", "ediagnoser"):
                yield ["export", "--what", what, "--show-infeasible", "--show-pruned", system, spec]


def _run_process(argv, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    proc = subprocess.run(
        [sys.executable, "-m", "conceal.cli"] + [str(a) for a in argv],
        capture_output=True,
        env=env,
    )
    return proc.returncode, proc.stdout


@criterion(8)
def test_cli_output_is_byte_identical():
    commands = list(_commands())
    assert len(commands) > 60
    for argv in commands:
        first = _run_process(argv, 1)
        second = _run_process(argv, 2)
        assert first == second, argv
        assert first[0] == 0, argv
