from conceal.diagnoser import Classification
from conceal.automata import LabeledState
from conceal.verifier import (
    VerifierState,
    build_observer,
    build_verifier,
    check_unconstrained,
    classify_cycles,
    find_safe_lasso,
    verifier_of,
)

from conftest import make_system


def L(text):
    return LabeledState(text[:-1], text[-1])


def V(a, b):
    return VerifierState(L(a), L(b))


# short names for the verifier states the tests refer to
A, B, C, D, E, F = V("1N", "1N"), V("4S", "4S"), V("5N", "5N"), V("3S", "5N"), V("3S", "3S"), V("7S", "7S")


def test_observer_has_no_trailing_closure(fig2):
    obs = build_observer(fig2)
    assert set(obs.step(L("1N"), "c")) == {L("5N"), L("3S")}
    assert set(obs.step(L("1N"), "d")) == {L("4S")}


def test_observer_secret_absorbs(fig2):
    obs = build_observer(fig2)
    for (x, e), succ in obs.transitions.items():
        if x.label == "S":
            assert all(y.label == "S" for y in succ)


def test_fig2_verifier(fig2):
    ver = verifier_of(fig2)
    assert ver.initial == A
    assert set(ver.step(A, "c")) == {C, D, E}
    assert ver.step(D, "d") == (D,)
    assert set(ver.states) == {A, B, C, D, E, F}
    assert str(D) == "{3S,5N}"


def test_single_state_observer_gives_single_state_verifier():
    g = make_system([("1", "a", "1")], {"a"})
    ver = verifier_of(g)
    assert ver.states == (V("1N", "1N"),) and ver.step(ver.initial, "a") == (ver.initial,)


def test_fig2_cycle_classes(fig2):
    cycles = classify_cycles(verifier_of(fig2))
    flat = {cls: {v for c in comps for v in c} for cls, comps in cycles.items()}
    assert D in flat[Classification.UNCERTAIN]
    assert C in flat[Classification.NORMAL]
    assert E in flat[Classification.SECRET]


def test_all_normal_only_normal_cycles(all_normal):
    cycles = classify_cycles(verifier_of(all_normal))
    assert cycles[Classification.NORMAL]
    assert not cycles[Classification.SECRET] and not cycles[Classification.UNCERTAIN]


def test_fig1_loop_uncertain_cycle(loop):
    cycles = classify_cycles(verifier_of(loop))
    assert cycles[Classification.UNCERTAIN]


def test_fig2_safe_lasso(fig2):
    lasso = find_safe_lasso(verifier_of(fig2))
    assert (lasso.stem, lasso.cycle) == (("c",), ("d",))
    assert [lasso.event_at(i) for i in range(4)] == ["c", "d", "d", "d"]


def test_fig1_loop_safe_lasso(loop):
    lasso = find_safe_lasso(verifier_of(loop))
    assert (lasso.stem, lasso.cycle) == ((), ("a", "b"))


def test_unconstrained_verdicts(fig2):
    verdict = check_unconstrained(fig2)
    assert verdict.enforceable
    assert verdict.to_dict() == {"enforceable": True, "safe_lasso": {"stem": ["c"], "cycle": ["d"]}}
    escape = make_system([("1", "s", "2"), ("2", "b", "2"), ("1", "a", "1")], {"a", "b"}, {"s"}, {"s"})
    assert check_unconstrained(escape).safe_lasso.cycle == ("a",)
    doomed = make_system([("1", "s", "2"), ("2", "b", "2")], {"b"}, {"s"}, {"s"})
    verdict = check_unconstrained(doomed)
    assert not verdict.enforceable
    assert verdict.to_dict() == {"enforceable": False, "safe_lasso": None}


def test_every_cycle_secret_has_no_lasso():
    doomed = make_system([("1", "s", "2"), ("2", "b", "2")], {"b"}, {"s"}, {"s"})
    assert find_safe_lasso(verifier_of(doomed)) is None


def test_verifier_size_bound(fig2, noloop, loop):
    for g in (fig2, noloop, loop):
        assert len(build_verifier(build_observer(g)).states) <= 4 * len(g.states) ** 2
