"""Reference systems and defense specifications used by the tests and demos."""

from .automata import EventPartition, System
from .defense import DefenseSpec


def fig2_system():
    """Seven-state system with secret ``s`` revealed by ``d a*`` and ``c d* b d*``."""
    return System(
        states=("1", "2", "3", "4", "5", "6", "7"),
        initial="1",
        events=EventPartition({"a", "b", "c", "d"}, {"s"}, {"s"}),
        transitions=frozenset(
            [
                ("1", "s", "2"),
                ("1", "c", "5"),
                ("2", "c", "3"),
                ("2", "d", "4"),
                ("4", "a", "4"),
                ("3", "d", "3"),
                ("5", "d", "5"),
                ("5", "s", "6"),
                ("6", "b", "7"),
                ("7", "d", "7"),
            ]
        ),
    )


def _fig1(loop):
    transitions = [
        ("1", "sigma", "3"),
        ("1", "a", "2"),
        ("2", "b", "1"),
        ("3", "a", "4"),
        ("4", "b", "3"),
    ]
    if loop:
        transitions.append(("4", "a", "4"))
    return System(
        states=("1", "2", "3", "4"),
        initial="1",
        events=EventPartition({"a", "b"}, {"sigma"}, {"sigma"}),
        transitions=frozenset(transitions),
    )


def fig1_noloop():
    """Four-state system whose secret ``sigma`` stays hidden behind ``(ab)*``."""
    return _fig1(loop=False)


def fig1_loop():
    """``fig1_noloop`` plus an ``a`` self-loop at state 4 that exposes ``sigma``."""
    return _fig1(loop=True)


def ex5_defense():
    """Per-event constraints: a/{a,d}, b/{b}, c/{c}, d/{d, cd, eps}."""
    return DefenseSpec.from_dict(
        {
            "replacements": {"a": ["a", "d"], "b": ["b"], "c": ["c"], "d": ["d"]},
            "insertions": {"d": ["c"]},
            "deletions": ["d"],
        }
    )


def unconstrained_defense(system):
    """Every replacement, deletion and single-event insertion for every observable event."""
    return DefenseSpec.unconstrained(system.observable)


def identity_defense(system):
    return DefenseSpec.identity(system.observable)


def gap_system():
    """Necessary condition holds, yet no defense exists under :func:`gap_defense`.

    After ``a`` the system is in state 1 (secret-free, then ``b*``) or in
    state 3 (secret occurred, then ``c*``).  The defender must commit to
    emitting ``a`` or ``d`` before learning which: ``a`` is later exposed by
    ``c`` and ``d`` cannot be followed by ``b``.
    """
    return System(
        states=("0", "1", "2", "3", "4"),
        initial="0",
        events=EventPartition({"a", "b", "c", "d"}, {"s"}, {"s"}),
        transitions=frozenset(
            [
                ("0", "a", "1"),
                ("1", "b", "1"),
                ("0", "s", "2"),
                ("2", "a", "3"),
                ("3", "c", "3"),
                ("0", "d", "4"),
                ("4", "c", "4"),
            ]
        ),
    )


def gap_defense():
    return DefenseSpec.from_dict(
        {
            "replacements": {"a": ["a", "d"], "b": ["b"], "c": ["c"], "d": ["d"]},
            "insertions": {},
            "deletions": [],
        }
    )
