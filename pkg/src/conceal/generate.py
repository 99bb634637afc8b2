"""Random small systems and defense specs for property tests and gap searches."""

from __future__ import annotations

import random

from .automata import EventPartition, System, validate
from .defense import DefenseSpec

OBSERVABLE_POOL = ("a", "b", "c", "d")
SECRET = "s"
HIDDEN = "u"


def _rng(seed_or_rng):
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def _secret_reachable(system):
    reach = system.reachable_states()
    return any(e in system.secret for x in reach for e, _ in system.outgoing(x))


def random_system(seed_or_rng, max_states=5, max_observable=4, hidden_event=True, attempts=1000):
    """A validated system with a reachable secret transition.

    Every state gets one to three outgoing transitions, so liveness holds by
    construction; draws with an unobservable cycle or an unreachable secret
    are rejected and redrawn.
    """
    rng = _rng(seed_or_rng)
    for _ in range(attempts):
        n = rng.randint(2, max_states)
        k = rng.randint(1, min(max_observable, len(OBSERVABLE_POOL)))
        observable = OBSERVABLE_POOL[:k]
        unobservable = [SECRET]
        if hidden_event and rng.random() < 0.3:
            unobservable.append(HIDDEN)
        alphabet = list(observable) + unobservable
        states = tuple(str(i) for i in range(n))
        transitions = set()
        for x in states:
            for _ in range(rng.randint(1, 3)):
                # observable events are drawn more often than hidden ones
                e = rng.choice(alphabet) if rng.random() < 0.35 else rng.choice(observable)
                transitions.add((x, e, rng.choice(states)))
        system = System(
            states=states,
            initial="0",
            events=EventPartition(set(observable), set(unobservable), {SECRET}),
            transitions=frozenset(transitions),
        )
        if validate(system).ok and _secret_reachable(system):
            return system
    raise RuntimeError("no valid system found in %d attempts" % attempts)


def random_spec(seed_or_rng, system, p_keep=0.8, p_extra=0.3, p_insert=0.15, p_delete=0.1):
    """Random per-event defense; each event keeps itself with probability ``p_keep``."""
    rng = _rng(seed_or_rng)
    observable = system.sorted_observable
    replacements = {}
    insertions = {}
    deletions = []
    for t in observable:
        reps = {o for o in observable if o != t and rng.random() < p_extra}
        if rng.random() < p_keep or not reps:
            reps.add(t)
        replacements[t] = sorted(reps)
        ins = sorted(o for o in observable if rng.random() < p_insert)
        if ins:
            insertions[t] = ins
        if rng.random() < p_delete:
            deletions.append(t)
    return DefenseSpec(replacements, insertions, frozenset(deletions))
