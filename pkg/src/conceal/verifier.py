"""Labelled observer ``G_o`` and the twin-plant verifier built from it.

The observer fires one observable event after any run of unobservable events
(no trailing closure), starting from ``(x0, N)``.  The verifier is the
accessible self-product of the observer with unordered-pair states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .automata import N, LabeledState, System, labeled_unobservable_reach, require_valid
from .diagnoser import Classification, classify_labels
from .graph import cyclic_components, shortest_cycle, shortest_word


@dataclass(frozen=True)
class ObserverNfa:
    states: tuple
    initial: LabeledState
    transitions: dict
    events: tuple

    def step(self, state, event):
        return self.transitions.get((state, event), ())


def observer_step(system, start, event):
    out = set()
    for y, label in labeled_unobservable_reach(system, start):
        for z in system.successors(y, event):
            out.add(LabeledState(z, label))
    return tuple(sorted(out, key=LabeledState.sort_key))


def build_observer(system: System, *, check=True) -> ObserverNfa:
    if check:
        require_valid(system)
    initial = LabeledState(system.initial, N)
    events = system.sorted_observable
    order = [initial]
    seen = {initial}
    transitions = {}
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for e in events:
            succ = observer_step(system, x, e)
            if not succ:
                continue
            transitions[(x, e)] = succ
            for y in succ:
                if y not in seen:
                    seen.add(y)
                    order.append(y)
    return ObserverNfa(tuple(order), initial, transitions, events)


class VerifierState(tuple):
    """Unordered pair of labelled states, stored sorted."""

    def __new__(cls, first, second):
        pair = sorted((LabeledState(*first), LabeledState(*second)), key=LabeledState.sort_key)
        return super().__new__(cls, pair)

    def __str__(self):
        return "{%s,%s}" % (self[0], self[1])

    def sort_key(self):
        return self[0].sort_key(), self[1].sort_key()

    @property
    def classification(self):
        return classify_labels((self[0].label, self[1].label))


def classify_pair(state) -> Classification:
    return classify_labels((state[0].label, state[1].label))


@dataclass(frozen=True)
class Verifier:
    """Nondeterministic twin plant; ``transitions[(v, e)]`` is a sorted successor tuple."""

    states: tuple
    initial: VerifierState
    transitions: dict
    events: tuple

    def step(self, state, event):
        return self.transitions.get((state, event), ())

    def enabled(self, state):
        return tuple(e for e in self.events if (state, e) in self.transitions)

    def out(self, state):
        return [(e, w) for e in self.enabled(state) for w in self.transitions[(state, e)]]

    def classification(self, state):
        return classify_pair(state)


def build_verifier(observer: ObserverNfa) -> Verifier:
    initial = VerifierState(observer.initial, observer.initial)
    order = [initial]
    seen = {initial}
    transitions = {}
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for e in observer.events:
            left = observer.step(v[0], e)
            right = observer.step(v[1], e)
            if not left or not right:
                continue
            succ = sorted({VerifierState(a, b) for a in left for b in right}, key=VerifierState.sort_key)
            transitions[(v, e)] = tuple(succ)
            for w in succ:
                if w not in seen:
                    seen.add(w)
                    order.append(w)
    return Verifier(tuple(order), initial, transitions, observer.events)


def verifier_of(system: System, *, check=True) -> Verifier:
    return build_verifier(build_observer(system, check=check))


def classify_cycles(verifier: Verifier) -> dict:
    """Cyclic SCCs of each classification's induced subgraph.

    Returns ``{Classification: [component, ...]}`` with each component a
    tuple of verifier states.
    """
    result = {}
    for cls in Classification:
        members = [v for v in verifier.states if classify_pair(v) is cls]
        keep = set(members)

        def succ(v, keep=keep):
            return [(e, w) for e, w in verifier.out(v) if w in keep]

        result[cls] = [tuple(c) for c in cyclic_components(members, succ)]
    return result


@dataclass(frozen=True)
class SafeLasso:
    stem: tuple
    cycle: tuple
    states: tuple

    def event_at(self, i):
        """The ``i``-th event (0-based) of ``stem . cycle^omega``."""
        if i < len(self.stem):
            return self.stem[i]
        return self.cycle[(i - len(self.stem)) % len(self.cycle)]

    def to_dict(self):
        return {"stem": list(self.stem), "cycle": list(self.cycle)}


def find_safe_lasso(verifier: Verifier) -> Optional[SafeLasso]:
    """Shortest, then lexicographically least, stem into a non-Secret cycle."""
    if classify_pair(verifier.initial) is Classification.SECRET:
        return None
    safe = [v for v in verifier.states if classify_pair(v) is not Classification.SECRET]
    keep = set(safe)

    def succ(v):
        return [(e, w) for e, w in verifier.out(v) if w in keep]

    components = cyclic_components(safe, succ)
    if not components:
        return None
    component_of = {v: i for i, c in enumerate(components) for v in c}
    found = shortest_word(verifier.initial, succ, component_of.__contains__)
    if found is None:
        return None
    stem, stem_path = found
    entry = stem_path[-1]
    members = set(components[component_of[entry]])

    def inside(v):
        return [(e, w) for e, w in succ(v) if w in members]

    cycle, cycle_path = shortest_cycle(entry, inside)
    return SafeLasso(tuple(stem), tuple(cycle), tuple(stem_path) + tuple(cycle_path[1:]))


@dataclass(frozen=True)
class UnconstrainedVerdict:
    enforceable: bool
    safe_lasso: Optional[SafeLasso] = None

    def __bool__(self):
        return self.enforceable

    def to_dict(self):
        out = {"enforceable": self.enforceable}
        out["safe_lasso"] = self.safe_lasso.to_dict() if self.safe_lasso else None
        return out


def check_unconstrained(system: System) -> UnconstrainedVerdict:
    """Enforceable under unrestricted replacement iff a safe lasso exists."""
    lasso = find_safe_lasso(verifier_of(system))
    return UnconstrainedVerdict(lasso is not None, lasso)
