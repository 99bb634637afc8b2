"""Label-propagating diagnoser, secret cycles, concealability and diagnosability."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .automata import (
    N,
    S,
    LabeledState,
    System,
    labeled_unobservable_reach,
    observable_step,
    require_valid,
    unobservable_closure,
)
from .graph import cyclic_components, shortest_cycle, shortest_word


class Classification(str, Enum):
    NORMAL = "Normal"
    SECRET = "Secret"
    UNCERTAIN = "Uncertain"

    def __str__(self):
        return self.value


def classify_labels(labels) -> Classification:
    labels = set(labels)
    if labels == {N}:
        return Classification.NORMAL
    if labels == {S}:
        return Classification.SECRET
    if labels == {N, S}:
        return Classification.UNCERTAIN
    raise ValueError("cannot classify label set %r" % (labels,))


class DiagnoserState(tuple):
    """Canonically ordered, non-empty tuple of :class:`LabeledState` members."""

    def __new__(cls, members):
        members = {LabeledState(*m) for m in members}
        if not members:
            raise ValueError("diagnoser states are non-empty")
        return super().__new__(cls, sorted(members, key=LabeledState.sort_key))

    def __str__(self):
        return "{%s}" % ",".join(str(m) for m in self)

    def sort_key(self):
        return tuple(m.sort_key() for m in self)

    @property
    def classification(self):
        return classify_labels(m.label for m in self)


def classify(state) -> Classification:
    """Normal, Secret or Uncertain according to the member labels."""
    return classify_labels(m.label for m in state)


@dataclass(frozen=True)
class Diagnoser:
    """Deterministic observer over observable events with labelled states.

    ``states`` are listed in breadth-first discovery order; ``transitions``
    maps ``(state, event)`` to the unique successor.
    """

    states: tuple
    initial: DiagnoserState
    transitions: dict
    events: tuple

    def step(self, state, event) -> Optional[DiagnoserState]:
        return self.transitions.get((state, event))

    def enabled(self, state):
        return tuple(e for e in self.events if (state, e) in self.transitions)

    def out(self, state):
        return [(e, self.transitions[(state, e)]) for e in self.enabled(state)]

    def run(self, word):
        """States visited along ``word`` (initial included), or ``None`` if rejected."""
        state = self.initial
        visited = [state]
        for event in word:
            state = self.step(state, event)
            if state is None:
                return None
            visited.append(state)
        return visited

    def accepts(self, word):
        return self.run(word) is not None


def diagnoser_step(system, state, event):
    """Fire ``event`` from every member then close under unobservable events."""
    landed = observable_step(system, state, event)
    if not landed:
        return None
    return DiagnoserState(unobservable_closure(system, landed))


def build_diagnoser(system: System, *, check=True) -> Diagnoser:
    if check:
        require_valid(system)
    initial = DiagnoserState(labeled_unobservable_reach(system, LabeledState(system.initial, N)))
    events = system.sorted_observable
    order = [initial]
    seen = {initial}
    transitions = {}
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for e in events:
            nxt = diagnoser_step(system, q, e)
            if nxt is None:
                continue
            transitions[(q, e)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    return Diagnoser(tuple(order), initial, transitions, events)


@dataclass(frozen=True)
class CycleWitness:
    stem: tuple
    cycle: tuple
    states: tuple

    def to_dict(self):
        return {
            "stem": list(self.stem),
            "cycle": list(self.cycle),
            "states": [str(q) for q in self.states],
        }


def find_secret_cycles(diag: Diagnoser) -> list:
    """One witness per cyclic SCC of the Secret-classified subgraph."""
    secret = {q for q in diag.states if classify(q) is Classification.SECRET}

    def succ_secret(q):
        return [(e, r) for e, r in diag.out(q) if r in secret]

    witnesses = []
    for component in cyclic_components([q for q in diag.states if q in secret], succ_secret):
        members = set(component)
        stem, path = shortest_word(diag.initial, diag.out, members.__contains__)
        entry = path[-1]

        def inside(q, members=members):
            return [(e, r) for e, r in succ_secret(q) if r in members]

        cycle, cycle_path = shortest_cycle(entry, inside)
        witnesses.append(CycleWitness(tuple(stem), tuple(cycle), tuple(cycle_path[:-1])))
    witnesses.sort(key=lambda w: (len(w.stem), w.stem, w.cycle))
    return witnesses


@dataclass(frozen=True)
class ConcealabilityVerdict:
    concealable: bool
    witnesses: tuple = ()

    def __bool__(self):
        return self.concealable

    def to_dict(self):
        return {"concealable": self.concealable, "witnesses": [w.to_dict() for w in self.witnesses]}


def is_concealable(system: System) -> ConcealabilityVerdict:
    """Concealable iff the diagnoser has no secret cycle."""
    witnesses = find_secret_cycles(build_diagnoser(system))
    return ConcealabilityVerdict(not witnesses, tuple(witnesses))


def has_secret_state(diag: Diagnoser) -> bool:
    return any(classify(q) is Classification.SECRET for q in diag.states)


def is_diagnosable(system: System) -> bool:
    """Twin-plant test: diagnosable iff the verifier has no uncertain cycle."""
    from .verifier import build_observer, build_verifier, classify_cycles

    require_valid(system)
    cycles = classify_cycles(build_verifier(build_observer(system, check=False)))
    return not cycles[Classification.UNCERTAIN]
