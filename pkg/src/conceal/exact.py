"""Exact enforceability through the defensive diagnoser and E-diagnoser.

Both components of an E-diagnoser state are diagnoser states, so the
structure is deterministic and the fixpoint pruning decides the safety game
exactly.  The price is the exponential size of the diagnoser.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .automata import System, require_valid
from .defense import DELETE, EXACT, REPLACE, DefenseSpec, Strategy, actions_for, all_actions
from .diagnoser import Classification, Diagnoser, DiagnoserState, build_diagnoser, classify
from .errors import NotEnforceable, SecretInitial


def _not_secret(q):
    return q is not None and classify(q) is not Classification.SECRET


def diagnoser_defensive_step(diag: Diagnoser, q, action) -> Optional[DiagnoserState]:
    if action.kind == DELETE:
        return q
    if action.kind == REPLACE:
        nxt = diag.step(q, action.event)
    else:
        mid = diag.step(q, action.event)
        nxt = diag.step(mid, action.observed) if mid is not None else None
    return nxt if _not_secret(nxt) else None


@dataclass(frozen=True)
class DefensiveDiagnoser:
    states: tuple
    initial: DiagnoserState
    transitions: dict
    actions: tuple

    def step(self, state, action):
        return self.transitions.get((state, action))

    def enabled(self, state):
        return tuple(a for a in self.actions if (state, a) in self.transitions)


def build_defensive_diagnoser(diag: Diagnoser, spec: DefenseSpec) -> DefensiveDiagnoser:
    if classify(diag.initial) is Classification.SECRET:
        raise SecretInitial("diagnoser initial state %s is Secret" % diag.initial)
    actions = all_actions(spec, diag.events)
    order = [diag.initial]
    seen = {diag.initial}
    transitions = {}
    i = 0
    while i < len(order):
        q = order[i]
        i += 1
        for action in actions:
            nxt = diagnoser_defensive_step(diag, q, action)
            if nxt is None:
                continue
            transitions[(q, action)] = nxt
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
    return DefensiveDiagnoser(tuple(order), diag.initial, transitions, actions)


class EDState(tuple):
    def __new__(cls, real, fake):
        return super().__new__(cls, (real, fake))

    @property
    def real(self):
        return self[0]

    @property
    def fake(self):
        return self[1]

    def __str__(self):
        return "(%s,%s)" % (self[0], self[1])


@dataclass(frozen=True)
class EDiagnoser:
    states: tuple
    initial: EDState
    transitions: dict
    diagnoser: Diagnoser
    spec: DefenseSpec
    parent: Optional["EDiagnoser"] = None
    pruned: tuple = ()

    def step(self, state, action):
        return self.transitions.get((state, action))

    def feasible(self, state, t):
        return tuple(a for a in actions_for(self.spec, t) if (state, a) in self.transitions)

    def infeasible_events(self, state):
        return tuple(t for t in self.diagnoser.enabled(state.real) if not self.feasible(state, t))

    @property
    def empty(self):
        return not self.states


def build_e_diagnoser(diag: Diagnoser, ddiag: DefensiveDiagnoser, spec: DefenseSpec) -> EDiagnoser:
    initial = EDState(diag.initial, ddiag.initial)
    order = [initial]
    seen = {initial}
    transitions = {}
    i = 0
    while i < len(order):
        xe = order[i]
        i += 1
        for t in diag.enabled(xe.real):
            real = diag.step(xe.real, t)
            for action in actions_for(spec, t):
                fake = ddiag.step(xe.fake, action)
                if fake is None:
                    continue
                nxt = EDState(real, fake)
                transitions[(xe, action)] = nxt
                if nxt not in seen:
                    seen.add(nxt)
                    order.append(nxt)
    return EDiagnoser(tuple(order), initial, transitions, diag, spec)


def reduce_e_diagnoser(ed: EDiagnoser) -> EDiagnoser:
    """Remove states where some real event has no surviving action, to a fixpoint."""
    alive = set(ed.states)
    removed = []
    changed = True
    while changed:
        changed = False
        for xe in ed.states:
            if xe not in alive:
                continue
            for t in ed.diagnoser.enabled(xe.real):
                if not any(ed.step(xe, a) in alive for a in actions_for(ed.spec, t)):
                    alive.discard(xe)
                    removed.append(xe)
                    changed = True
                    break
    transitions = {}
    order = []
    if ed.initial in alive:
        order = [ed.initial]
        seen = {ed.initial}
        i = 0
        while i < len(order):
            xe = order[i]
            i += 1
            for t in ed.diagnoser.enabled(xe.real):
                for a in actions_for(ed.spec, t):
                    nxt = ed.step(xe, a)
                    if nxt is None or nxt not in alive:
                        continue
                    transitions[(xe, a)] = nxt
                    if nxt not in seen:
                        seen.add(nxt)
                        order.append(nxt)
    return EDiagnoser(tuple(order), ed.initial, transitions, ed.diagnoser, ed.spec, parent=ed, pruned=tuple(removed))


def e_diagnoser_of(system: System, spec: DefenseSpec) -> EDiagnoser:
    spec.check(system)
    diag = build_diagnoser(system)
    return build_e_diagnoser(diag, build_defensive_diagnoser(diag, spec), spec)


def is_c_enforceable_exact(system: System, spec: DefenseSpec) -> bool:
    """True iff the initial E-diagnoser state survives the pruning."""
    require_valid(system)
    return not reduce_e_diagnoser(e_diagnoser_of(system, spec)).empty


def extract_exact_strategy(reduced: EDiagnoser) -> Strategy:
    """Policy over the surviving E-diagnoser states.

    Each belief is a single state here, so answering every event with the
    least action whose successor survived keeps the play inside the
    winning region.
    """
    if reduced.parent is None:
        raise NotEnforceable("strategy extraction needs a reduced E-diagnoser")
    if reduced.empty:
        raise NotEnforceable("the reduced E-diagnoser is empty")
    policy = {}
    beliefs = []
    for xe in reduced.states:
        belief = frozenset([xe])
        beliefs.append(belief)
        for t in reduced.diagnoser.enabled(xe.real):
            for a in actions_for(reduced.spec, t):
                nxt = reduced.step(xe, a)
                if nxt is not None:
                    policy[(belief, t)] = (a, frozenset([nxt]))
                    break
    return Strategy(EXACT, reduced=reduced, policy=policy, beliefs=tuple(beliefs))


def exact_strategy(system: System, spec: DefenseSpec) -> Strategy:
    require_valid(system)
    return extract_exact_strategy(reduce_e_diagnoser(e_diagnoser_of(system, spec)))
