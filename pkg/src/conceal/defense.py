"""Defensive functions, the defensive verifier and the E-verifier.

A defender sits between the system and the eavesdropper.  For each observed
event ``t`` it may replace it (``t/o``), delete it (``t/eps``) or insert one
event before it (``t/et``), subject to a per-event :class:`DefenseSpec`.
The E-verifier pairs the real verifier state with the faked one and supports
a polynomial necessary check, a fixpoint pruning, a sufficient check and a
belief-indexed strategy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .automata import System, check_event_name, project
from .diagnoser import Classification, build_diagnoser, classify
from .errors import InvalidSystem, NoFeasibleAction, NotEnforceable, SecretInitial, UnknownEvent
from .verifier import SafeLasso, Verifier, VerifierState, classify_pair, find_safe_lasso, verifier_of

EPS = "eps"
REPLACE = "replace"
DELETE = "delete"
INSERT = "insert"

_SPEC_KEYS = ("replacements", "insertions", "deletions")


@dataclass(frozen=True, order=True)
class DefensiveAction:
    """One manipulation of one observed event."""

    observed: str
    kind: str
    event: Optional[str] = None

    def __post_init__(self):
        if self.kind not in (REPLACE, DELETE, INSERT):
            raise ValueError("unknown action kind %r" % (self.kind,))
        if (self.kind == DELETE) != (self.event is None):
            raise ValueError("delete takes no event; replace and insert need one")

    def __str__(self):
        if self.kind == REPLACE:
            return "%s/%s" % (self.observed, self.event)
        if self.kind == DELETE:
            return "%s/%s" % (self.observed, EPS)
        return "%s/%s%s" % (self.observed, self.event, self.observed)

    @property
    def emitted(self):
        """What the eavesdropper sees for this action."""
        if self.kind == REPLACE:
            return (self.event,)
        if self.kind == DELETE:
            return ()
        return (self.event, self.observed)

    @classmethod
    def replace(cls, t, o):
        return cls(t, REPLACE, o)

    @classmethod
    def delete(cls, t):
        return cls(t, DELETE)

    @classmethod
    def insert(cls, t, e):
        return cls(t, INSERT, e)


def action_key(action):
    return str(action)


def defensive_projection(actions) -> list:
    out = []
    for action in actions:
        out.extend(action.emitted)
    return out


@dataclass(frozen=True)
class DefenseSpec:
    """Allowed manipulations per observable event.

    ``replacements[t]`` lists events ``t`` may be replaced by (include ``t``
    itself to allow passing it through); ``deletions`` lists events that may
    be dropped; ``insertions[t]`` lists events that may be inserted before
    ``t``.
    """

    replacements: dict = field(default_factory=dict)
    insertions: dict = field(default_factory=dict)
    deletions: frozenset = frozenset()

    def __post_init__(self):
        reps = {t: frozenset(v) for t, v in self.replacements.items() if v}
        ins = {t: frozenset(v) for t, v in self.insertions.items() if v}
        object.__setattr__(self, "replacements", reps)
        object.__setattr__(self, "insertions", ins)
        object.__setattr__(self, "deletions", frozenset(self.deletions))
        for t in self.events_mentioned():
            check_event_name(t)

    def events_mentioned(self):
        names = set(self.replacements) | set(self.insertions) | set(self.deletions)
        for values in list(self.replacements.values()) + list(self.insertions.values()):
            names |= values
        return names

    def check(self, system: System):
        """Raise :class:`UnknownEvent` if the spec names a non-observable event."""
        stray = sorted(self.events_mentioned() - system.observable)
        if stray:
            raise UnknownEvent("defense spec uses non-observable events: %s" % ", ".join(stray))
        return self

    @classmethod
    def unconstrained(cls, observable):
        observable = frozenset(observable)
        return cls(
            {t: observable for t in observable},
            {t: observable for t in observable},
            observable,
        )

    @classmethod
    def identity(cls, observable):
        return cls({t: {t} for t in observable}, {}, frozenset())

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise InvalidSystem("defense JSON must be an object")
        unknown = set(data) - set(_SPEC_KEYS)
        if unknown:
            raise InvalidSystem("unknown keys in defense JSON: %s" % sorted(unknown))
        try:
            return cls(
                {t: frozenset(v) for t, v in data.get("replacements", {}).items()},
                {t: frozenset(v) for t, v in data.get("insertions", {}).items()},
                frozenset(data.get("deletions", [])),
            )
        except (AttributeError, TypeError) as exc:
            raise InvalidSystem("malformed defense JSON: %s" % exc) from exc

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSystem("malformed defense JSON: %s" % exc) from exc
        return cls.from_dict(data)

    def to_dict(self):
        return {
            "replacements": {t: sorted(v) for t, v in sorted(self.replacements.items())},
            "insertions": {t: sorted(v) for t, v in sorted(self.insertions.items())},
            "deletions": sorted(self.deletions),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)


def load_defense(path):
    with open(path, encoding="utf-8") as fh:
        return DefenseSpec.from_json(fh.read())


def actions_for(spec: DefenseSpec, t: str, observable=None) -> tuple:
    """``D(t)``: every allowed action for observed event ``t``, sorted by rendering."""
    if observable is not None and t not in observable:
        raise UnknownEvent("event %r is not observable" % (t,))
    actions = [DefensiveAction.replace(t, o) for o in spec.replacements.get(t, ())]
    if t in spec.deletions:
        actions.append(DefensiveAction.delete(t))
    actions.extend(DefensiveAction.insert(t, e) for e in spec.insertions.get(t, ()))
    return tuple(sorted(actions, key=action_key))


# -- defensive verifier ----------------------------------------------------


def _safe(states):
    return tuple(v for v in states if classify_pair(v) is not Classification.SECRET)


def defensive_step(verifier: Verifier, state, action):
    """Non-Secret verifier states the eavesdropper may be in after ``action``."""
    if action.kind == DELETE:
        return (state,)
    if action.kind == REPLACE:
        return _safe(verifier.step(state, action.event))
    landed = set()
    for mid in verifier.step(state, action.event):
        landed.update(verifier.step(mid, action.observed))
    return _safe(sorted(landed, key=VerifierState.sort_key))


@dataclass(frozen=True)
class DefensiveVerifier:
    states: tuple
    initial: VerifierState
    transitions: dict
    actions: tuple

    def step(self, state, action):
        return self.transitions.get((state, action), ())

    def enabled(self, state):
        return tuple(a for a in self.actions if (state, a) in self.transitions)


def all_actions(spec, events):
    return tuple(a for t in sorted(events) for a in actions_for(spec, t))


def build_defensive_verifier(verifier: Verifier, spec: DefenseSpec) -> DefensiveVerifier:
    if classify_pair(verifier.initial) is Classification.SECRET:
        raise SecretInitial("verifier initial state %s is Secret" % verifier.initial)
    actions = all_actions(spec, verifier.events)
    order = [verifier.initial]
    seen = {verifier.initial}
    transitions = {}
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for action in actions:
            succ = defensive_step(verifier, x, action)
            if not succ:
                continue
            transitions[(x, action)] = succ
            for y in succ:
                if y not in seen:
                    seen.add(y)
                    order.append(y)
    return DefensiveVerifier(tuple(order), verifier.initial, transitions, actions)


# -- E-verifier ------------------------------------------------------------


class EState(tuple):
    """``(real, fake)`` pair of verifier states."""

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
class EVerifier:
    """Product of the verifier (real behaviour) and defensive verifier (faked).

    ``transitions[(state, action)]`` lists successors.  A reduced E-verifier
    keeps a reference to the structure it was pruned from in ``parent`` and
    the removed states in ``pruned``; ``rounds`` records the states removed
    in each pruning round.
    """

    states: tuple
    initial: EState
    transitions: dict
    verifier: Verifier
    spec: DefenseSpec
    parent: Optional["EVerifier"] = None
    pruned: tuple = ()
    rounds: tuple = ()

    def step(self, state, action):
        return self.transitions.get((state, action), ())

    def feasible(self, state, t):
        """Actions for ``t`` with a non-empty successor set at ``state``."""
        return tuple(a for a in actions_for(self.spec, t) if (state, a) in self.transitions)

    def infeasible_events(self, state):
        """Events enabled at the real component with no feasible action."""
        return tuple(t for t in self.verifier.enabled(state.real) if not self.feasible(state, t))

    @property
    def empty(self):
        return not self.states


def build_e_verifier(verifier: Verifier, dverifier: DefensiveVerifier, spec: DefenseSpec) -> EVerifier:
    initial = EState(verifier.initial, dverifier.initial)
    order = [initial]
    seen = {initial}
    transitions = {}
    i = 0
    while i < len(order):
        xe = order[i]
        i += 1
        for t in verifier.enabled(xe.real):
            real = verifier.step(xe.real, t)
            for action in actions_for(spec, t):
                fake = dverifier.step(xe.fake, action)
                if not fake:
                    continue
                succ = tuple(EState(r, f) for r in real for f in fake)
                transitions[(xe, action)] = succ
                for y in succ:
                    if y not in seen:
                        seen.add(y)
                        order.append(y)
    return EVerifier(tuple(order), initial, transitions, verifier, spec)


def e_verifier_of(system: System, spec: DefenseSpec) -> EVerifier:
    spec.check(system)
    verifier = verifier_of(system)
    return build_e_verifier(verifier, build_defensive_verifier(verifier, spec), spec)


@dataclass(frozen=True)
class NecessaryVerdict:
    """Outcome of the co-relative legality scan.

    ``holds`` is False when some verifier state has an event no co-relative
    state can answer; ``witness`` is the first such ``(state, event)`` and
    ``illegal`` lists all of them.
    """

    holds: bool
    witness: Optional[tuple] = None
    illegal: tuple = ()

    @property
    def verdict(self):
        return "MaybeEnforceable" if self.holds else "NotEnforceable"

    def to_dict(self):
        out = {"verdict": self.verdict, "enforceable": None if self.holds else False}
        if self.witness is not None:
            out["witness"] = {"state": str(self.witness[0]), "event": self.witness[1]}
        out["illegal"] = [{"state": str(v), "event": t} for v, t in self.illegal]
        return out


def check_necessary(ev: EVerifier, verifier: Optional[Verifier] = None) -> NecessaryVerdict:
    verifier = verifier or ev.verifier
    corelative = {}
    for xe in ev.states:
        corelative.setdefault(xe.real, []).append(xe)
    illegal = []
    for xv in verifier.states:
        members = corelative.get(xv, ())
        for t in verifier.enabled(xv):
            if not any(ev.feasible(m, t) for m in members):
                illegal.append((xv, t))
    if illegal:
        return NecessaryVerdict(False, illegal[0], tuple(illegal))
    return NecessaryVerdict(True)


def _forbidden(ev, state, alive):
    for t in ev.verifier.enabled(state.real):
        if not any(
            any(y in alive for y in ev.step(state, a)) for a in actions_for(ev.spec, t)
        ):
            return True
    return False


def reduce_e_verifier(ev: EVerifier, verifier=None, spec=None) -> EVerifier:
    """Iteratively remove E-forbidden states; keep the accessible survivors."""
    alive = set(ev.states)
    removed = []
    rounds = []
    while True:
        marked = [xe for xe in ev.states if xe in alive and _forbidden(ev, xe, alive)]
        if not marked:
            break
        alive.difference_update(marked)
        removed.extend(marked)
        rounds.append(tuple(marked))

    transitions = {}
    order = []
    if ev.initial in alive:
        order = [ev.initial]
        seen = {ev.initial}
        i = 0
        while i < len(order):
            xe = order[i]
            i += 1
            for t in ev.verifier.enabled(xe.real):
                for a in actions_for(ev.spec, t):
                    succ = tuple(y for y in ev.step(xe, a) if y in alive)
                    if not succ:
                        continue
                    transitions[(xe, a)] = succ
                    for y in succ:
                        if y not in seen:
                            seen.add(y)
                            order.append(y)
    return EVerifier(
        tuple(order), ev.initial, transitions, ev.verifier, ev.spec,
        parent=ev, pruned=tuple(removed), rounds=tuple(rounds),
    )


@dataclass(frozen=True)
class SufficientVerdict:
    enforceable: bool
    missing: tuple = ()
    initial_survives: bool = True

    @property
    def verdict(self):
        return "Enforceable" if self.enforceable else "Inconclusive"

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "enforceable": True if self.enforceable else None,
            "missing": [str(v) for v in self.missing],
            "initial_survives": self.initial_survives,
        }


def check_sufficient(reduced: EVerifier, verifier: Optional[Verifier] = None) -> SufficientVerdict:
    """Every verifier state must pair with some surviving state, initial included."""
    verifier = verifier or reduced.verifier
    covered = {xe.real for xe in reduced.states}
    missing = tuple(v for v in verifier.states if v not in covered)
    survives = reduced.initial in set(reduced.states)
    return SufficientVerdict(not missing and survives, missing, survives)


# -- strategies ------------------------------------------------------------

UNCONSTRAINED = "unconstrained"
CONSTRAINED = "constrained"
IDENTITY = "identity"
EXACT = "exact"


@dataclass(frozen=True)
class Strategy:
    """A causal obfuscation policy.

    ``unconstrained``: the i-th observed event is replaced by the i-th event
    of ``stem . cycle^omega``.  ``constrained``: ``policy[(belief, t)]`` gives
    the action and next belief, beliefs being sets of reduced E-verifier
    states.  ``identity`` passes everything through (a baseline).
    ``exact`` uses the same table over singleton beliefs of a reduced
    E-diagnoser (see :func:`conceal.exact.extract_exact_strategy`).
    """

    mode: str
    lasso: Optional[SafeLasso] = None
    reduced: Optional[EVerifier] = None
    policy: dict = field(default_factory=dict)
    beliefs: tuple = ()

    @property
    def initial_belief(self):
        if self.reduced is None:
            return None
        return frozenset([self.reduced.initial])

    def table(self):
        """Policy rows ``(belief, event, action)`` in exploration order."""
        rows = []
        index = {b: i for i, b in enumerate(self.beliefs)}
        for (belief, t), (action, _) in sorted(
            self.policy.items(), key=lambda kv: (index[kv[0][0]], kv[0][1])
        ):
            rows.append((belief, t, action))
        return rows

    def to_dict(self):
        if self.mode == UNCONSTRAINED:
            return {"mode": self.mode, "safe_lasso": self.lasso.to_dict()}
        rows = [
            {
                "belief": sorted(str(m) for m in belief),
                "event": t,
                "action": str(action),
            }
            for belief, t, action in self.table()
        ]
        return {"mode": self.mode, "policy": rows}

    @classmethod
    def identity(cls):
        return cls(IDENTITY)


def _belief_step(reduced, belief, t):
    for action in actions_for(reduced.spec, t):
        nxt = set()
        for m in belief:
            nxt.update(reduced.step(m, action))
        if nxt:
            return action, frozenset(nxt)
    return None


def _ordered_belief(belief):
    return sorted(belief, key=lambda m: (m.real.sort_key(), m.fake.sort_key()))


def extract_strategy(source) -> Strategy:
    """Build a strategy from a safe lasso or from a reduced E-verifier."""
    if isinstance(source, SafeLasso):
        return Strategy(UNCONSTRAINED, lasso=source)
    if isinstance(source, EVerifier):
        if source.parent is None:
            raise NotEnforceable("strategy extraction needs a reduced E-verifier")
        verdict = check_sufficient(source)
        if not verdict.enforceable:
            raise NotEnforceable(
                "sufficient condition fails (missing %s)" % ", ".join(str(v) for v in verdict.missing)
            )
        initial = frozenset([source.initial])
        beliefs = [initial]
        seen = {initial}
        policy = {}
        i = 0
        while i < len(beliefs):
            belief = beliefs[i]
            i += 1
            events = sorted({t for m in belief for t in source.verifier.enabled(m.real)})
            for t in events:
                chosen = _belief_step(source, belief, t)
                if chosen is None:
                    continue
                policy[(belief, t)] = chosen
                if chosen[1] not in seen:
                    seen.add(chosen[1])
                    beliefs.append(chosen[1])
        return Strategy(CONSTRAINED, reduced=source, policy=policy, beliefs=tuple(beliefs))
    if source is None:
        raise NotEnforceable("no safe lasso: unconstrained defense cannot conceal the secret")
    raise TypeError("cannot extract a strategy from %r" % (source,))


@dataclass
class DefenseSession:
    """Mutable replay state for one strategy; owned by a single caller."""

    strategy: Strategy
    belief: Optional[frozenset] = None
    position: int = 0
    observed: list = field(default_factory=list)
    actions: list = field(default_factory=list)
    emitted: list = field(default_factory=list)

    @classmethod
    def start(cls, strategy):
        return cls(strategy, belief=strategy.initial_belief)


def defend_step(session: DefenseSession, observed: str):
    """Answer one observed event; returns ``(emitted_chunk, session)``."""
    strategy = session.strategy
    if strategy.mode == UNCONSTRAINED:
        action = DefensiveAction.replace(observed, strategy.lasso.event_at(session.position))
    elif strategy.mode == IDENTITY:
        action = DefensiveAction.replace(observed, observed)
    else:
        entry = strategy.policy.get((session.belief, observed))
        if entry is None and strategy.mode == CONSTRAINED:
            entry = _belief_step(strategy.reduced, session.belief, observed)
        if entry is None:
            raise NoFeasibleAction(observed)
        action, session.belief = entry
    chunk = list(action.emitted)
    session.position += 1
    session.observed.append(observed)
    session.actions.append(action)
    session.emitted.extend(chunk)
    return chunk, session


@dataclass(frozen=True)
class SimulationReport:
    emitted: tuple
    eavesdropper_states: tuple
    certain_secret: bool
    consistent: bool
    actions: tuple = ()

    def to_dict(self):
        return {
            "emitted": list(self.emitted),
            "actions": [str(a) for a in self.actions],
            "eavesdropper_states": [str(q) for q in self.eavesdropper_states],
            "certain_secret": self.certain_secret,
            "consistent": self.consistent,
        }


def in_language(system, trace):
    here = {system.initial}
    for event in trace:
        system.events.check(event)
        here = {y for x in here for y in system.successors(x, event)}
        if not here:
            return False
    return True


def simulate_defense(system: System, strategy: Strategy, trace, diagnoser=None) -> SimulationReport:
    """Run the strategy over ``P(trace)`` and replay the output to the eavesdropper."""
    trace = list(trace)
    if not in_language(system, trace):
        raise ValueError("trace %r is not a string of the system" % (trace,))
    session = DefenseSession.start(strategy)
    for t in project(trace, system.events):
        defend_step(session, t)
    diag = diagnoser or build_diagnoser(system)
    state = diag.initial
    visited = [state]
    consistent = True
    for e in session.emitted:
        state = diag.step(state, e)
        if state is None:
            consistent = False
            break
        visited.append(state)
    certain = any(classify(q) is Classification.SECRET for q in visited)
    return SimulationReport(
        tuple(session.emitted), tuple(visited), certain, consistent, tuple(session.actions)
    )


def unconstrained_strategy(system: System) -> Strategy:
    return extract_strategy(find_safe_lasso(verifier_of(system)))


def constrained_strategy(system: System, spec: DefenseSpec) -> Strategy:
    return extract_strategy(reduce_e_verifier(e_verifier_of(system, spec)))
