"""System model: partially observed NFAs with a secret event set.

A :class:`System` is an NFA with a single initial state whose events are split
into observable and unobservable ones; secret events are unobservable.  The
helpers here (projection, labelled unobservable reach, bounded language
enumeration) are shared by every later construction.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import InvalidSystem, UnknownEvent, UnobservableCycle
from .graph import cyclic_components, shortest_cycle

N = "N"
S = "S"

_EVENT_RE = re.compile(r"^[^\s/]+$")
_SYSTEM_KEYS = ("states", "initial", "observable", "unobservable", "secret", "transitions")


def natural_key(name):
    """Sort key ordering ``"2"`` before ``"10"`` while staying total on mixed names."""
    parts = re.split(r"(\d+)", str(name))
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p != "")


class LabeledState(NamedTuple):
    """A system state paired with its secret label ``N`` or ``S``."""

    state: str
    label: str

    def __str__(self):
        return "%s%s" % (self.state, self.label)

    def sort_key(self):
        return natural_key(self.state), self.label


def check_event_name(name):
    if not isinstance(name, str) or not _EVENT_RE.match(name):
        raise InvalidSystem("invalid event name %r (non-empty, no whitespace, no '/')" % (name,))
    return name


@dataclass(frozen=True)
class EventPartition:
    observable: frozenset
    unobservable: frozenset
    secret: frozenset

    def __post_init__(self):
        object.__setattr__(self, "observable", frozenset(self.observable))
        object.__setattr__(self, "unobservable", frozenset(self.unobservable))
        object.__setattr__(self, "secret", frozenset(self.secret))
        for name in self.observable | self.unobservable | self.secret:
            check_event_name(name)
        both = self.observable & self.unobservable
        if both:
            raise InvalidSystem("events both observable and unobservable: %s" % sorted(both))
        stray = self.secret - self.events
        if stray:
            raise InvalidSystem("secret events not in the event set: %s" % sorted(stray))

    @property
    def events(self):
        return self.observable | self.unobservable

    def check(self, event):
        if event not in self.observable and event not in self.unobservable:
            raise UnknownEvent("unknown event %r" % (event,))
        return event


@dataclass(frozen=True)
class System:
    """Nondeterministic automaton ``(states, initial, events, transitions)``.

    Transitions are ``(src, event, dst)`` triples; several triples may share
    ``(src, event)``.  Instances are immutable and hashable.
    """

    states: tuple
    initial: str
    events: EventPartition
    transitions: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        states = tuple(sorted({str(x) for x in self.states}, key=natural_key))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "initial", str(self.initial))
        object.__setattr__(
            self, "transitions", frozenset((str(a), e, str(b)) for a, e, b in self.transitions)
        )
        known = set(states)
        if self.initial not in known:
            raise InvalidSystem("initial state %r is not a state" % self.initial)
        for src, event, dst in self.transitions:
            if src not in known or dst not in known:
                raise InvalidSystem("transition %r uses an unknown state" % ((src, event, dst),))
            if event not in self.events.events:
                raise InvalidSystem("transition %r uses an unknown event" % ((src, event, dst),))

    @property
    def observable(self):
        return self.events.observable

    @property
    def unobservable(self):
        return self.events.unobservable

    @property
    def secret(self):
        return self.events.secret

    @cached_property
    def sorted_observable(self):
        return tuple(sorted(self.events.observable))

    @cached_property
    def _succ(self):
        table = {}
        for src, event, dst in self.transitions:
            table.setdefault((src, event), set()).add(dst)
        return {k: tuple(sorted(v, key=natural_key)) for k, v in table.items()}

    @cached_property
    def _out(self):
        table = {x: [] for x in self.states}
        for src, event, dst in sorted(self.transitions, key=lambda t: (natural_key(t[0]), t[1], natural_key(t[2]))):
            table[src].append((event, dst))
        return {k: tuple(v) for k, v in table.items()}

    @cached_property
    def unobservable_cyclic_states(self):
        """States lying on some cycle of unobservable transitions."""
        succ = _unobservable_successors(self)
        return frozenset(x for c in cyclic_components(self.states, succ) for x in c)

    def successors(self, state, event):
        """``f(state, event)`` as a sorted tuple (empty when undefined)."""
        return self._succ.get((state, event), ())

    def outgoing(self, state):
        """All ``(event, dst)`` pairs leaving ``state``, sorted."""
        return self._out[state]

    def reachable_states(self):
        seen = {self.initial}
        stack = [self.initial]
        while stack:
            x = stack.pop()
            for _, y in self.outgoing(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return tuple(sorted(seen, key=natural_key))

    # -- interchange -----------------------------------------------------

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise InvalidSystem("system JSON must be an object")
        unknown = set(data) - set(_SYSTEM_KEYS)
        if unknown:
            raise InvalidSystem("unknown keys in system JSON: %s" % sorted(unknown))
        missing = [k for k in _SYSTEM_KEYS if k not in data]
        if missing:
            raise InvalidSystem("missing keys in system JSON: %s" % missing)
        transitions = []
        for item in data["transitions"]:
            if not isinstance(item, (list, tuple)) or len(item) != 3:
                raise InvalidSystem("transition must be a [src, event, dst] triple: %r" % (item,))
            transitions.append(tuple(item))
        partition = EventPartition(data["observable"], data["unobservable"], data["secret"])
        return cls(tuple(data["states"]), data["initial"], partition, frozenset(transitions))

    def to_dict(self):
        return {
            "states": list(self.states),
            "initial": self.initial,
            "observable": sorted(self.observable),
            "unobservable": sorted(self.unobservable),
            "secret": sorted(self.secret),
            "transitions": [
                list(t)
                for t in sorted(self.transitions, key=lambda t: (natural_key(t[0]), t[1], natural_key(t[2])))
            ],
        }

    @classmethod
    def from_json(cls, text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSystem("malformed system JSON: %s" % exc) from exc
        return cls.from_dict(data)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def without(self, src, event, dst):
        """Copy of the system with one transition removed."""
        return System(self.states, self.initial, self.events, self.transitions - {(src, event, dst)})


def load_system(path):
    with open(path, encoding="utf-8") as fh:
        return System.from_json(fh.read())


# -- validation ------------------------------------------------------------


@dataclass(frozen=True)
class ValidationReport:
    live: bool
    unobservable_cycle_free: bool
    secrets_unobservable: bool
    violations: tuple = ()

    @property
    def ok(self):
        return self.live and self.unobservable_cycle_free and self.secrets_unobservable

    def to_dict(self):
        return {
            "ok": self.ok,
            "live": self.live,
            "unobservable_cycle_free": self.unobservable_cycle_free,
            "secrets_unobservable": self.secrets_unobservable,
            "violations": list(self.violations),
        }


def _unobservable_successors(system):
    def succ(x):
        return [(e, y) for e, y in system.outgoing(x) if e in system.unobservable]

    return succ


def find_unobservable_cycle(system):
    """A list of states forming an unobservable cycle, or ``None``."""
    succ = _unobservable_successors(system)
    components = cyclic_components(system.states, succ)
    if not components:
        return None
    component = min(components, key=lambda c: min(natural_key(x) for x in c))
    start = min(component, key=natural_key)
    members = set(component)

    def inside(x):
        return [(e, y) for e, y in succ(x) if y in members]

    _, path = shortest_cycle(start, inside)
    return path[:-1]


def validate(system: System) -> ValidationReport:
    """Check liveness (reachable states only), unobservable acyclicity and secret placement."""
    violations = []
    dead = [x for x in system.reachable_states() if not system.outgoing(x)]
    for x in dead:
        violations.append("state %s is reachable and has no outgoing transition" % x)
    cycle = find_unobservable_cycle(system)
    if cycle is not None:
        violations.append("unobservable cycle through states [%s]" % ", ".join(cycle))
    exposed = sorted(system.secret - system.unobservable)
    if exposed:
        violations.append("secret events are observable: %s" % ", ".join(exposed))
    return ValidationReport(
        live=not dead,
        unobservable_cycle_free=cycle is None,
        secrets_unobservable=not exposed,
        violations=tuple(violations),
    )


def require_valid(system):
    report = validate(system)
    if not report.ok:
        raise InvalidSystem("system violates modelling assumptions", report.violations)
    return system


# -- projection and reach ------------------------------------------------


def project(sequence: Iterable[str], partition: EventPartition) -> list:
    """Natural projection: keep the observable events, in order."""
    out = []
    for event in sequence:
        partition.check(event)
        if event in partition.observable:
            out.append(event)
    return out


def labeled_unobservable_reach(system: System, start: LabeledState) -> frozenset:
    """All ``(x, l)`` reachable from ``start`` by unobservable strings, labels propagated.

    The label turns ``S`` once a secret event is crossed and stays ``S``.
    """
    start = LabeledState(*start)
    if start.state not in system.states:
        raise InvalidSystem("unknown state %r" % start.state)
    seen = {start}
    stack = [start]
    while stack:
        x, label = stack.pop()
        for event, y in system.outgoing(x):
            if event not in system.unobservable:
                continue
            nxt = LabeledState(y, S if label == S or event in system.secret else N)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    cyclic = system.unobservable_cyclic_states
    if cyclic and any(ls.state in cyclic for ls in seen):
        raise UnobservableCycle(find_unobservable_cycle(system))
    return frozenset(seen)


def unobservable_closure(system, labeled_states):
    out = set()
    for ls in labeled_states:
        out |= labeled_unobservable_reach(system, ls)
    return frozenset(out)


def observable_step(system, labeled_states, event):
    """Fire ``event`` from each labelled state (no closure before or after)."""
    out = set()
    for x, label in labeled_states:
        for y in system.successors(x, event):
            out.add(LabeledState(y, label))
    return frozenset(out)


def enabled_observable(system: System, states) -> frozenset:
    """Observable events ``e`` with a path ``u e`` (``u`` unobservable) from some state."""
    out = set()
    for x in states:
        for y, _ in labeled_unobservable_reach(system, LabeledState(x, N)):
            for event, _ in system.outgoing(y):
                if event in system.observable:
                    out.add(event)
    return frozenset(out)


def enumerate_strings(system: System, max_len: int) -> set:
    """Every string of ``L(G)`` up to ``max_len`` events, flagged for containing a secret."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    result = set()
    stack = [((), frozenset([system.initial]), False)]
    while stack:
        word, here, secret = stack.pop()
        result.add((word, secret))
        if len(word) == max_len:
            continue
        moves = {}
        for x in here:
            for event, y in system.outgoing(x):
                moves.setdefault(event, set()).add(y)
        for event, targets in moves.items():
            stack.append((word + (event,), frozenset(targets), secret or event in system.secret))
    return result
