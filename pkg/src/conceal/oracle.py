"""Deliberately naive reference checks.

Nothing here uses the diagnoser, verifier or E-structures: label sets come
from enumerating system strings, and the defense game walks raw sets of
``(state, secret_seen)`` pairs.  The results are used to certify the
constructions on small instances.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .automata import N, S, require_valid
from .defense import actions_for
from .diagnoser import build_diagnoser
from .errors import HorizonTooLarge

MAX_LABEL_HORIZON = 10
MAX_GAME_HORIZON = 12


def strings_by_observation(system, horizon):
    """Yield ``(string, contains_secret)`` for every string whose projection has length <= horizon."""
    stack = [((), frozenset([system.initial]), 0, False)]
    while stack:
        word, here, seen_obs, secret = stack.pop()
        yield word, secret
        moves = {}
        for x in here:
            for event, y in system.outgoing(x):
                moves.setdefault(event, set()).add(y)
        for event in sorted(moves):
            observable = event in system.observable
            if observable and seen_obs == horizon:
                continue
            stack.append(
                (
                    word + (event,),
                    frozenset(moves[event]),
                    seen_obs + observable,
                    secret or event in system.secret,
                )
            )


def brute_label_sets(system, horizon):
    """Map each observation ``w`` (``|w| <= horizon``) to the labels of strings projecting to it."""
    if horizon > MAX_LABEL_HORIZON:
        raise HorizonTooLarge("horizon %d exceeds %d" % (horizon, MAX_LABEL_HORIZON))
    require_valid(system)
    table = {}
    for word, secret in strings_by_observation(system, horizon):
        w = tuple(e for e in word if e in system.observable)
        table.setdefault(w, set()).add(S if secret else N)
    return {w: frozenset(labels) for w, labels in table.items()}


@dataclass(frozen=True)
class ConcealabilityReport:
    horizon: int
    agree: bool
    revealing: tuple
    diagnoser_secret: tuple
    language_mismatch: tuple = ()
    label_mismatch: tuple = ()

    def to_dict(self):
        return {
            "horizon": self.horizon,
            "agree": self.agree,
            "revealing": [list(w) for w in self.revealing],
            "diagnoser_secret": [list(w) for w in self.diagnoser_secret],
            "language_mismatch": [list(w) for w in self.language_mismatch],
            "label_mismatch": [list(w) for w in self.label_mismatch],
        }


def _diagnoser_words(diag, horizon):
    """Every accepted observation up to ``horizon`` with its final diagnoser state."""
    out = {(): diag.initial}
    frontier = [((), diag.initial)]
    for _ in range(horizon):
        nxt = []
        for w, q in frontier:
            for e, r in diag.out(q):
                out[w + (e,)] = r
                nxt.append((w + (e,), r))
        frontier = nxt
    return out


def brute_concealability(system, horizon, diagnoser=None):
    """Compare exhaustive s-revealing observations with the diagnoser's Secret states."""
    labels = brute_label_sets(system, horizon)
    diag = diagnoser or build_diagnoser(system)
    words = _diagnoser_words(diag, horizon)
    revealing = sorted(w for w, ls in labels.items() if ls == {S})
    secret = sorted(w for w, q in words.items() if {m.label for m in q} == {S})
    language = sorted(set(labels) ^ set(words))
    label_mismatch = sorted(
        w for w in set(labels) & set(words) if labels[w] != {m.label for m in words[w]}
    )
    agree = revealing == secret and not language and not label_mismatch
    return ConcealabilityReport(
        horizon, agree, tuple(revealing), tuple(secret), tuple(language), tuple(label_mismatch)
    )


def brute_diagnosable(system, horizon, delay):
    """Bounded reading of diagnosability.

    Returns False when some string contains the secret, has at least
    ``delay`` observable events after its first secret, projects to an
    observation of length <= ``horizon``, and shares that observation with
    a secret-free string.
    """
    require_valid(system)
    if horizon > MAX_LABEL_HORIZON:
        raise HorizonTooLarge("horizon %d exceeds %d" % (horizon, MAX_LABEL_HORIZON))
    clean = set()
    late = set()
    for word, secret in strings_by_observation(system, horizon):
        w = tuple(e for e in word if e in system.observable)
        if not secret:
            clean.add(w)
            continue
        first = next(i for i, e in enumerate(word) if e in system.secret)
        after = sum(1 for e in word[first:] if e in system.observable)
        if after >= delay:
            late.add(w)
    return not (late & clean)


# -- defense game ------------------------------------------------------------


class GameVerdict(str, Enum):
    WIN = "win"
    LOSE = "lose"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


def _close(system, cfg):
    seen = set(cfg)
    stack = list(cfg)
    while stack:
        x, secret = stack.pop()
        for event, y in system.outgoing(x):
            if event in system.unobservable:
                item = (y, secret or event in system.secret)
                if item not in seen:
                    seen.add(item)
                    stack.append(item)
    return frozenset(seen)


def _fire(system, cfg, event):
    landed = {(y, secret) for x, secret in cfg for y in system.successors(x, event)}
    return _close(system, landed) if landed else frozenset()


def _harmless(cfg):
    return bool(cfg) and any(not secret for _, secret in cfg)


def _emit(system, cfg, word):
    for event in word:
        cfg = _fire(system, cfg, event)
        if not _harmless(cfg):
            return None
    return cfg


def brute_defense_game(system, spec, horizon):
    """Solve the defender's safety game on configurations explored up to ``horizon`` rounds.

    Each round the system produces an observable event and the defender
    answers with an allowed action; the defender loses as soon as the
    eavesdropper's view is inconsistent or certain of the secret.  When the
    explored configuration graph closes within the horizon the verdict is
    exact; otherwise frontier configurations are treated optimistically
    (to prove LOSE) and pessimistically (to prove WIN), and UNKNOWN is
    returned when the two disagree.
    """
    if horizon > MAX_GAME_HORIZON:
        raise HorizonTooLarge("horizon %d exceeds %d" % (horizon, MAX_GAME_HORIZON))
    require_valid(system)
    start = _close(system, {(system.initial, False)})
    root = (start, start)
    depth = {root: 0}
    queue = deque([root])
    moves = {}
    while queue:
        node = queue.popleft()
        if depth[node] >= horizon:
            continue
        real, fake = node
        options = []
        events = sorted({e for x, _ in real for e, _ in system.outgoing(x) if e in system.observable})
        for t in events:
            nreal = _fire(system, real, t)
            answers = []
            for action in actions_for(spec, t):
                nfake = _emit(system, fake, action.emitted)
                if nfake is None:
                    continue
                child = (nreal, nfake)
                answers.append(child)
                if child not in depth:
                    depth[child] = depth[node] + 1
                    queue.append(child)
            options.append(answers)
        moves[node] = options

    def solve(frontier_wins):
        winning = set(depth) if frontier_wins else set(moves)
        changed = True
        while changed:
            changed = False
            for node, options in moves.items():
                if node not in winning:
                    continue
                if any(not any(c in winning for c in answers) for answers in options):
                    winning.discard(node)
                    changed = True
        return root in winning

    if len(moves) == len(depth):
        return GameVerdict.WIN if solve(True) else GameVerdict.LOSE
    if not solve(True):
        return GameVerdict.LOSE
    if solve(False):
        return GameVerdict.WIN
    return GameVerdict.UNKNOWN
