"""Exception hierarchy shared by every construction."""


class ConcealError(Exception):
    """Base class for all errors raised by :mod:`conceal`."""


class UnknownEvent(ConcealError, KeyError):
    """An event name is not part of the relevant event set."""

    def __str__(self):
        return Exception.__str__(self)


class UnobservableCycle(ConcealError):
    """The unobservable subgraph of a system contains a cycle."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("cycle of unobservable events through states %s" % self.cycle)


class InvalidSystem(ConcealError):
    """A system is malformed or violates the modelling assumptions."""

    def __init__(self, message, findings=()):
        self.findings = list(findings)
        super().__init__(message)


class SecretInitial(ConcealError):
    """A defensive structure was requested from a Secret initial state."""


class NotEnforceable(ConcealError):
    """A strategy was requested where none can be extracted."""


class NoFeasibleAction(ConcealError):
    """A defense session has no protecting action for the observed event."""

    def __init__(self, event, message=None):
        self.event = event
        super().__init__(message or "no feasible defensive action for event %r" % event)


class HorizonTooLarge(ConcealError, ValueError):
    """A brute-force oracle was asked for an intractable horizon."""


class SizeLimitExceeded(ConcealError):
    """An exponential construction was refused by the size guard."""
