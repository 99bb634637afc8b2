"""Where the polynomial checks and the exact check disagree.

In this system the defender must answer the first ``a`` before it can
tell whether the secret happened.  Passing ``a`` through is exposed by a
later ``c``; faking ``d`` cannot be followed by ``b``.
"""

from conceal.defense import (
    check_necessary,
    check_sufficient,
    constrained_strategy,
    e_verifier_of,
    reduce_e_verifier,
    simulate_defense,
)
from conceal.errors import NoFeasibleAction
from conceal.exact import is_c_enforceable_exact
from conceal.fixtures import gap_defense, gap_system
from conceal.oracle import brute_defense_game

system, spec = gap_system(), gap_defense()
ev = e_verifier_of(system, spec)
print("necessary check:", check_necessary(ev).verdict)
print("sufficient check:", check_sufficient(reduce_e_verifier(ev)).verdict)
print("exact check:", is_c_enforceable_exact(system, spec))
print("brute-force game:", brute_defense_game(system, spec, 10))

strategy = constrained_strategy(system, spec)
try:
    simulate_defense(system, strategy, ["s", "a", "c"])
except NoFeasibleAction as exc:
    print("strategy from the reduced E-verifier fails on s a c:", exc)
