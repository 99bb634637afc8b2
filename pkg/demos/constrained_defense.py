"""Constrained defenses: the polynomial checks against the exact diagnoser-based check."""

from conceal.defense import (
    check_necessary,
    check_sufficient,
    constrained_strategy,
    e_verifier_of,
    reduce_e_verifier,
    simulate_defense,
)
from conceal.exact import exact_strategy, is_c_enforceable_exact, reduce_e_diagnoser, e_diagnoser_of
from conceal.fixtures import ex5_defense, fig2_system, unconstrained_defense

system = fig2_system()

for label, spec in [("per-event limits", ex5_defense()), ("everything allowed", unconstrained_defense(system))]:
    ev = e_verifier_of(system, spec)
    necessary = check_necessary(ev)
    reduced = reduce_e_verifier(ev)
    sufficient = check_sufficient(reduced)
    print("== %s" % label)
    print("  E-verifier states: %d, after pruning: %d" % (len(ev.states), len(reduced.states)))
    print("  necessary: %s%s" % (
        necessary.verdict,
        "" if necessary.holds else " at %s on %s" % (necessary.witness[0], necessary.witness[1]),
    ))
    print("  sufficient: %s, missing %s" % (sufficient.verdict, [str(v) for v in sufficient.missing]))
    print("  exact: %s" % is_c_enforceable_exact(system, spec))

ed = reduce_e_diagnoser(e_diagnoser_of(system, ex5_defense()))
print("pruned E-diagnoser states, in order:", [str(x) for x in ed.pruned])

spec = unconstrained_defense(system)
for make in (constrained_strategy, exact_strategy):
    strategy = make(system, spec)
    report = simulate_defense(system, strategy, ["s", "d", "a", "a"])
    print("%-20s emits %s (reveals=%s)" % (make.__name__, "".join(report.emitted), report.certain_secret))
