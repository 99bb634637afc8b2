"""Replacing events freely: find a safe lasso and replay a few traces through it."""

from conceal.defense import Strategy, simulate_defense, unconstrained_strategy
from conceal.fixtures import fig2_system
from conceal.verifier import find_safe_lasso, verifier_of

system = fig2_system()
verifier = verifier_of(system)
print("verifier has %d states" % len(verifier.states))

lasso = find_safe_lasso(verifier)
print("safe lasso: stem=%s cycle=%s" % (list(lasso.stem), list(lasso.cycle)))

strategy = unconstrained_strategy(system)
for trace in (["s", "d", "a", "a"], ["c", "d", "s", "b", "d"], ["c", "d", "d"]):
    plain = simulate_defense(system, Strategy.identity(), trace)
    defended = simulate_defense(system, strategy, trace)
    print(
        "%-11s  undefended %-8s reveals=%-5s  defended %-8s reveals=%s"
        % ("".join(trace), "".join(plain.emitted), plain.certain_secret,
           "".join(defended.emitted), defended.certain_secret)
    )
