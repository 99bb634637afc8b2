"""Is the secret event hidden from an eavesdropper that sees only observable events?

Builds the diagnoser of the seven-state fixture, lists its Secret cycles,
and compares the verdict with the brute-force enumeration.
"""

from conceal.diagnoser import build_diagnoser, classify, find_secret_cycles, is_concealable, is_diagnosable
from conceal.fixtures import fig1_loop, fig1_noloop, fig2_system
from conceal.oracle import brute_concealability

system = fig2_system()
diag = build_diagnoser(system)

print("diagnoser states:")
for q in diag.states:
    moves = ", ".join("%s->%s" % (e, r) for e, r in diag.out(q))
    print("  %-12s %-9s %s" % (q, classify(q), moves))

# every Secret cycle is an observation pattern that gives the secret away forever
for w in find_secret_cycles(diag):
    print("secret cycle at %s: observe %s then repeat %s" % (w.states[0], "".join(w.stem), "".join(w.cycle)))

print("concealable:", is_concealable(system).concealable)

report = brute_concealability(system, 4)
print("oracle agrees up to 4 observations:", report.agree)
print("shortest revealing observations:", ["".join(w) for w in report.revealing[:4]])

# the two small systems differ by one self-loop; neither lets an observer diagnose the secret
for make in (fig1_noloop, fig1_loop):
    g = make()
    print("%-12s concealable=%s diagnosable=%s" % (make.__name__, is_concealable(g).concealable, is_diagnosable(g)))
