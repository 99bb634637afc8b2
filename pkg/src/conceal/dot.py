"""Graphviz DOT rendering of the constructions.

Nodes get canonical ids ``n0, n1, ...`` in the construction's discovery
order, and edges are sorted, so identical inputs give byte-identical text.
"""

from __future__ import annotations

from .defense import DefensiveVerifier, EVerifier
from .diagnoser import Classification, Diagnoser, classify
from .exact import DefensiveDiagnoser, EDiagnoser
from .verifier import Verifier

_STYLE = {
    Classification.SECRET: 'shape=doublecircle, style=filled, fillcolor="#d9d9d9"',
    Classification.UNCERTAIN: "shape=ellipse, style=dashed",
    Classification.NORMAL: "shape=ellipse",
}
_SINK = "infeasible"


def _quote(text):
    return '"%s"' % str(text).replace("\\", "\\\\").replace('"', '\\"')


def _edges(construction):
    """``(src, label, dst)`` triples of any construction."""
    # deterministic structures map to one state, the others to a tuple of states
    single = isinstance(construction, (Diagnoser, DefensiveDiagnoser, EDiagnoser))
    out = []
    for (src, label), dst in construction.transitions.items():
        for d in (dst,) if single else dst:
            out.append((src, str(label), d))
    return out


def _classification(construction, state):
    if isinstance(construction, (EVerifier, EDiagnoser)):
        state = state[0]
    return classify(state)


def _name(construction):
    return {
        Diagnoser: "diagnoser",
        Verifier: "verifier",
        DefensiveVerifier: "defensive_verifier",
        EVerifier: "e_verifier",
        DefensiveDiagnoser: "defensive_diagnoser",
        EDiagnoser: "e_diagnoser",
    }[type(construction)]


def export_dot(construction, show_infeasible=False, show_pruned=False):
    """Render ``construction`` as a DOT digraph.

    With ``show_pruned`` a reduced E-structure is drawn over its parent,
    the removed states and their edges in dashed red.  With
    ``show_infeasible`` each event without a feasible action at an
    E-structure state gets a dotted ``t/`` edge to a shared sink.
    """
    parent = getattr(construction, "parent", None)
    base = parent if show_pruned and parent is not None else construction
    kept = set(construction.states)
    states = list(base.states)
    if base is not construction:
        # survivors first in their own order, then the removed ones
        states = list(construction.states) + [x for x in base.states if x not in kept]
    ids = {x: "n%d" % i for i, x in enumerate(states)}

    name = _name(construction)
    if parent is not None:
        name = "reduced_" + name
    lines = ["digraph %s {" % name, "  rankdir=LR;"]
    if not states:
        lines.append("  // empty: the initial state was removed")
        lines.append("}")
        return "\n".join(lines) + "\n"

    lines.append('  start [shape=point, label=""];')
    for x in states:
        attrs = [_STYLE[_classification(construction, x)], "label=%s" % _quote(x)]
        if x not in kept:
            attrs = ['shape=ellipse, style=dashed, color=red, fontcolor=red', "label=%s" % _quote(x)]
        lines.append("  %s [%s];" % (ids[x], ", ".join(attrs)))
    if construction.initial in ids:
        lines.append("  start -> %s;" % ids[construction.initial])

    kept_edges = set(_edges(construction))
    edges = []
    for src, label, dst in _edges(base):
        if src not in ids or dst not in ids:
            continue
        style = ""
        if base is not construction and (src, label, dst) not in kept_edges:
            style = ", style=dashed, color=red"
        edges.append((int(ids[src][1:]), label, int(ids[dst][1:]), style))
    sink_used = False
    if show_infeasible and isinstance(construction, (EVerifier, EDiagnoser)):
        for x in states:
            owner = construction if x in kept else base
            for t in owner.infeasible_events(x):
                edges.append((int(ids[x][1:]), "%s/" % t, -1, ", style=dotted"))
                sink_used = True
    if sink_used:
        lines.append('  %s [shape=box, style=dotted, label="no action"];' % _SINK)
    for src, label, dst, style in sorted(edges):
        target = _SINK if dst == -1 else "n%d" % dst
        lines.append("  n%d -> %s [label=%s%s];" % (src, target, _quote(label), style))
    lines.append("}")
    return "\n".join(lines) + "\n"

