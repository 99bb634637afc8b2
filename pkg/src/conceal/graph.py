"""Small graph routines: strongly connected components and shortest words.

Graphs are given implicitly by a node sequence and a ``successors`` callable
returning ``(label, node)`` pairs.  Callers are responsible for yielding
successors in a deterministic order; every routine here preserves that order
so results are reproducible.
"""

from collections import deque


def strongly_connected_components(nodes, successors):
    """Tarjan's algorithm, iterative.

    ``successors(node)`` yields ``(label, node)`` pairs; labels are ignored.
    Components are returned in the order Tarjan completes them, each as a
    list of nodes in discovery order.
    """
    index = {}
    lowlink = {}
    on_stack = set()
    stack = []
    components = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter([w for _, w in successors(root)]))]
        while work:
            node, children = work[-1]
            advanced = False
            for child in children:
                if child not in index:
                    index[child] = lowlink[child] = counter
                    counter += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter([w for _, w in successors(child)])))
                    advanced = True
                    break
                if child in on_stack:
                    lowlink[node] = min(lowlink[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[node])
            if lowlink[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                component.reverse()
                components.append(component)
    return components


def cyclic_components(nodes, successors):
    """SCCs that contain at least one cycle (self-loops included)."""
    result = []
    for component in strongly_connected_components(nodes, successors):
        if len(component) > 1:
            result.append(component)
            continue
        (node,) = component
        if any(w == node for _, w in successors(node)):
            result.append(component)
    return result


def shortest_word(start, successors, is_target):
    """Breadth-first search for the shortest, then lexicographically least, word.

    Successors must be yielded sorted by label (and by node within a label)
    for the lexicographic guarantee to hold.  Returns ``(word, path)`` where
    ``path`` lists the visited nodes including ``start``, or ``None``.
    """
    if is_target(start):
        return [], [start]
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for label, child in successors(node):
            if child in parent:
                continue
            parent[child] = (node, label)
            if is_target(child):
                return _unwind(parent, child)
            queue.append(child)
    return None


def shortest_cycle(start, successors):
    """Shortest (then lexicographically least) non-empty word from ``start`` back to itself."""
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for label, child in successors(node):
            if child == start:
                word, path = _unwind(parent, node)
                return word + [label], path + [start]
            if child in parent:
                continue
            parent[child] = (node, label)
            queue.append(child)
    return None


def _unwind(parent, node):
    word = []
    path = [node]
    while parent[node] is not None:
        node, label = parent[node]
        word.append(label)
        path.append(node)
    word.reverse()
    path.reverse()
    return word, path
