"""Small graph helpers shared by the decision procedures."""

from __future__ import annotations

from typing import Callable, Hashable, Iterable


def strongly_connected_components(
    nodes: Iterable[Hashable], successors: Callable[[Hashable], Iterable[Hashable]]
) -> list[list[Hashable]]:
    """Iterative Tarjan; components are returned in reverse topological order."""
    index: dict = {}
    lowlink: dict = {}
    on_stack: set = set()
    stack: list = []
    result: list[list] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = lowlink[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(successors(succ))))
                    advanced = True
                    break
                if succ in on_stack:
                    if index[succ] < lowlink[node]:
                        lowlink[node] = index[succ]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if lowlink[node] < lowlink[parent]:
                    lowlink[parent] = lowlink[node]
            if lowlink[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                result.append(comp)
    return result


def bfs_reachable(start, successors) -> set:
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for succ in successors(node):
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        frontier = nxt
    return seen


def bfs_path(start, goals: set, successors_with_label):
    """Shortest labelled path from start to any goal; None when unreachable.

    successors_with_label(node) yields (succ, label); the returned path is the
    list of labels along the way.
    """
    if start in goals:
        return start, []
    parent = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for succ, label in successors_with_label(node):
                if succ in parent:
                    continue
                parent[succ] = (node, label)
                if succ in goals:
                    labels = []
                    cur = succ
                    while parent[cur] is not None:
                        prev, lab = parent[cur]
                        labels.append(lab)
                        cur = prev
                    labels.reverse()
                    return succ, labels
                nxt.append(succ)
        frontier = nxt
    return None
