"""Strongly connected components and reachability on small integer graphs."""

from __future__ import annotations

from typing import Callable, Iterable, Sequence


def tarjan(n: int, successors: Callable[[int], Iterable[int]]) -> list[list[int]]:
    """Iterative Tarjan over vertices ``0..n-1``.

    Components are returned in topological order of the condensation: if some
    vertex of ``C`` reaches a vertex of ``D`` (and ``C != D``) then ``C`` is
    listed before ``D``.  Vertices inside a component are sorted.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    out: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comp.sort()
                out.append(comp)
    # Tarjan emits sinks first.
    out.reverse()
    return out


def component_map(n: int, comps: Sequence[Sequence[int]]) -> list[int]:
    comp_of = [0] * n
    for cid, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = cid
    return comp_of


def condensation_reach(
    comps: Sequence[Sequence[int]],
    comp_of: Sequence[int],
    successors: Callable[[int], Iterable[int]],
) -> list[int]:
    """Bitmask per component of the components reachable from it (itself included).

    ``comps`` must be in topological order, as produced by :func:`tarjan`.
    """
    reach = [0] * len(comps)
    for cid in range(len(comps) - 1, -1, -1):
        mask = 1 << cid
        for v in comps[cid]:
            for w in successors(v):
                d = comp_of[w]
                if d != cid:
                    mask |= reach[d]
        reach[cid] = mask
    return reach
