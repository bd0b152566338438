from __future__ import annotations

from typing import Hashable, Iterable, Iterator, Mapping


def strongly_connected_components(
    vertices: Iterable[Hashable], edges: Mapping[Hashable, Iterable[Hashable]]
) -> Iterator[frozenset]:
    """Tarjan's algorithm, iterative so deep class graphs don't hit the recursion limit.

    Every vertex appears in exactly one yielded component; components come
    out in reverse topological order.
    """
    index: dict = {}
    low: dict = {}
    on_stack: set = set()
    stack: list = []
    counter = 0

    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(sorted(edges.get(root, ()))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(edges.get(w, ())))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                yield frozenset(comp)


def component_sizes(vertices: Iterable[Hashable], edges: Mapping[Hashable, Iterable[Hashable]]) -> dict:
    sizes = {}
    for comp in strongly_connected_components(list(vertices), edges):
        for v in comp:
            sizes[v] = len(comp)
    return sizes
