"""Connectivity outside a subpresheaf.

Two elements of ``L \\ K`` are adjacent when one is ``f . x`` of the other
for some arrow ``f``. Paths may change sort.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any

from .errors import BaseNotClosed, ElementInBase, ElementNotInAmbient
from .presheaf import Elem, Presheaf, SubPresheaf, fmt


class DisjointSet:
    def __init__(self) -> None:
        self.parent: dict[Any, Any] = {}

    def find(self, x: Any) -> Any:
        self.parent.setdefault(x, x)
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: Any, y: Any) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


@dataclass(frozen=True)
class ConnectivityReport:
    base: SubPresheaf
    components: tuple[tuple[Elem, ...], ...]
    edges: tuple[tuple[Elem, str, Elem], ...]

    def component_of(self, x: Elem) -> tuple[Elem, ...]:
        for comp in self.components:
            if x in comp:
                return comp
        raise ElementInBase(f"{fmt(x)} lies in the base")

    def closure(self, elems) -> set[Elem]:
        """Union of the classes of ``elems`` (which must lie outside the base)."""
        out: set[Elem] = set()
        for x in elems:
            out.update(self.component_of(x))
        return out

    def partition(self) -> frozenset[frozenset[Elem]]:
        return frozenset(frozenset(c) for c in self.components)

    def to_json(self) -> dict[str, Any]:
        return {
            "components": [[fmt(x) for x in c] for c in self.components],
            "edges": [[fmt(x), f, fmt(y)] for x, f, y in self.edges],
        }


def _outside_edges(L: Presheaf, K: SubPresheaf) -> list[tuple[Elem, str, Elem]]:
    edges = []
    for x in K.complement():
        for f in L.cat.arrows_from(x[0]):
            if L.cat.is_identity(f):
                continue
            y = L.act(f, x)
            if y != x and y not in K:
                edges.append((x, f, y))
    return edges


def _check_base(L: Presheaf, K: SubPresheaf) -> None:
    if K.ambient != L:
        raise BaseNotClosed("base is not a subpresheaf of L")
    if not K.is_closed():
        raise BaseNotClosed("base is not closed under the action")


def components_outside(L: Presheaf, K: SubPresheaf) -> ConnectivityReport:
    _check_base(L, K)
    outside = K.complement()
    ds = DisjointSet()
    for x in outside:
        ds.find(x)
    edges = _outside_edges(L, K)
    for x, _, y in edges:
        ds.union(x, y)
    classes: dict[Elem, list[Elem]] = {}
    for x in outside:
        classes.setdefault(ds.find(x), []).append(x)
    # classes listed by their first element in canonical order
    comps = tuple(tuple(c) for c in classes.values())
    return ConnectivityReport(K, comps, tuple(edges))


def adjacency(L: Presheaf, K: SubPresheaf) -> dict[Elem, set[Elem]]:
    adj: dict[Elem, set[Elem]] = {x: set() for x in K.complement()}
    for x, _, y in _outside_edges(L, K):
        adj[x].add(y)
        adj[y].add(x)
    return adj


def connected_outside(
    L: Presheaf, K: SubPresheaf, a: Elem, b: Elem, adj: dict[Elem, set[Elem]] | None = None
) -> tuple[bool, list[Elem] | None]:
    """Breadth-first shortest path from ``a`` to ``b`` avoiding ``K``."""
    _check_base(L, K)
    for x in (a, b):
        if x not in L:
            raise ElementNotInAmbient(f"{x!r} is not an element of L")
        if x in K:
            raise ElementInBase(f"{fmt(x)} lies in the base")
    if adj is None:
        adj = adjacency(L, K)
    prev: dict[Elem, Elem | None] = {a: None}
    queue = deque([a])
    order = {x: i for i, x in enumerate(L.elements())}
    while queue:
        x = queue.popleft()
        if x == b:
            path = [x]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return True, path[::-1]
        for y in sorted(adj[x], key=order.__getitem__):
            if y not in prev:
                prev[y] = x
                queue.append(y)
    return False, None


def distances_from(adj: dict[Elem, set[Elem]], a: Elem) -> dict[Elem, int]:
    dist = {a: 0}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist
