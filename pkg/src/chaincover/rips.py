"""Rips 2-skeleta and BFS spanning trees."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .space import Entourage, FiniteSpace, SpaceError


@dataclass(frozen=True, eq=False)
class RipsGraph:
    entourage: Entourage
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def adjacency(self):
        return self.entourage.adjacency

    def triangles(self) -> Iterator[tuple[int, int, int]]:
        return rips_triangles(self)

    def triangle_count(self) -> int:
        return sum(1 for _ in rips_triangles(self))


def rips_graph(space: FiniteSpace, E: Entourage) -> RipsGraph:
    if space.n != E.n:
        raise SpaceError("entourage belongs to a different space")
    return RipsGraph(E, tuple(range(space.n)), tuple(E.sorted_pairs()))


def rips_triangles(graph: RipsGraph) -> Iterator[tuple[int, int, int]]:
    """Triples ``u < v < w`` spanning a 2-simplex, in lexicographic order."""
    adj = graph.adjacency
    higher = [set(b for b in adj[a] if b > a) for a in range(len(adj))]
    for u, v in graph.edges:
        common = higher[u] & higher[v]
        for w in sorted(common):
            yield (u, v, w)


@dataclass(frozen=True, eq=False)
class SpanningTree:
    root: int
    parent: dict[int, int | None]
    order: tuple[int, ...]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.parent)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (min(v, p), max(v, p)) for v, p in self.parent.items() if p is not None
        )

    def path_from_root(self, v: int) -> list[int]:
        """Tree path ``root, ..., v``."""
        if v not in self.parent:
            raise SpaceError(f"vertex {v} is outside the tree's component")
        path = [v]
        while self.parent[path[-1]] is not None:
            path.append(self.parent[path[-1]])
        path.reverse()
        return path


def spanning_tree(graph: RipsGraph, basepoint: int, rank: Sequence[int] | None = None) -> SpanningTree:
    """BFS tree of the basepoint's component.

    Neighbours are visited in ascending id order, or ascending ``rank[id]``
    when a tie-break ranking is supplied.
    """
    if not 0 <= basepoint < len(graph.vertices):
        raise SpaceError(f"unknown basepoint {basepoint}")
    key = None if rank is None else (lambda x: rank[x])
    parent: dict[int, int | None] = {basepoint: None}
    order = [basepoint]
    queue = deque([basepoint])
    while queue:
        a = queue.popleft()
        nbrs = graph.adjacency[a] if key is None else sorted(graph.adjacency[a], key=key)
        for b in nbrs:
            if b not in parent:
                parent[b] = a
                order.append(b)
                queue.append(b)
    return SpanningTree(basepoint, parent, tuple(order))


def non_tree_edges(graph: RipsGraph, tree: SpanningTree) -> list[tuple[int, int]]:
    """Edges of the tree's component that are not tree edges, sorted."""
    inside = tree.parent
    t_edges = tree.edges
    return [e for e in graph.edges if e[0] in inside and e not in t_edges]
