"""E-chains, elementary E-homotopy moves, and the edge-path encoding of
chains as words in the presentation of the Rips 2-skeleton.

Generator ``k`` is the k-th non-tree edge ``(u, v)`` (``u < v``, edges
sorted), read positively when traversed ``u -> v``. Tree edges and
diagonal steps encode to the identity.
"""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

from .groups import Presentation
from .rips import RipsGraph, SpanningTree, non_tree_edges, rips_triangles
from .space import Entourage
from .words import Word, cyclic_reduce, free_reduce, inverse

Chain = tuple[int, ...]


class HomotopyError(ValueError):
    pass


def is_echain(chain: Sequence[int], E: Entourage) -> bool:
    if not chain:
        return False
    return all(E.contains(a, b) for a, b in zip(chain, chain[1:]))


def elementary_move(chain: Sequence[int], E: Entourage, position: int, op: str,
                    point: int | None = None) -> Chain:
    """Insert ``point`` before index ``position``, or delete the point at it.

    Endpoints never move: insertions need ``1 <= position <= len - 1`` and
    deletions ``1 <= position <= len - 2``. The result must be an E-chain.
    """
    chain = tuple(chain)
    if op == "insert":
        if point is None:
            raise HomotopyError("insert needs a point")
        if not 1 <= position <= len(chain) - 1:
            raise HomotopyError(f"cannot insert at endpoint position {position}")
        out = chain[:position] + (point,) + chain[position:]
    elif op == "delete":
        if not 1 <= position <= len(chain) - 2:
            raise HomotopyError(f"cannot delete endpoint position {position}")
        out = chain[:position] + chain[position + 1:]
    else:
        raise HomotopyError(f"unknown move {op!r}")
    if not is_echain(out, E):
        raise HomotopyError("result is not an E-chain")
    return out


def concat(c1: Sequence[int], c2: Sequence[int]) -> Chain:
    if c1[-1] != c2[0]:
        raise HomotopyError("chains do not meet")
    return tuple(c1) + tuple(c2[1:])


class RipsEncoding:
    """Words for chains at one scale, relative to a fixed spanning tree."""

    def __init__(self, graph: RipsGraph, tree: SpanningTree):
        self.graph = graph
        self.tree = tree
        self.entourage = graph.entourage

    @cached_property
    def generators(self) -> tuple[tuple[int, int], ...]:
        return tuple(non_tree_edges(self.graph, self.tree))

    @cached_property
    def _gen_of(self) -> dict[tuple[int, int], int]:
        return {e: k + 1 for k, e in enumerate(self.generators)}

    def step(self, a: int, b: int) -> Word:
        if a == b:
            return ()
        if a < b:
            g = self._gen_of.get((a, b))
            return () if g is None else (g,)
        g = self._gen_of.get((b, a))
        return () if g is None else (-g,)

    def word(self, chain: Sequence[int], based: bool = True) -> Word:
        chain = tuple(chain)
        if not chain:
            raise HomotopyError("empty chain")
        if based and chain[0] != self.tree.root:
            raise HomotopyError(f"chain starts at {chain[0]}, not the basepoint {self.tree.root}")
        inside = self.tree.parent
        for x in chain:
            if x not in inside:
                raise HomotopyError(f"chain leaves the basepoint component at {x}")
        if not is_echain(chain, self.entourage):
            raise HomotopyError("not an E-chain")
        out: list[int] = []
        for a, b in zip(chain, chain[1:]):
            out.extend(self.step(a, b))
        return free_reduce(out)

    def chain(self, word: Sequence[int]) -> Chain:
        """A based loop whose word is ``free_reduce(word)``."""
        out = [self.tree.root]
        for x in word:
            u, v = self.generators[abs(x) - 1]
            if x < 0:
                u, v = v, u
            out.extend(self.tree.path_from_root(u)[1:])
            out.append(v)
            out.extend(reversed(self.tree.path_from_root(v)[:-1]))
        return _squash(out)

    def path_to(self, x: int) -> Chain:
        return tuple(self.tree.path_from_root(x))

    @cached_property
    def presentation(self) -> Presentation:
        inside = self.tree.parent
        rels = []
        for u, v, w in rips_triangles(self.graph):
            if u not in inside:
                continue
            r = cyclic_reduce(self.step(u, v) + self.step(v, w) + self.step(w, u))
            if r:
                rels.append(r)
        labels = {k + 1: e for k, e in enumerate(self.generators)}
        return Presentation(
            tuple(range(1, len(self.generators) + 1)),
            tuple(rels),
            labels=labels,
            provenance={"scale": self.entourage.provenance, "root": self.tree.root},
        )


def _squash(chain: list[int]) -> Chain:
    out: list[int] = []
    for x in chain:
        if not out or out[-1] != x:
            out.append(x)
    # cancel immediate backtracks a,b,a -> a (an E-homotopy)
    stack: list[int] = []
    for x in out:
        if len(stack) >= 2 and stack[-2] == x:
            stack.pop()
        elif stack and stack[-1] == x:
            continue
        else:
            stack.append(x)
    return tuple(stack)


def chain_to_word(chain: Sequence[int], tree: SpanningTree, graph: RipsGraph, based: bool = True) -> Word:
    return RipsEncoding(graph, tree).word(chain, based=based)


def word_to_chain(word: Sequence[int], tree: SpanningTree, graph: RipsGraph) -> Chain:
    return RipsEncoding(graph, tree).chain(word)


def presentation(graph: RipsGraph, tree: SpanningTree) -> Presentation:
    return RipsEncoding(graph, tree).presentation


def reverse(chain: Sequence[int]) -> Chain:
    return tuple(reversed(tuple(chain)))


__all__ = [
    "Chain", "HomotopyError", "RipsEncoding", "chain_to_word", "concat", "elementary_move",
    "inverse", "is_echain", "presentation", "reverse", "word_to_chain",
]
