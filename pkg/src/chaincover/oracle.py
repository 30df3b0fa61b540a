"""Brute-force E-homotopy on tiny spaces.

The oracle explores the graph whose nodes are E-chains and whose edges are
single insertions or deletions of interior points, restricted to chains of
bounded length. It is sound for equivalence only: a bounded search that
fails proves nothing. Lengths count steps, so ``(x0, ..., xn)`` has length n.

Besides interior insertions and deletions, a repeated endpoint may be
dropped or added (``(x, x, ...) ~ (x, ...)``): the endpoint does not move,
and without this ``(x)`` and ``(x, x)`` would be unrelated.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .homotopy import Chain, elementary_move, is_echain
from .space import Entourage, FiniteSpace, UnionFind

MAX_POINTS = 8
MAX_LENGTH = 6


class OracleError(ValueError):
    pass


@dataclass
class OracleVerdict:
    equivalent: bool
    max_length: int
    moves: list[tuple[int, str, int | None]] = field(default_factory=list)

    def __str__(self):
        if self.equivalent:
            return f"Equivalent ({len(self.moves)} moves)"
        return f"NotWithinSlack (length <= {self.max_length})"

    def replay(self, chain: Sequence[int], E: Entourage) -> Chain:
        out = tuple(chain)
        for pos, op, pt in self.moves:
            out = apply_move(out, E, pos, op, pt)
        return out


def apply_move(chain: Sequence[int], E: Entourage, position: int, op: str, point=None) -> Chain:
    """:func:`elementary_move` extended by repeated-endpoint moves."""
    chain = tuple(chain)
    last = len(chain) - 1 if op == "delete" else len(chain)
    if position in (0, last):
        if op == "delete":
            nbr = chain[1] if position == 0 else chain[-2]
            if len(chain) < 2 or nbr != chain[position]:
                raise OracleError("only a repeated endpoint can be dropped")
            return chain[1:] if position == 0 else chain[:-1]
        end = chain[0] if position == 0 else chain[-1]
        if point != end:
            raise OracleError("only the endpoint itself can be added at an end")
        return (end,) + chain if position == 0 else chain + (end,)
    return elementary_move(chain, E, position, op, point)


def _moves(chain: Chain, E: Entourage, points: range, max_len: int):
    n = len(chain)
    if n >= 2 and chain[0] == chain[1]:
        yield chain[1:], (0, "delete", None)
    for i in range(1, n - 1):
        if E.contains(chain[i - 1], chain[i + 1]):
            yield chain[:i] + chain[i + 1:], (i, "delete", None)
    if n >= 2 and chain[-1] == chain[-2]:
        yield chain[:-1], (n - 1, "delete", None)
    if n - 1 < max_len:
        adj = E.adjacency
        yield (chain[0],) + chain, (0, "insert", chain[0])
        yield chain + (chain[-1],), (n, "insert", chain[-1])
        for i in range(1, n):
            a, b = chain[i - 1], chain[i]
            cands = (set(adj[a]) | {a}) & (set(adj[b]) | {b})
            for p in sorted(cands):
                yield chain[:i] + (p,) + chain[i:], (i, "insert", p)


def oracle_homotopic(space: FiniteSpace, E: Entourage, chain1: Sequence[int], chain2: Sequence[int],
                     slack: int) -> OracleVerdict:
    """Breadth-first search for an E-homotopy from ``chain1`` to ``chain2``
    through chains of length at most ``max(len1, len2) + slack``."""
    c1, c2 = tuple(chain1), tuple(chain2)
    if slack < 0:
        raise OracleError("slack must be nonnegative")
    if (c1[0], c1[-1]) != (c2[0], c2[-1]):
        raise OracleError("endpoint mismatch")
    for c in (c1, c2):
        if not is_echain(c, E):
            raise OracleError(f"{c} is not an E-chain")
    max_len = max(len(c1), len(c2)) - 1 + slack
    prev: dict[Chain, tuple[Chain, tuple] | None] = {c1: None}
    queue = deque([c1])
    while queue:
        c = queue.popleft()
        if c == c2:
            moves = []
            while prev[c] is not None:
                c, mv = prev[c]
                moves.append(mv)
            moves.reverse()
            return OracleVerdict(True, max_len, moves)
        for d, mv in _moves(c, E, space.ids, max_len):
            if d not in prev:
                prev[d] = (c, mv)
                queue.append(d)
    return OracleVerdict(False, max_len)


def based_chains(space: FiniteSpace, E: Entourage, max_len: int) -> list[Chain]:
    """Every E-chain from the basepoint with at most ``max_len`` steps."""
    adj = [tuple(sorted(set(E.adjacency[x]) | {x})) for x in space.ids]
    out = []
    layer = [(space.basepoint,)]
    for _ in range(max_len + 1):
        out.extend(layer)
        layer = [c + (y,) for c in layer for y in adj[c[-1]]]
    return out


def enumerate_classes(space: FiniteSpace, E: Entourage, maxlen: int, slack: int,
                      max_points: int = MAX_POINTS, max_length: int = MAX_LENGTH) -> list[list[Chain]]:
    """Partition the based chains of length ``<= maxlen`` into E-homotopy
    classes found through chains of length ``<= maxlen + slack``.

    Every insertion is the reverse of a deletion from a longer chain, so
    joining each chain to its single-deletion results covers the whole
    bounded move graph. Classes are sorted; chains inside a class are sorted
    by length then lexicographically.
    """
    if space.n > max_points or maxlen > max_length:
        raise OracleError(f"guard exceeded: {space.n} points (max {max_points}), "
                          f"maxlen {maxlen} (max {max_length})")
    if slack < 0:
        raise OracleError("slack must be nonnegative")
    chains = based_chains(space, E, maxlen + slack)
    ids = {c: k for k, c in enumerate(chains)}
    uf = UnionFind(len(chains))
    contains = E.contains
    for c, k in ids.items():
        n = len(c)
        for i in range(1, n - 1):
            if contains(c[i - 1], c[i + 1]):
                uf.union(k, ids[c[:i] + c[i + 1:]])
        if n >= 2 and c[-1] == c[-2]:
            uf.union(k, ids[c[:-1]])
    blocks: dict[int, list[Chain]] = {}
    for c in chains:
        if len(c) - 1 <= maxlen:
            blocks.setdefault(uf.find(ids[c]), []).append(c)
    classes = [sorted(b, key=lambda c: (len(c), c)) for b in blocks.values()]
    classes.sort(key=lambda b: (b[0][-1], len(b[0]), b[0]))
    return classes
