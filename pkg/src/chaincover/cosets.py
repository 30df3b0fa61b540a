"""Todd-Coxeter coset enumeration (HLT strategy, no lookahead)."""

from __future__ import annotations

from typing import Sequence


class EnumerationAborted(RuntimeError):
    pass


class CosetTable:
    """Cosets of the subgroup generated by ``subgroup`` in ``<gens | rels>``.

    Generators are ``1..ngens``; column ``2*(g-1)`` holds ``g`` and
    ``2*(g-1)+1`` its inverse. Coincidences are tracked with a union-find
    forest, so table entries are canonicalised on read.
    """

    def __init__(self, ngens: int, rels: Sequence[Sequence[int]], subgroup=(),
                 max_cosets: int = 100_000, max_steps: int = 1_000_000):
        self.ngens = ngens
        self.rels = [tuple(r) for r in rels if r]
        self.subgroup = [tuple(w) for w in subgroup if w]
        self.max_cosets = max_cosets
        self.max_steps = max_steps
        self.steps = 0
        self.table: list[list[int | None]] = []
        self.parent: list[int] = []
        self.live = 0
        self.complete = False

    @staticmethod
    def col(x: int) -> int:
        return 2 * (abs(x) - 1) + (x < 0)

    def find(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def get(self, c: int, x: int) -> int | None:
        d = self.table[c][self.col(x)]
        return None if d is None else self.find(d)

    def _tick(self):
        self.steps += 1
        if self.steps > self.max_steps:
            raise EnumerationAborted("step budget exhausted")

    def _new(self) -> int:
        self._tick()
        if self.live >= self.max_cosets:
            raise EnumerationAborted("coset limit reached")
        self.table.append([None] * (2 * self.ngens))
        self.parent.append(len(self.parent))
        self.live += 1
        return len(self.table) - 1

    def _link(self, c: int, x: int, d: int):
        self.table[c][self.col(x)] = d
        self.table[d][self.col(-x)] = c

    def _coincidence(self, a: int, b: int):
        queue = [(a, b)]
        while queue:
            a, b = queue.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            self._tick()
            self.parent[b] = a
            self.live -= 1
            row_a, row_b = self.table[a], self.table[b]
            for k in range(2 * self.ngens):
                nb = row_b[k]
                if nb is None:
                    continue
                na = row_a[k]
                if na is None:
                    row_a[k] = nb
                else:
                    queue.append((na, nb))

    def _scan_and_fill(self, c: int, word: tuple[int, ...]):
        f = b = c
        i, j = 0, len(word) - 1
        while True:
            while i <= j:
                nxt = self.get(f, word[i])
                if nxt is None:
                    break
                f = nxt
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i:
                nxt = self.get(b, -word[j])
                if nxt is None:
                    break
                b = nxt
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if i == j:
                self._tick()
                self._link(f, word[i], b)
                return
            self._link(f, word[i], self._new())

    def run(self) -> "CosetTable":
        """Enumerate; raises :class:`EnumerationAborted` when a limit is hit."""
        self._new()
        for w in self.subgroup:
            self._scan_and_fill(0, w)
        c = 0
        while c < len(self.table):
            if self.find(c) == c:
                for r in self.rels:
                    self._scan_and_fill(c, r)
                    if self.find(c) != c:
                        break
                if self.find(c) == c:
                    for g in range(1, self.ngens + 1):
                        for x in (g, -g):
                            if self.get(c, x) is None:
                                self._link(c, x, self._new())
            c += 1
        self.complete = True
        self._compact()
        return self

    def _compact(self):
        alive = [c for c in range(len(self.table)) if self.find(c) == c]
        index = {c: k for k, c in enumerate(alive)}
        self.perm = [
            [index[self.find(self.table[c][2 * (g - 1)])] for c in alive]
            for g in range(1, self.ngens + 1)
        ]
        self.inv_perm = []
        for p in self.perm:
            inv = [0] * len(p)
            for k, v in enumerate(p):
                inv[v] = k
            self.inv_perm.append(inv)

    @property
    def index(self) -> int:
        return len(self.perm[0]) if self.ngens else 1

    def act(self, word, start: int = 0) -> int:
        """Coset reached from ``start`` by right multiplication with ``word``."""
        if not self.complete:
            raise RuntimeError("enumeration has not completed")
        c = start
        for x in word:
            c = self.perm[x - 1][c] if x > 0 else self.inv_perm[-x - 1][c]
        return c


def enumerate_cosets(ngens, rels, subgroup=(), max_cosets=100_000, max_steps=1_000_000):
    """Completed table, or ``None`` if a limit was hit first."""
    table = CosetTable(ngens, rels, subgroup, max_cosets=max_cosets, max_steps=max_steps)
    try:
        return table.run()
    except EnumerationAborted:
        return None
