"""Finitely presented groups: Tietze simplification, abelianization and
budgeted, three-valued decision procedures.

Every decision returns a :class:`Verdict` whose ``value`` is ``True``,
``False`` or ``None`` (unknown). ``True``/``False`` verdicts are always
backed by a certificate; ``None`` reports the exhausted budget.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from typing import Sequence

from .cosets import enumerate_cosets
from .words import (
    Word,
    cyclic_canonical,
    cyclic_reduce,
    free_reduce,
    inverse,
    multiply,
)

DEFAULT_BUDGET = int(os.environ.get("CHAINCOVER_BUDGET", 1_000_000))

# caps on the coset enumerations launched from the decision procedures
MAX_COSETS = 20_000


class GroupError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Presentation:
    """``<gens | relators>`` with explicit generator ids.

    ``gens`` are positive ints; ``labels`` maps each generator to what it
    stands for (for Rips presentations, the oriented non-tree edge).
    ``eliminated`` lists the Tietze substitutions ``(g, word)`` that led
    from the original presentation to this one, in order.
    """

    gens: tuple[int, ...]
    relators: tuple[Word, ...]
    labels: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    eliminated: tuple[tuple[int, Word], ...] = ()
    exhausted: bool = False
    steps: int = 0

    @classmethod
    def from_counts(cls, ngens: int, relators: Sequence[Sequence[int]] = (), **kw) -> "Presentation":
        pres = cls(tuple(range(1, ngens + 1)), tuple(tuple(r) for r in relators), **kw)
        pres.validate()
        return pres

    @property
    def ngens(self) -> int:
        return len(self.gens)

    @property
    def size(self) -> int:
        return sum(len(r) for r in self.relators)

    def validate(self):
        live = set(self.gens)
        for r in self.relators:
            for x in r:
                if abs(x) not in live:
                    raise GroupError(f"relator uses undeclared generator {x}")

    def check_word(self, word: Sequence[int]):
        live = set(self.gens) | {g for g, _ in self.eliminated}
        for x in word:
            if x == 0 or abs(x) not in live:
                raise GroupError(f"unknown generator {x}")

    def __repr__(self):
        return f"Presentation({self.ngens} generators, {len(self.relators)} relators)"


def _substitute(word: Word, g: int, value: Word, value_inv: Word) -> Word:
    out: list[int] = []
    for x in word:
        if x == g:
            out.extend(value)
        elif x == -g:
            out.extend(value_inv)
        else:
            out.append(x)
    return free_reduce(out)


def simplify(pres: Presentation, budget: int = DEFAULT_BUDGET) -> Presentation:
    """Tietze-simplify ``pres``.

    Repeatedly picks the shortest relator in which some generator occurs
    exactly once, solves it for that generator and substitutes. Relators of
    length one kill a generator; length two identify two generators. One
    elimination costs one budget step; an exhausted budget returns the
    current presentation with ``exhausted=True``.
    """
    if budget <= 0:
        raise GroupError("budget must be positive")
    live = set(pres.gens)
    rels: dict[int, Word] = {}
    keys: dict[Word, int] = {}
    occ: dict[int, set[int]] = {g: set() for g in live}
    heap: list[tuple[int, int, Word]] = []
    next_id = 0

    def key_of(r):
        return cyclic_canonical(r) if len(r) <= 64 else r

    def add(r):
        nonlocal next_id
        r = cyclic_reduce(r)
        if not r:
            return
        k = key_of(r)
        if k in keys:
            return
        rid = next_id
        next_id += 1
        rels[rid] = r
        keys[k] = rid
        for x in r:
            occ[abs(x)].add(rid)
        heapq.heappush(heap, (len(r), rid, r))

    def remove(rid):
        r = rels.pop(rid)
        keys.pop(key_of(r), None)
        for x in r:
            occ[abs(x)].discard(rid)
        return r

    for r in pres.relators:
        add(r)
    total = max(sum(len(r) for r in rels.values()), 1)
    limit = 50 * total + 1000
    eliminated = list(pres.eliminated)
    steps = 0
    exhausted = False
    while heap:
        length, rid, r = heapq.heappop(heap)
        if rels.get(rid) != r:
            continue
        counts: dict[int, int] = {}
        for x in r:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
        singles = [g for g, c in counts.items() if c == 1]
        if not singles:
            continue
        if steps >= budget:
            exhausted = True
            break
        g = min(singles, key=lambda h: (len(occ[h]), h))
        remove(rid)
        k = next(i for i, x in enumerate(r) if abs(x) == g)
        rot = r[k + 1:] + r[:k]  # r ~ x^e * rot
        # x^e * rot = 1  =>  x^e = rot^-1
        value = inverse(rot) if r[k] > 0 else rot
        value_inv = inverse(value)
        for other in sorted(occ[g]):
            old = remove(other)
            total += len(value) * sum(1 for x in old if abs(x) == g)
            add(_substitute(old, g, value, value_inv))
        live.discard(g)
        del occ[g]
        eliminated.append((g, value))
        steps += 1
        if total > limit:
            exhausted = True
            break
    return Presentation(
        tuple(sorted(live)),
        tuple(rels[rid] for rid in sorted(rels)),
        labels={g: pres.labels[g] for g in live if g in pres.labels},
        provenance=dict(pres.provenance, simplified=True),
        eliminated=tuple(eliminated),
        exhausted=exhausted,
        steps=pres.steps + steps,
    )


# ---------------------------------------------------------------- abelian


@dataclass(frozen=True)
class AbelianInvariants:
    rank: int
    torsion: tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion]
        if self.rank:
            parts.insert(0, "Z" if self.rank == 1 else f"Z^{self.rank}")
        return " + ".join(parts) if parts else "0"


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: Sequence[Sequence[int]], track: bool = False):
    """Diagonal of the Smith normal form of an integer matrix.

    Returns ``(diag, V)`` where ``diag`` lists the nonzero invariant factors
    ``d1 | d2 | ...`` (positive) and ``V`` is a unimodular column transform
    with ``U M V = D`` for some unimodular ``U`` (``None`` unless ``track``).
    """
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = len(A[0]) if m else 0
    V = _identity(n) if track else None

    def swap_cols(a, b):
        for row in A:
            row[a], row[b] = row[b], row[a]
        if V is not None:
            for row in V:
                row[a], row[b] = row[b], row[a]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        if V is not None:
            for row in V:
                row[dst] += q * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        A[t], A[pivot[0]] = A[pivot[0]], A[t]
        swap_cols(t, pivot[1])
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    add_col(j, t, -q)
                    if A[t][j]:
                        changed = True
            if changed:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < abs(best[2])):
                        best = ("r", i, A[i][t])
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < abs(best[2])):
                        best = ("c", j, A[t][j])
                if best[0] == "r":
                    A[t], A[best[1]] = A[best[1]], A[t]
                else:
                    swap_cols(t, best[1])
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad])]
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
        diag.append(A[t][t])
        t += 1
    return diag, V


def relator_matrix(pres: Presentation) -> list[list[int]]:
    col = {g: k for k, g in enumerate(pres.gens)}
    rows = []
    for r in pres.relators:
        row = [0] * len(pres.gens)
        for x in r:
            row[col[abs(x)]] += 1 if x > 0 else -1
        if any(row):
            rows.append(row)
    return rows


def _sparse_unit_eliminate(rows: list[dict[int, int]], ncols: int):
    """Remove ±1 pivots; each removal drops one row and one column and
    contributes an invariant factor 1. Returns remaining dense rows."""
    rows = [dict(r) for r in rows if r]
    cols_alive = set(range(ncols))
    by_col: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for c in r:
            by_col.setdefault(c, set()).add(i)
    alive = set(range(len(rows)))
    progress = True
    while progress:
        progress = False
        for i in sorted(alive):
            r = rows[i]
            unit = next((c for c in sorted(r) if abs(r[c]) == 1), None)
            if unit is None:
                continue
            s = r[unit]
            for k in list(by_col.get(unit, ())):
                if k == i or k not in alive:
                    continue
                rk = rows[k]
                q = rk.get(unit, 0) * s
                if not q:
                    continue
                for c, v in r.items():
                    nv = rk.get(c, 0) - q * v
                    if nv:
                        if c not in rk:
                            by_col.setdefault(c, set()).add(k)
                        rk[c] = nv
                    else:
                        rk.pop(c, None)
                        by_col[c].discard(k)
                if not rk:
                    alive.discard(k)
            alive.discard(i)
            for c in r:
                by_col[c].discard(i)
            cols_alive.discard(unit)
            progress = True
    order = sorted(cols_alive)
    pos = {c: k for k, c in enumerate(order)}
    dense = []
    for i in sorted(alive):
        row = [0] * len(order)
        for c, v in rows[i].items():
            row[pos[c]] = v
        dense.append(row)
    return dense, len(order)


def abelianize(pres: Presentation) -> AbelianInvariants:
    """Invariants of the abelianized group, by exact integer Smith form."""
    col = {g: k for k, g in enumerate(pres.gens)}
    sparse = []
    for r in pres.relators:
        row: dict[int, int] = {}
        for x in r:
            c = col[abs(x)]
            row[c] = row.get(c, 0) + (1 if x > 0 else -1)
            if not row[c]:
                del row[c]
        sparse.append(row)
    dense, ncols = _sparse_unit_eliminate(sparse, len(pres.gens))
    if not dense or ncols == 0:
        return AbelianInvariants(ncols)
    diag, _ = smith_normal_form(dense)
    return AbelianInvariants(ncols - len(diag), tuple(d for d in diag if d > 1))


# ---------------------------------------------------------------- verdicts

_LABELS = {
    "equality": ("Equal", "Distinct"),
    "triviality": ("True", "False"),
    "surjectivity": ("Surjective", "NotSurjective"),
    "eshort": ("Yes", "No"),
}


@dataclass(frozen=True)
class Verdict:
    value: bool | None
    certificate: str = ""
    steps: int = 0
    budget: int = 0
    kind: str = "equality"

    @property
    def unknown(self) -> bool:
        return self.value is None

    @property
    def label(self) -> str:
        if self.value is None:
            return "Unknown"
        yes, no = _LABELS[self.kind]
        return yes if self.value else no

    def __str__(self):
        return f"{self.label} [{self.certificate}]"

    def to_dict(self) -> dict:
        return {"verdict": self.label, "certificate": self.certificate,
                "steps": self.steps, "budget": self.budget}


# ---------------------------------------------------------------- solver


class GroupSolver:
    """Decision machinery for one presentation, built once and reused.

    The presentation is Tietze-simplified; words are rewritten into the
    surviving generators. A complete normal form is available when the
    simplified group is trivial, free, cyclic, or finite (via a completed
    coset table for the trivial subgroup).
    """

    def __init__(self, pres: Presentation, budget: int = DEFAULT_BUDGET):
        self.pres = pres
        self.budget = budget
        self.simple = simplify(pres, budget)
        self.steps = self.simple.steps - pres.steps
        self._expanded: dict[int, Word] = {}
        self._subst = dict(self.simple.eliminated)
        gens = self.simple.gens
        self._col = {g: k for k, g in enumerate(gens)}
        rows = relator_matrix(self.simple)
        if rows and gens:
            diag, V = smith_normal_form(rows, track=True)
        else:
            diag, V = [], _identity(len(gens))
        self._diag = diag
        self._V = V
        self.invariants = AbelianInvariants(len(gens) - len(diag), tuple(d for d in diag if d > 1))
        self.table = None
        if not gens:
            self.kind = "trivial"
        elif not self.simple.relators:
            self.kind = "free"
        elif len(gens) == 1:
            self.kind = "cyclic"
        else:
            self.kind = "general"
            remaining = max(budget - self.steps, 1)
            self.table = enumerate_cosets(
                len(gens), [self._renumber(r) for r in self.simple.relators],
                max_cosets=min(MAX_COSETS, remaining), max_steps=remaining,
            )
            if self.table is not None:
                self.kind = "finite"
                self.steps += self.table.steps
            else:
                self.steps += remaining

    def _renumber(self, word: Word) -> Word:
        return tuple((self._col[abs(x)] + 1) * (1 if x > 0 else -1) for x in word)

    def _expand(self, g: int) -> Word:
        if g not in self._subst:
            return (g,)
        if g not in self._expanded:
            self._expanded[g] = self.rewrite(self._subst[g])
        return self._expanded[g]

    def rewrite(self, word: Sequence[int]) -> Word:
        """Image of ``word`` over the surviving generators, freely reduced."""
        out: list[int] = []
        for x in word:
            e = self._expand(abs(x))
            out.extend(e if x > 0 else inverse(e))
        return free_reduce(out)

    def abelian_coords(self, word: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of the image of ``word`` in Z^r + (+) Z/d_i."""
        w = self.rewrite(word)
        n = len(self.simple.gens)
        vec = [0] * n
        for x in w:
            vec[self._col[abs(x)]] += 1 if x > 0 else -1
        y = [sum(vec[i] * self._V[i][j] for i in range(n)) for j in range(n)]
        out = []
        for j in range(n):
            if j < len(self._diag):
                d = self._diag[j]
                if d > 1:
                    out.append(y[j] % d)
            else:
                out.append(y[j])
        return tuple(out)

    @property
    def complete(self) -> bool:
        return self.kind in ("trivial", "free", "cyclic", "finite")

    def normal_form(self, word: Sequence[int]):
        """Hashable canonical form, or ``None`` when none is available."""
        if self.kind == "trivial":
            return ()
        if self.kind == "free":
            return self.rewrite(word)
        if self.kind == "cyclic":
            return self.abelian_coords(word)
        if self.kind == "finite":
            return self.table.act(self._renumber(self.rewrite(word)))
        return None

    def _verdict(self, value, cert, kind="equality"):
        return Verdict(value, cert, steps=self.steps, budget=self.budget, kind=kind)

    def is_identity(self, word: Sequence[int]) -> Verdict:
        self.pres.check_word(word)
        w = free_reduce(word)
        if not w:
            return self._verdict(True, "free reduction")
        if any(self.abelian_coords(w)):
            return self._verdict(False, f"abelianization {self.abelian_coords(w)} != 0")
        r = self.rewrite(w)
        if not r:
            return self._verdict(True, f"tietze rewriting ({len(self.simple.eliminated)} substitutions)")
        if self.kind == "free":
            return self._verdict(False, "free group normal form " + str(r))
        if self.kind == "cyclic":
            return self._verdict(True, "cyclic group, abelianization vanishes")
        if self.kind == "finite":
            c = self.table.act(self._renumber(r))
            return self._verdict(c == 0, f"coset table of size {self.table.index}, word sends coset 0 to {c}")
        return self._verdict(None, f"undecided within budget {self.budget}")

    def equal(self, w1: Sequence[int], w2: Sequence[int]) -> Verdict:
        self.pres.check_word(w2)
        return self.is_identity(multiply(w1, inverse(w2)))

    def is_trivial(self) -> Verdict:
        if self.kind == "trivial":
            return self._verdict(True, "tietze simplification reached <|>", "triviality")
        if not self.invariants.is_trivial:
            return self._verdict(False, f"abelianization {self.invariants}", "triviality")
        if self.kind == "free":
            return self._verdict(False, f"free group of rank {len(self.simple.gens)}", "triviality")
        if self.kind == "cyclic":
            return self._verdict(True, "cyclic group with trivial abelianization", "triviality")
        if self.kind == "finite":
            idx = self.table.index
            return self._verdict(idx == 1, f"coset enumeration index {idx}", "triviality")
        return self._verdict(None, f"undecided within budget {self.budget}", "triviality")


def solver(pres: Presentation, budget: int = DEFAULT_BUDGET) -> GroupSolver:
    """Cached :class:`GroupSolver` for ``pres``."""
    cache = pres.__dict__.setdefault("_solvers", {})
    if budget not in cache:
        cache[budget] = GroupSolver(pres, budget)
    return cache[budget]


def equal_in_group(pres: Presentation, w1, w2, budget: int = DEFAULT_BUDGET) -> Verdict:
    pres.check_word(w1)
    return solver(pres, budget).equal(tuple(w1), tuple(w2))


def is_trivial_group(pres: Presentation, budget: int = DEFAULT_BUDGET) -> Verdict:
    return solver(pres, budget).is_trivial()
