"""Finite spaces, entourages, balls and uniformly open sets.

Every threshold comparison is exact: coordinates, distances and scales are
:class:`fractions.Fraction` values, and Euclidean comparisons are made on
squared distances so no square root is ever taken.
"""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from functools import cached_property
from typing import Iterable


class SpaceError(ValueError):
    pass


def as_exact(value) -> Fraction:
    """Convert ints, strings, Decimals, Fractions (and floats via repr) exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise SpaceError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpaceError(f"not an exact number: {value!r}") from exc


def fmt_exact(q: Fraction) -> str:
    """Render a rational as a terminating decimal when possible, else p/q."""
    q = Fraction(q)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    if q.denominator == 1:
        return str(q.numerator)
    places = max(twos, fives)
    text = f"{Decimal(q.numerator) / Decimal(q.denominator):.{places}f}"
    return text


def _perfect_sqrt(q: Fraction) -> Fraction | None:
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None


class FiniteSpace:
    """A finite pseudometric space on ids ``0..n-1`` with a basepoint.

    Distances come either from exact coordinates (Euclidean) or from an
    explicit symmetric table. A table may hold squared distances, which is
    how spaces with irrational distances such as the regular hexagon are
    represented exactly.
    """

    def __init__(self, n, coords=None, table=None, squared=False, basepoint=0):
        self.n = n
        self.coords = coords
        self.table = table
        self.squared = squared
        self.basepoint = basepoint

    def __repr__(self):
        kind = "coords" if self.coords is not None else "table" if self.table is not None else "bare"
        return f"FiniteSpace(n={self.n}, {kind}, basepoint={self.basepoint})"

    @property
    def ids(self) -> range:
        return range(self.n)

    @property
    def has_metric(self) -> bool:
        return self.coords is not None or self.table is not None

    @property
    def dimension(self) -> int | None:
        if self.coords is None:
            return None
        return len(self.coords[0]) if self.coords else 0

    def check_id(self, x) -> int:
        if not isinstance(x, int) or not 0 <= x < self.n:
            raise SpaceError(f"unknown point id {x!r}")
        return x

    @cached_property
    def _sq(self) -> tuple[tuple[Fraction, ...], ...]:
        if self.table is not None:
            if self.squared:
                return self.table
            return tuple(tuple(d * d for d in row) for row in self.table)
        if self.coords is not None:
            c = self.coords
            return tuple(
                tuple(sum(((a - b) ** 2 for a, b in zip(c[i], c[j])), Fraction(0)) for j in range(self.n))
                for i in range(self.n)
            )
        raise SpaceError("space carries no metric")

    def sqdist(self, i: int, j: int) -> Fraction:
        return self._sq[i][j]

    def distance(self, i: int, j: int):
        """Exact distance when rational, otherwise a float approximation."""
        if self.table is not None and not self.squared:
            return self.table[i][j]
        d2 = self.sqdist(i, j)
        root = _perfect_sqrt(d2)
        return root if root is not None else math.sqrt(d2)

    def within(self, i: int, j: int, eps: Fraction) -> bool:
        """Strict test ``d(i, j) < eps``."""
        return self.sqdist(i, j) < eps * eps

    def id_of(self, *coord) -> int:
        """Id of the point with the given exact coordinates."""
        if self.coords is None:
            raise SpaceError("space has no coordinates")
        target = tuple(as_exact(c) for c in coord)
        for i, c in enumerate(self.coords):
            if c == target:
                return i
        raise SpaceError(f"no point at {coord!r}")


def build_space(points, distances=None, basepoint=None, squared=False) -> FiniteSpace:
    """Validate and build a :class:`FiniteSpace`.

    ``points`` is a sequence of ``(id, coords)`` pairs where ``coords`` is a
    sequence of exact numbers or ``None``. When ``distances`` is given it is a
    full ``n x n`` table (of squared distances if ``squared``) and takes
    precedence over coordinates.
    """
    points = list(points)
    if not points:
        raise SpaceError("a space needs at least one point")
    ids = [p[0] for p in points]
    if len(set(ids)) != len(ids):
        dup = sorted(i for i in set(ids) if ids.count(i) > 1)
        raise SpaceError(f"duplicate ids {dup}")
    n = len(ids)
    if sorted(ids) != list(range(n)):
        raise SpaceError("ids must be dense in 0..n-1")
    points.sort(key=lambda p: p[0])

    coords = None
    given = [p[1] for p in points]
    if any(c is not None for c in given):
        if any(c is None for c in given):
            raise SpaceError("either all points carry coordinates or none do")
        coords = tuple(tuple(as_exact(v) for v in c) for c in given)
        dims = {len(c) for c in coords}
        if len(dims) != 1 or 0 in dims:
            raise SpaceError("coordinates must share one positive dimension")

    table = None
    if distances is not None:
        rows = [[as_exact(v) for v in row] for row in distances]
        if len(rows) != n or any(len(r) != n for r in rows):
            raise SpaceError(f"distance table must be {n}x{n}")
        for i in range(n):
            if rows[i][i] != 0:
                raise SpaceError(f"nonzero diagonal at {i}")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise SpaceError(f"asymmetric distance table at ({i},{j})")
                if rows[i][j] < 0:
                    raise SpaceError(f"negative distance at ({i},{j})")
        table = tuple(tuple(r) for r in rows)

    if n == 1:
        basepoint = 0
    elif basepoint is None:
        basepoint = 0
    if basepoint not in range(n):
        raise SpaceError(f"missing basepoint id {basepoint!r}")

    return FiniteSpace(n, coords=coords, table=table, squared=squared, basepoint=basepoint)


def with_basepoint(space: FiniteSpace, basepoint: int) -> FiniteSpace:
    space.check_id(basepoint)
    return FiniteSpace(space.n, space.coords, space.table, space.squared, basepoint)


class Entourage:
    """A reflexive symmetric relation on the ids of a finite space.

    Only the off-diagonal pairs are stored, as ``(i, j)`` with ``i < j``;
    the diagonal is implicit.
    """

    def __init__(self, n: int, pairs: Iterable[tuple[int, int]], provenance: str = "pairs"):
        norm = set()
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise SpaceError(f"pair ({a},{b}) references an unknown id")
            if a != b:
                norm.add((a, b) if a < b else (b, a))
        self.n = n
        self.pairs = frozenset(norm)
        self.provenance = provenance

    def __repr__(self):
        return f"Entourage(n={self.n}, {len(self.pairs)} pairs, {self.provenance!r})"

    def __eq__(self, other):
        if not isinstance(other, Entourage):
            return NotImplemented
        return self.n == other.n and self.pairs == other.pairs

    def __hash__(self):
        return hash((self.n, self.pairs))

    def __contains__(self, pair) -> bool:
        a, b = pair
        return a == b or ((a, b) if a < b else (b, a)) in self.pairs

    def contains(self, a: int, b: int) -> bool:
        return (a, b) in self

    def refines(self, other: "Entourage") -> bool:
        return self.n == other.n and self.pairs <= other.pairs

    def __le__(self, other):
        return self.refines(other)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Sorted off-diagonal neighbours of every id."""
        adj = [[] for _ in range(self.n)]
        for a, b in self.pairs:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(a)) for a in adj)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def all_pairs(self) -> list[tuple[int, int]]:
        """Every ordered pair, diagonal included, in lexicographic order."""
        out = [(i, i) for i in range(self.n)]
        out += list(self.pairs) + [(b, a) for a, b in self.pairs]
        return sorted(out)

    @property
    def is_diagonal(self) -> bool:
        return not self.pairs


def diagonal(space: FiniteSpace) -> Entourage:
    return Entourage(space.n, (), provenance="diagonal")


def entourage_from_pairs(space: FiniteSpace, pairs, provenance="pairs") -> Entourage:
    return Entourage(space.n, pairs, provenance=provenance)


def entourage_from_scale(space: FiniteSpace, eps) -> Entourage:
    """All pairs at distance strictly below ``eps``."""
    eps = as_exact(eps)
    if eps <= 0:
        raise SpaceError(f"scale must be positive, got {fmt_exact(eps)}")
    if not space.has_metric:
        raise SpaceError("space carries no metric")
    n = space.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if space.within(i, j, eps)]
    return Entourage(n, pairs, provenance=f"eps={fmt_exact(eps)}")


def _coords_1d(space: FiniteSpace):
    coords = space.coords
    if coords is None or len(coords[0]) != 1:
        raise SpaceError("difference relations need a 1-D space")
    return [c[0] for c in coords]


def format_intervals(intervals) -> str:
    return "u".join(f"({fmt_exact(a)},{fmt_exact(b)})" for a, b in intervals)


def entourage_from_diff_intervals(space: FiniteSpace, intervals) -> Entourage:
    """Relation ``{(x, y) : x - y in U}`` for ``U`` a union of open intervals.

    ``U`` is symmetrized, so ``x - y`` or ``y - x`` may lie in it.
    """
    xs = _coords_1d(space)
    intervals = [(as_exact(a), as_exact(b)) for a, b in intervals]
    if not intervals:
        raise SpaceError("empty interval list")
    for a, b in intervals:
        if not a < b:
            raise SpaceError(f"empty interval ({fmt_exact(a)},{fmt_exact(b)})")

    def inside(t):
        return any(a < t < b or a < -t < b for a, b in intervals)

    n = space.n
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if inside(xs[i] - xs[j])]
    return Entourage(n, pairs, provenance=f"U={format_intervals(intervals)}")


def ball(E: Entourage, x: int) -> frozenset[int]:
    if not 0 <= x < E.n:
        raise SpaceError(f"unknown point id {x!r}")
    return frozenset(E.adjacency[x]) | {x}


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True

    def groups(self) -> list[list[int]]:
        blocks: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            blocks.setdefault(self.find(i), []).append(i)
        return sorted(blocks.values())


def chain_components(space: FiniteSpace | None, E: Entourage) -> list[frozenset[int]]:
    """Partition of the ids into E-chain components, ordered by least id."""
    if space is not None and space.n != E.n:
        raise SpaceError("entourage belongs to a different space")
    uf = UnionFind(E.n)
    for a, b in E.pairs:
        uf.union(a, b)
    return [frozenset(block) for block in uf.groups()]


def component_of(E: Entourage, x: int) -> frozenset[int]:
    for block in chain_components(None, E):
        if x in block:
            return block
    raise SpaceError(f"unknown point id {x!r}")


def is_uniformly_open(S, W: Entourage) -> bool:
    S = set(S)
    return all(set(W.adjacency[a]) <= S for a in S)


def saturate(S, W: Entourage) -> frozenset[int]:
    """Smallest W-uniformly open superset of ``S``."""
    S = set(S)
    if not S:
        raise SpaceError("cannot saturate the empty set")
    seen = set(S)
    stack = list(S)
    while stack:
        a = stack.pop()
        for b in W.adjacency[a]:
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return frozenset(seen)


def is_chain_connected(E: Entourage) -> bool:
    return len(chain_components(None, E)) <= 1
