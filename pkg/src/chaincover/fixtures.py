"""Small reference spaces used by the tests, demos and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .space import FiniteSpace, Entourage, as_exact, build_space, entourage_from_diff_intervals

U_INTERVALS = (("-1", "1"), ("2", "4"), ("-4", "-2"))


def singleton() -> FiniteSpace:
    return build_space([(0, None)], distances=[[0]])


def p5() -> FiniteSpace:
    """Points 0, 1, 2, 3, 4 on a line."""
    return build_space([(i, (i,)) for i in range(5)], basepoint=0)


def hexagon() -> FiniteSpace:
    """Vertices of a regular hexagon inscribed in the unit circle.

    Squared chord lengths are 2 - 2cos(k*pi/3) = 1, 3, 4 for k = 1, 2, 3,
    so the table of squared distances is exact.
    """
    sq = {0: 0, 1: 1, 2: 3, 3: 4}
    table = [[sq[min((i - j) % 6, (j - i) % 6)] for j in range(6)] for i in range(6)]
    return build_space([(i, None) for i in range(6)], distances=table, squared=True, basepoint=0)


def grid(step="0.25", lo="-6", hi="6") -> FiniteSpace:
    """Evenly spaced points ``lo, lo+step, ..., <= hi``; basepoint at 0 when present."""
    step, lo, hi = as_exact(step), as_exact(lo), as_exact(hi)
    if step <= 0 or hi < lo:
        raise ValueError("bad grid")
    xs = []
    x = lo
    while x <= hi:
        xs.append(x)
        x += step
    base = xs.index(Fraction(0)) if Fraction(0) in xs else min(range(len(xs)), key=lambda i: abs(xs[i]))
    return build_space([(i, (x,)) for i, x in enumerate(xs)], basepoint=base)


def u_relation(space: FiniteSpace, intervals=U_INTERVALS) -> Entourage:
    """The relation of ``U = (-1,1) u (2,4) u (-4,-2)`` on a 1-D space."""
    return entourage_from_diff_intervals(space, intervals)
