from fractions import Fraction

import pytest

from chaincover.space import (
    Entourage,
    SpaceError,
    as_exact,
    ball,
    build_space,
    chain_components,
    diagonal,
    entourage_from_diff_intervals,
    entourage_from_pairs,
    entourage_from_scale,
    fmt_exact,
    is_chain_connected,
    is_uniformly_open,
    saturate,
)
from test_oracles import GRID_U_BALL_AT_ZERO


def test_exact_parsing():
    assert as_exact("0.1") == Fraction(1, 10)
    assert as_exact(0.1) == Fraction(1, 10)
    assert as_exact("3/4") == Fraction(3, 4)
    assert fmt_exact(Fraction(3, 4)) == "0.75"
    assert fmt_exact(Fraction(1, 3)) == "1/3"
    assert fmt_exact(Fraction(-2)) == "-2"


def test_singleton(one):
    assert one.n == 1 and one.basepoint == 0


def test_singleton_basepoint_forced():
    s = build_space([(0, None)], distances=[[0]], basepoint=None)
    assert s.basepoint == 0


def test_p5_distance(P5):
    assert P5.distance(1, 3) == 2
    assert P5.sqdist(1, 3) == 4


def test_asymmetric_table():
    with pytest.raises(SpaceError, match="asymmetric"):
        build_space([(0, None), (1, None)], distances=[[0, 1], [2, 0]])


def test_ids_must_be_dense_and_distinct():
    with pytest.raises(SpaceError):
        build_space([(0, (0,)), (2, (1,))])
    with pytest.raises(SpaceError):
        build_space([(0, (0,)), (0, (1,))])


def test_missing_basepoint_named():
    with pytest.raises(SpaceError, match="7"):
        build_space([(0, (0,)), (1, (1,))], basepoint=7)


def test_duplicate_coordinates_allowed():
    s = build_space([(0, (1,)), (1, (1,))])
    assert s.distance(0, 1) == 0
    assert entourage_from_scale(s, "0.5").contains(0, 1)


def test_p5_scale(P5):
    E = entourage_from_scale(P5, "1.5")
    assert E.sorted_pairs() == [(0, 1), (1, 2), (2, 3), (3, 4)]


def test_strict_threshold(P5):
    assert not entourage_from_scale(P5, 1).contains(0, 1)
    assert entourage_from_scale(P5, "1.0001").contains(0, 1)


def test_hex_scales(hex_scale):
    assert hex_scale("0.9").is_diagonal
    assert len(hex_scale("2.1").pairs) == 15


def test_grid_u_memberships(G, U):
    z = G.id_of(0)
    assert U.contains(z, G.id_of("0.75"))
    assert not U.contains(z, G.id_of(1))
    assert U.contains(z, G.id_of(3))
    assert not U.contains(z, G.id_of(4))
    assert U.contains(z, G.id_of(-3))


def test_grid_tiny_interval_is_diagonal(G):
    assert entourage_from_diff_intervals(G, [("-0.1", "0.1")]).is_diagonal


def test_diff_intervals_need_1d(hexs):
    with pytest.raises(SpaceError):
        entourage_from_diff_intervals(hexs, [("-1", "1")])


def test_ball(P5, hex_scale, G, U):
    assert ball(entourage_from_scale(P5, "1.5"), 2) == {1, 2, 3}
    for x in range(6):
        assert ball(hex_scale("0.9"), x) == {x}
    b = ball(U, G.id_of(0))
    xs = {G.coords[i][0] for i in b}
    assert len(b) == GRID_U_BALL_AT_ZERO
    assert all(abs(x) <= Fraction(3, 4) or Fraction(9, 4) <= abs(x) <= Fraction(15, 4) for x in xs)


def test_components(hexs, hex_scale, G, U):
    assert chain_components(hexs, hex_scale("1.2")) == [frozenset(range(6))]
    assert len(chain_components(hexs, hex_scale("0.9"))) == 6
    assert len(chain_components(G, U)) == 1
    assert is_chain_connected(U)


def test_uniformly_open(hex_scale):
    assert is_uniformly_open(range(6), hex_scale("1.2"))
    assert not is_uniformly_open({0, 1, 2}, hex_scale("1.2"))
    assert is_uniformly_open({0, 3}, hex_scale("0.9"))


def test_saturate(P5, hex_scale):
    assert saturate({0}, hex_scale("1.2")) == frozenset(range(6))
    assert saturate({0}, hex_scale("0.9")) == {0}
    assert saturate({4}, entourage_from_scale(P5, "1.5")) == frozenset(range(5))
    with pytest.raises(SpaceError):
        saturate(set(), hex_scale("1.2"))


def test_entourage_basics(P5):
    E = entourage_from_pairs(P5, [(3, 1), (2, 2)])
    assert E.contains(1, 3) and E.contains(3, 1) and E.contains(4, 4)
    assert (1, 3) in E
    assert E.sorted_pairs() == [(1, 3)]
    assert diagonal(P5) <= E
    assert E == Entourage(5, [(1, 3)], provenance="other")
    with pytest.raises(SpaceError):
        entourage_from_pairs(P5, [(0, 9)])


def test_scale_must_be_positive(P5):
    with pytest.raises(SpaceError):
        entourage_from_scale(P5, 0)
