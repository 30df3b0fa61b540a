import pytest

from chaincover.rips import non_tree_edges, rips_graph, rips_triangles, spanning_tree
from chaincover.space import build_space, entourage_from_pairs, entourage_from_scale
from test_oracles import HEX_EDGES, HEX_TRIANGLES


@pytest.mark.parametrize("eps", sorted(HEX_EDGES))
def test_hex_counts(hexs, eps):
    g = rips_graph(hexs, entourage_from_scale(hexs, eps))
    assert len(g.vertices) == 6
    assert len(g.edges) == HEX_EDGES[eps]
    assert g.triangle_count() == HEX_TRIANGLES[eps]


def test_hex_18_triangles(hexs):
    tris = list(rips_triangles(rips_graph(hexs, entourage_from_scale(hexs, "1.8"))))
    assert tris == sorted(set(tris))
    # the octahedron: each triangle takes one point from each antipodal pair
    for t in tris:
        assert len({x % 3 for x in t}) == 3


def test_k4_triangles():
    s = build_space([(i, None) for i in range(4)], distances=[[0 if i == j else 1 for j in range(4)] for i in range(4)])
    assert rips_graph(s, entourage_from_scale(s, 2)).triangle_count() == 4


def test_triangle_edges_present(hexs):
    g = rips_graph(hexs, entourage_from_scale(hexs, "2.1"))
    for a, b, c in g.triangles():
        assert a < b < c
        assert {(a, b), (a, c), (b, c)} <= set(g.edges)


def test_trees(hexs, P5):
    g = rips_graph(hexs, entourage_from_scale(hexs, "1.2"))
    t = spanning_tree(g, 0)
    assert len(t.edges) == 5
    assert non_tree_edges(g, t) == [(3, 4)]

    g0 = rips_graph(hexs, entourage_from_scale(hexs, "0.9"))
    t0 = spanning_tree(g0, 0)
    assert t0.vertices == {0} and not t0.edges

    gp = rips_graph(P5, entourage_from_scale(P5, "1.5"))
    tp = spanning_tree(gp, 0)
    assert len(tp.edges) == 4 and non_tree_edges(gp, tp) == []


def test_tree_deterministic(hexs):
    g = rips_graph(hexs, entourage_from_scale(hexs, "1.8"))
    t1, t2 = spanning_tree(g, 0), spanning_tree(g, 0)
    assert t1.parent == t2.parent and t1.order == t2.order
    assert list(g.triangles()) == list(rips_graph(hexs, entourage_from_scale(hexs, "1.8")).triangles())


def test_tree_restricted_to_component(P5):
    E = entourage_from_pairs(P5, [(0, 1), (3, 4)])
    t = spanning_tree(rips_graph(P5, E), 0)
    assert t.vertices == {0, 1}
    assert t.path_from_root(1) == [0, 1]


def test_cyclomatic(hexs):
    for eps in HEX_EDGES:
        g = rips_graph(hexs, entourage_from_scale(hexs, eps))
        t = spanning_tree(g, 0)
        comp_edges = [e for e in g.edges if e[0] in t.vertices]
        assert len(non_tree_edges(g, t)) == len(comp_edges) - (len(t.vertices) - 1)
