"""Property suites run by the acceptance tests at 1000 cases each."""

from hypothesis import given, settings
from hypothesis import strategies as st

from chaincover.covering import build_covering_ball, extract
from chaincover.groups import abelianize
from chaincover.homotopy import RipsEncoding
from chaincover.rips import rips_graph, spanning_tree
from chaincover.space import (
    as_exact,
    build_space,
    chain_components,
    component_of,
    entourage_from_pairs,
    entourage_from_scale,
    is_uniformly_open,
    saturate,
)

CASES = 1000


@st.composite
def metric_spaces(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    coords = draw(st.lists(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=n, max_size=n))
    base = draw(st.integers(0, n - 1))
    return build_space([(i, c) for i, c in enumerate(coords)], basepoint=base)


@st.composite
def relation_spaces(draw, max_n=6):
    """A space with a random symmetric relation E and a sub-relation F."""
    n = draw(st.integers(1, max_n))
    space = build_space([(i, None) for i in range(n)], distances=[[0 if i == j else 1 for j in range(n)]
                                                                  for i in range(n)],
                        basepoint=draw(st.integers(0, n - 1)))
    all_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    E = draw(st.lists(st.sampled_from(all_pairs), unique=True)) if all_pairs else []
    F = [p for p in E if draw(st.booleans())]
    return space, entourage_from_pairs(space, E, "E"), entourage_from_pairs(space, F, "F")


scales = st.integers(1, 100).map(lambda k: f"{k / 10}")


@settings(max_examples=CASES)
@given(metric_spaces(), scales)
def entourage_reflexive_symmetric(space, eps):
    E = entourage_from_scale(space, eps)
    for x in space.ids:
        assert E.contains(x, x)
        for y in space.ids:
            assert E.contains(x, y) == E.contains(y, x)
            assert E.contains(x, y) == (x == y or space.sqdist(x, y) < as_exact(eps) ** 2)


@settings(max_examples=CASES)
@given(relation_spaces(), st.data())
def uniformly_open_complement(case, data):
    space, E, _ = case
    S = set(data.draw(st.lists(st.sampled_from(list(space.ids)), unique=True)))
    if is_uniformly_open(S, E):
        assert is_uniformly_open(set(space.ids) - S, E)
        # a union of blocks
        assert S == set().union(*[b for b in chain_components(space, E) if b & S])
    if len(chain_components(space, E)) == 1 and S and is_uniformly_open(S, E):
        assert S == set(space.ids)


@settings(max_examples=CASES)
@given(relation_spaces(), st.data())
def saturate_idempotent_monotone(case, data):
    space, E, F = case
    ids = list(space.ids)
    S = set(data.draw(st.lists(st.sampled_from(ids), min_size=1, unique=True)))
    T = S | set(data.draw(st.lists(st.sampled_from(ids), unique=True)))
    sat = saturate(S, E)
    assert saturate(sat, E) == sat
    assert S <= sat
    assert sat <= saturate(T, E)
    assert saturate(S, F) <= sat
    assert is_uniformly_open(sat, E)


def _extracted(space, E, F):
    radius = max(space.n - 1, 1)
    ball = build_covering_ball(space, E, radius)
    return ball, extract(ball, [E, F])


@settings(max_examples=CASES)
@given(relation_spaces())
def extracted_refines(case):
    space, E, F = case
    _, res = _extracted(space, E, F)
    assert res.relation <= E


@settings(max_examples=CASES)
@given(relation_spaces(), st.data())
def extracted_chains_lift_into_A(case, data):
    space, E, F = case
    ball, res = _extracted(space, E, F)
    R = res.relation
    v, x = ball.base, space.basepoint
    for _ in range(ball.radius):
        y = data.draw(st.sampled_from((x,) + R.adjacency[x]))
        v = ball.step(v, y)
        assert v is not None and v in res.component
        x = y


@settings(max_examples=CASES)
@given(relation_spaces())
def endpoints_cover_component(case):
    space, E, F = case
    ball, res = _extracted(space, E, F)
    ends = ball.endpoints(res.component)
    assert ends == component_of(F, space.basepoint)
    if component_of(F, space.basepoint) == component_of(E, space.basepoint):
        assert ends == component_of(E, space.basepoint)


@settings(max_examples=CASES)
@given(relation_spaces(), st.randoms(use_true_random=False))
def invariants_ignore_tree_order(case, rng):
    space, E, _ = case
    graph = rips_graph(space, E)
    ref = abelianize(RipsEncoding(graph, spanning_tree(graph, space.basepoint)).presentation)
    for _ in range(3):
        rank = list(space.ids)
        rng.shuffle(rank)
        tree = spanning_tree(graph, space.basepoint, rank=rank)
        assert abelianize(RipsEncoding(graph, tree).presentation) == ref


SUITES = {
    "entourage reflexive and symmetric": entourage_reflexive_symmetric,
    "uniformly open complement closed": uniformly_open_complement,
    "saturate idempotent and monotone": saturate_idempotent_monotone,
    "extracted relation refines E": extracted_refines,
    "extracted-relation chains lift into A": extracted_chains_lift_into_A,
    "endpoints of A cover the basepoint component": endpoints_cover_component,
    "abelian invariants independent of tree order": invariants_ignore_tree_order,
}
