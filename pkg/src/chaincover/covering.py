"""Truncated models of the space of E-homotopy classes of based E-chains.

A :class:`CoveringBall` holds every class reachable from the basepoint by
at most ``radius`` E-steps. Classes are pairs ``(endpoint, word)``: the word
is the chain's edge-path word relative to a BFS tree, so two chains with the
same endpoint are E-homotopic exactly when their words agree in the group
presented by the Rips 2-skeleton.

Two chains ``[c, x]`` and ``[c, y]`` with ``(x, y) in F`` are F*-related;
equivalently ``w`` is F*-related to ``v`` when ``w`` is the class of ``v``'s
chain extended by one F-step. All F*-computations below use that form.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .groups import DEFAULT_BUDGET, GroupSolver, Verdict, solver
from .homotopy import Chain, RipsEncoding
from .rips import rips_graph, spanning_tree
from .space import Entourage, FiniteSpace, SpaceError, chain_components
from .words import Word, free_reduce, shortlex_key


class CoveringError(ValueError):
    pass


@dataclass
class CoveringVertex:
    index: int
    endpoint: int
    word: Word
    chain: Chain
    depth: int
    complete: bool = True

    @property
    def key(self):
        return (self.endpoint, shortlex_key(self.word))


@dataclass(frozen=True)
class MergeRecord:
    source: int
    step_to: int
    word: Word
    target: int
    certificate: str


class ClassIndex:
    """Finds the vertex holding the class of ``(endpoint, word)``.

    Uses the solver's normal form when one exists; otherwise compares
    against every vertex with the same endpoint. Returns the vertex (or
    ``None``), whether any comparison came back Unknown, and the
    certificate of the match.
    """

    def __init__(self, solver: GroupSolver):
        self.solver = solver
        self.by_endpoint: dict[int, list[int]] = {}
        self.by_form: dict = {}
        self.words: dict[int, Word] = {}

    def add(self, idx: int, endpoint: int, word: Word):
        self.by_endpoint.setdefault(endpoint, []).append(idx)
        self.words[idx] = word
        if self.solver.complete:
            self.by_form[(endpoint, self.solver.normal_form(word))] = idx

    def find(self, endpoint: int, word: Word) -> tuple[int | None, bool, str]:
        if self.solver.complete:
            idx = self.by_form.get((endpoint, self.solver.normal_form(word)))
            return idx, False, f"{self.solver.kind} normal form"
        unknown = False
        for idx in self.by_endpoint.get(endpoint, ()):
            v = self.solver.equal(word, self.words[idx])
            if v.value:
                return idx, False, v.certificate
            if v.value is None:
                unknown = True
        return None, unknown, ""

    def distinct_from_all(self, endpoint: int, word: Word) -> tuple[bool, str]:
        """Whether ``word`` is certified Distinct from every stored class."""
        certs = []
        for idx in self.by_endpoint.get(endpoint, ()):
            v = self.solver.equal(word, self.words[idx])
            if v.value is not False:
                return False, ""
            certs.append(v.certificate.split(" ")[0])
        return True, ", ".join(sorted(set(certs))) or "no classes at endpoint"


class CoveringBall:
    """Classes of based E-chains of length at most ``radius``."""

    def __init__(self, space: FiniteSpace, E: Entourage, radius: int, budget: int = DEFAULT_BUDGET):
        if radius < 0:
            raise CoveringError("radius must be nonnegative")
        self.space = space
        self.entourage = E
        self.radius = radius
        self.budget = budget
        self.graph = rips_graph(space, E)
        self.tree = spanning_tree(self.graph, space.basepoint)
        self.encoding = RipsEncoding(self.graph, self.tree)
        self.presentation = self.encoding.presentation
        self.solver = solver(self.presentation, budget)
        self.vertices: list[CoveringVertex] = []
        self.edges: set[tuple[int, int]] = set()
        self.merge_log: list[MergeRecord] = []
        self._steps: dict[tuple[int, int], int | None] = {}
        self.unknown_lookups = 0
        self._build()

    def __repr__(self):
        return (f"CoveringBall({self.entourage.provenance}, radius={self.radius}, "
                f"{len(self.vertices)} vertices, {self.incomplete_count} incomplete)")

    @property
    def base(self) -> int:
        return self._base

    @property
    def incomplete_count(self) -> int:
        return sum(not v.complete for v in self.vertices)

    def _build(self):
        index = ClassIndex(self.solver)
        verts: list[CoveringVertex] = []
        root = self.space.basepoint
        verts.append(CoveringVertex(0, root, (), (root,), 0))
        index.add(0, root, ())
        edges = set()
        log = []
        frontier = [0]
        adj = self.entourage.adjacency
        for depth in range(self.radius):
            nxt = []
            for vi in frontier:
                v = verts[vi]
                for y in adj[v.endpoint]:
                    w = free_reduce(v.word + self.encoding.step(v.endpoint, y))
                    hit, unknown, cert = index.find(y, w)
                    if hit is None:
                        hit = len(verts)
                        verts.append(CoveringVertex(hit, y, w, v.chain + (y,), depth + 1,
                                                    complete=not unknown))
                        index.add(hit, y, w)
                        nxt.append(hit)
                        if unknown:
                            v.complete = False
                            self.unknown_lookups += 1
                    else:
                        log.append(MergeRecord(vi, y, w, hit, cert))
                    edges.add((min(vi, hit), max(vi, hit)))
            frontier = nxt

        # deterministic numbering: endpoint id, then shortlex word
        order = sorted(range(len(verts)), key=lambda i: verts[i].key)
        new = {old: k for k, old in enumerate(order)}
        for k, old in enumerate(order):
            verts[old].index = k
        self.vertices = [verts[old] for old in order]
        self.edges = {tuple(sorted((new[a], new[b]))) for a, b in edges}
        self.merge_log = [MergeRecord(new[m.source], m.step_to, m.word, new[m.target], m.certificate)
                          for m in log]
        self._base = new[0]
        self._index = ClassIndex(self.solver)
        for v in self.vertices:
            self._index.add(v.index, v.endpoint, v.word)

    def find(self, endpoint: int, word: Word) -> int | None:
        idx, unknown, _ = self._index.find(endpoint, free_reduce(word))
        return idx

    def vertex_of(self, chain: Sequence[int]) -> int | None:
        """Ball vertex holding the class of a based E-chain, if present."""
        chain = tuple(chain)
        return self.find(chain[-1], self.encoding.word(chain))

    def step(self, vi: int, y: int) -> int | None:
        """Vertex of the class of ``vi``'s chain extended by ``y``."""
        key = (vi, y)
        if key not in self._steps:
            v = self.vertices[vi]
            if not self.entourage.contains(v.endpoint, y):
                raise CoveringError(f"({v.endpoint},{y}) is not an E-pair")
            self._steps[key] = self.find(y, v.word + self.encoding.step(v.endpoint, y))
        return self._steps[key]

    def endpoints(self, vertices) -> frozenset[int]:
        return frozenset(self.vertices[i].endpoint for i in vertices)


def build_covering_ball(space: FiniteSpace, E: Entourage, radius: int,
                        budget: int = DEFAULT_BUDGET) -> CoveringBall:
    return CoveringBall(space, E, radius, budget)


def _check_refines(F: Entourage, E: Entourage, what="F"):
    if not F.refines(E):
        raise CoveringError(f"{what} ({F.provenance}) does not refine {E.provenance}")


def estar_pairs(ball: CoveringBall, F: Entourage) -> frozenset[tuple[int, int]]:
    """F*-pairs among ball vertices, as ``(i, j)`` with ``i <= j``."""
    _check_refines(F, ball.entourage)
    out = set()
    for v in ball.vertices:
        out.add((v.index, v.index))
        for y in F.adjacency[v.endpoint]:
            w = ball.step(v.index, y)
            if w is not None:
                out.add((min(v.index, w), max(v.index, w)))
    return frozenset(out)


def _neighbours(ball: CoveringBall, F: Entourage) -> dict[int, set[int]]:
    nbrs: dict[int, set[int]] = {v.index: set() for v in ball.vertices}
    for a, b in estar_pairs(ball, F):
        if a != b:
            nbrs[a].add(b)
            nbrs[b].add(a)
    return nbrs


def basepoint_component(ball: CoveringBall, F: Entourage) -> frozenset[int]:
    """Vertices joined to the basepoint vertex by F*-steps inside the ball."""
    nbrs = _neighbours(ball, F)
    seen = {ball.base}
    queue = deque([ball.base])
    while queue:
        a = queue.popleft()
        for b in sorted(nbrs[a]):
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return frozenset(seen)


def is_saturated(ball: CoveringBall, A, F: Entourage) -> bool:
    A = set(A)
    return all((a in A) == (b in A) for a, b in estar_pairs(ball, F))


@dataclass
class StabilityReport:
    scales: list[str]
    components: list[frozenset[int]]
    stable_from: int
    stable: bool
    low_confidence: bool

    @property
    def candidate(self) -> frozenset[int]:
        return self.components[-1]

    def to_dict(self) -> dict:
        return {
            "scales": self.scales,
            "component_sizes": [len(c) for c in self.components],
            "stable_from": self.stable_from,
            "stable": self.stable,
            "low_confidence": self.low_confidence,
        }


def stabilized_component(ball: CoveringBall, ladder: Sequence[Entourage]) -> StabilityReport:
    """Basepoint components along a nested inner ladder ``F_1 >= ... >= F_k``.

    ``stable_from`` is the first rung from which the component no longer
    changes. A single rung is reported stable but low-confidence.
    """
    if not ladder:
        raise CoveringError("empty ladder")
    for k, F in enumerate(ladder):
        _check_refines(F, ball.entourage)
        if k and not F.refines(ladder[k - 1]):
            raise CoveringError("inner ladder is not nested")
    comps = [basepoint_component(ball, F) for F in ladder]
    start = len(comps) - 1
    while start > 0 and comps[start - 1] == comps[-1]:
        start -= 1
    k = len(comps)
    stable = k == 1 or comps[-2] == comps[-1]
    return StabilityReport([F.provenance for F in ladder], comps, start, stable, k == 1)


@dataclass
class ExtractionResult:
    component: frozenset[int]
    relation: Entourage
    witnesses: dict[tuple[int, int], tuple[int, int]]
    stability: StabilityReport | None = None

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return self.relation.sorted_pairs()


def extract_covering_relation(ball: CoveringBall, A, F: Entourage,
                              W: Entourage | None = None) -> ExtractionResult:
    """Endpoint images of the F*-pairs with both ends in ``A``, plus the diagonal.

    ``A`` must be uniformly open in the ball; when ``W`` is given this is
    checked as W*-saturation.
    """
    A = frozenset(A)
    if W is not None and not is_saturated(ball, A, W):
        raise CoveringError(f"component is not saturated for {W.provenance}")
    pairs = estar_pairs(ball, F)
    witnesses: dict[tuple[int, int], tuple[int, int]] = {}
    for a, b in sorted(pairs):
        if a in A and b in A:
            x, y = ball.vertices[a].endpoint, ball.vertices[b].endpoint
            if x != y:
                key = (min(x, y), max(x, y))
                cand = (a, b) if x < y else (b, a)
                best = witnesses.get(key)
                if best is None or _depth(ball, cand) < _depth(ball, best):
                    witnesses[key] = cand
    rel = Entourage(ball.space.n, witnesses, provenance=f"extracted[{ball.entourage.provenance}; {F.provenance}]")
    return ExtractionResult(A, rel, witnesses)


def _depth(ball: CoveringBall, pair: tuple[int, int]) -> tuple:
    return (ball.vertices[pair[0]].depth + ball.vertices[pair[1]].depth, pair)


def extract(ball: CoveringBall, ladder: Sequence[Entourage], F: Entourage | None = None) -> ExtractionResult:
    """Stabilize the basepoint component over ``ladder`` and extract with ``F``
    (default: the ball's own entourage)."""
    report = stabilized_component(ball, ladder)
    result = extract_covering_relation(ball, report.candidate, F or ball.entourage, W=ladder[-1])
    result.stability = report
    return result


# ---------------------------------------------------------------- image search


@dataclass
class ClassSearch:
    """E-classes of F-chains from a start point, explored breadth first."""

    states: list[tuple[int, Word, Chain]]
    index: ClassIndex
    closed: bool
    explored_length: int


def search_classes(encoding: RipsEncoding, group: GroupSolver, F: Entourage, start: int,
                   max_length: int, max_states: int = 200_000) -> ClassSearch:
    """Breadth-first search over F-chains from ``start``, deduplicated by
    E-class. ``closed`` means every extension of every found class was
    already found, so the search is exhaustive."""
    index = ClassIndex(group)
    states = [(start, (), (start,))]
    index.add(0, start, ())
    frontier = [0]
    length = 0
    uncertain = False
    while frontier and length < max_length and len(states) < max_states:
        nxt = []
        for si in frontier:
            x, w, chain = states[si]
            for y in F.adjacency[x]:
                w2 = free_reduce(w + encoding.step(x, y))
                hit, unknown, _ = index.find(y, w2)
                if hit is None:
                    uncertain |= unknown
                    hit = len(states)
                    states.append((y, w2, chain + (y,)))
                    index.add(hit, y, w2)
                    nxt.append(hit)
        frontier = nxt
        length += 1
    closed = not frontier and not uncertain
    return ClassSearch(states, index, closed, length)


@dataclass
class ImageReport:
    verdict: Verdict
    per_vertex: dict[int, Verdict]
    missing: list[int] = field(default_factory=list)

    @property
    def witness(self) -> int | None:
        return self.missing[0] if self.missing else None


def phi_image_check(ball: CoveringBall, F: Entourage, budget: int | None = None,
                    max_length: int | None = None, probe: Sequence[int] | None = None) -> ImageReport:
    """Which ball vertices are E-classes of based F-chains.

    Aggregate verdict: Surjective when every vertex is hit, NotSurjective
    when some vertex is certified missed (the F-chain search closed without
    reaching it), Unknown otherwise. The reported witness is the vertex of
    ``probe`` when that one is missed, else the shallowest missed vertex.
    """
    _check_refines(F, ball.entourage)
    budget = ball.budget if budget is None else budget
    if max_length is None:
        max_length = ball.radius + 2 * ball.space.n
    group = solver(ball.presentation, budget)
    search = search_classes(ball.encoding, group, F, ball.space.basepoint, max_length,
                            max_states=max(1000, min(200_000, budget)))
    per_vertex = {}
    missing = []
    for v in ball.vertices:
        hit, unknown, cert = search.index.find(v.endpoint, v.word)
        if hit is not None:
            chain = search.states[hit][2]
            per_vertex[v.index] = Verdict(True, f"F-chain {list(chain)}; {cert}", budget=budget,
                                          kind="surjectivity")
        elif search.closed and not unknown:
            per_vertex[v.index] = Verdict(False, f"F-chain class search closed after "
                                          f"{len(search.states)} classes", budget=budget,
                                          kind="surjectivity")
            missing.append(v.index)
        else:
            per_vertex[v.index] = Verdict(None, f"not reached within length {search.explored_length}",
                                          budget=budget, kind="surjectivity")
    if missing:
        missing.sort(key=lambda i: (ball.vertices[i].depth, ball.vertices[i].key))
        if probe is not None:
            pv = ball.vertex_of(probe)
            if pv in missing:
                missing.remove(pv)
                missing.insert(0, pv)
        v = ball.vertices[missing[0]]
        agg = Verdict(False, f"{len(missing)} ball vertices missed, e.g. chain {list(v.chain)}",
                      budget=budget, kind="surjectivity")
    elif all(p.value for p in per_vertex.values()):
        agg = Verdict(True, f"all {len(per_vertex)} ball vertices hit by F-chains", budget=budget,
                      kind="surjectivity")
    else:
        n_unknown = sum(p.value is None for p in per_vertex.values())
        agg = Verdict(None, f"{n_unknown} ball vertices undecided", budget=budget, kind="surjectivity")
    return ImageReport(agg, per_vertex, missing)


# ---------------------------------------------------------------- E-short joins


@dataclass
class EShortReport:
    verdict: Verdict
    pairs: dict[tuple[int, int], Verdict]
    witnesses: dict[tuple[int, int], Chain]


def _encoding_for(space: FiniteSpace, E: Entourage, root: int) -> RipsEncoding:
    graph = rips_graph(space, E)
    return RipsEncoding(graph, spanning_tree(graph, root))


def e_short_join_check(space: FiniteSpace, E: Entourage, F: Entourage, D: Entourage,
                       budget: int = DEFAULT_BUDGET, max_length: int | None = None) -> EShortReport:
    """For each off-diagonal F-pair ``(x, y)``, look for a D-chain from ``x``
    to ``y`` that is E-homotopic to the two-point chain ``{x, y}``."""
    _check_refines(F, E, "F")
    _check_refines(D, F, "D")
    if max_length is None:
        max_length = 2 * space.n
    roots = {}
    for block in chain_components(space, E):
        root = space.basepoint if space.basepoint in block else min(block)
        for x in block:
            roots[x] = root
    encodings: dict[int, RipsEncoding] = {}
    searches: dict[int, ClassSearch] = {}
    results: dict[tuple[int, int], Verdict] = {}
    witnesses: dict[tuple[int, int], Chain] = {}
    for x, y in F.sorted_pairs():
        for a, b in ((x, y), (y, x)):
            root = roots[a]
            if root not in encodings:
                encodings[root] = _encoding_for(space, E, root)
            enc = encodings[root]
            group = solver(enc.presentation, budget)
            if a not in searches:
                searches[a] = search_classes(enc, group, D, a, max_length,
                                             max_states=max(1000, min(200_000, budget)))
            search = searches[a]
            target = enc.step(a, b)
            hit, unknown, cert = search.index.find(b, target)
            if hit is not None:
                verdict = Verdict(True, f"D-chain {list(search.states[hit][2])}; {cert}",
                                  budget=budget, kind="eshort")
                witnesses[(a, b)] = search.states[hit][2]
            elif search.closed:
                ok, certs = search.index.distinct_from_all(b, target)
                if not search.index.by_endpoint.get(b):
                    verdict = Verdict(False, f"no D-chain joins {a} to {b}", budget=budget, kind="eshort")
                elif ok:
                    verdict = Verdict(False, f"all D-classes at {b} distinct from [{{{a},{b}}}] ({certs})",
                                      budget=budget, kind="eshort")
                else:
                    verdict = Verdict(None, "search closed but a comparison was undecided",
                                      budget=budget, kind="eshort")
            else:
                verdict = Verdict(None, f"not found within length {search.explored_length}",
                                  budget=budget, kind="eshort")
            results[(a, b)] = verdict
    if any(v.value is False for v in results.values()):
        bad = next(k for k, v in sorted(results.items()) if v.value is False)
        agg = Verdict(False, f"pair {bad} has no E-short D-chain", budget=budget, kind="eshort")
    elif all(v.value for v in results.values()):
        agg = Verdict(True, f"all {len(results)} oriented F-pairs joined", budget=budget, kind="eshort")
    else:
        agg = Verdict(None, "some pairs undecided", budget=budget, kind="eshort")
    return EShortReport(agg, results, witnesses)
