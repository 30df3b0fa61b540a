"""Multi-scale driver: run the pipeline down a nested ladder of entourages,
collect per-scale invariants and cross-scale verdicts, and render reports."""

from __future__ import annotations

import csv
import io
import json
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .covering import build_covering_ball, e_short_join_check, extract, phi_image_check
from .groups import DEFAULT_BUDGET, abelianize, is_trivial_group, simplify
from .homotopy import RipsEncoding
from .oracle import MAX_POINTS, enumerate_classes
from .rips import rips_graph, spanning_tree
from .space import (
    Entourage,
    FiniteSpace,
    as_exact,
    chain_components,
    entourage_from_scale,
    fmt_exact,
)

SCHEMA = 1
CSV_COLUMNS = [
    "position", "scale", "edges", "triangles", "chain_connected", "generators", "relators",
    "generators_simplified", "relators_simplified", "free_rank", "torsion", "trivial",
]


class AnalysisError(ValueError):
    pass


@dataclass
class AnalysisConfig:
    budget: int = DEFAULT_BUDGET
    radius: int | None = None
    radius_cap: int = 12
    eshort: Sequence[tuple[int, int, int]] | None = None
    extract: bool = True
    seed: int = 0
    jobs: int = 1
    oracle: bool = False


@dataclass
class ScaleRecord:
    position: int
    scale: str
    edges: int
    triangles: int
    chain_connected: bool
    generators: int
    relators: int
    generators_simplified: int
    relators_simplified: int
    free_rank: int
    torsion: tuple[int, ...]
    trivial: dict

    @property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, self.torsion)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["torsion"] = list(self.torsion)
        return d


@dataclass
class ScaleReport:
    space: dict
    scales: list[ScaleRecord]
    bonding: list[dict] = field(default_factory=list)
    eshort: list[dict] = field(default_factory=list)
    extractions: list[dict] = field(default_factory=list)
    oracle: list[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_dict(self, timing: bool = False) -> dict:
        meta = dict(self.metadata)
        if not timing:
            meta.pop("wall_time", None)
        return {
            "schema": SCHEMA,
            "space": self.space,
            "scales": [s.to_dict() for s in self.scales],
            "bonding": self.bonding,
            "eshort": self.eshort,
            "extractions": self.extractions,
            "oracle": self.oracle,
            "critical_scales": critical_scales(self),
            "metadata": meta,
        }


def as_entourage(space: FiniteSpace, rung) -> Entourage:
    if isinstance(rung, Entourage):
        if rung.n != space.n:
            raise AnalysisError("ladder relation belongs to a different space")
        return rung
    return entourage_from_scale(space, rung)


def check_ladder(space: FiniteSpace, ladder) -> list[Entourage]:
    if not ladder:
        raise AnalysisError("empty ladder")
    rungs = [as_entourage(space, r) for r in ladder]
    for k in range(1, len(ladder)):
        a, b = ladder[k - 1], ladder[k]
        if not isinstance(a, Entourage) and not isinstance(b, Entourage):
            if not as_exact(b) < as_exact(a):
                raise AnalysisError("ladder not nested: thresholds must strictly decrease")
        if not rungs[k].refines(rungs[k - 1]):
            raise AnalysisError(f"ladder not nested: {rungs[k].provenance} does not refine "
                                f"{rungs[k - 1].provenance}")
    return rungs


def graph_diameter(E: Entourage, root: int) -> int:
    """Hop diameter of the root's component."""
    comp = next(b for b in chain_components(None, E) if root in b)
    best = 0
    for s in comp:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in E.adjacency[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    queue.append(b)
        best = max(best, max(dist.values()))
    return best


def default_radius(space: FiniteSpace, rungs: Sequence[Entourage], cap: int) -> int:
    return min(2 * graph_diameter(rungs[-1], space.basepoint), cap)


def scale_record(space: FiniteSpace, E: Entourage, position: int, budget: int) -> ScaleRecord:
    graph = rips_graph(space, E)
    tree = spanning_tree(graph, space.basepoint)
    pres = RipsEncoding(graph, tree).presentation
    simple = simplify(pres, budget)
    inv = abelianize(pres)
    return ScaleRecord(
        position=position,
        scale=E.provenance,
        edges=len(graph.edges),
        triangles=graph.triangle_count(),
        chain_connected=len(chain_components(space, E)) == 1,
        generators=pres.ngens,
        relators=len(pres.relators),
        generators_simplified=simple.ngens,
        relators_simplified=len(simple.relators),
        free_rank=inv.rank,
        torsion=inv.torsion,
        trivial=is_trivial_group(pres, budget).to_dict(),
    )


def _space_summary(space: FiniteSpace) -> dict:
    out = {"n": space.n, "basepoint": space.basepoint}
    if space.coords is not None:
        out["coords"] = [[fmt_exact(c) for c in p] for p in space.coords]
    return out


def analyze_ladder(space: FiniteSpace, ladder, config: AnalysisConfig | None = None) -> ScaleReport:
    """Run every per-scale and cross-scale computation down ``ladder``.

    ``ladder`` holds thresholds (strictly decreasing) and/or explicit
    :class:`Entourage` objects; each rung must refine the previous one.
    """
    config = config or AnalysisConfig()
    t0 = time.perf_counter()
    rungs = check_ladder(space, ladder)
    radius = config.radius if config.radius is not None else default_radius(space, rungs, config.radius_cap)

    if config.jobs > 1 and len(rungs) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(scale_record, space, E, k, config.budget) for k, E in enumerate(rungs)]
            records = [f.result() for f in futures]
    else:
        records = [scale_record(space, E, k, config.budget) for k, E in enumerate(rungs)]

    balls = {}

    def ball_at(k):
        if k not in balls:
            balls[k] = build_covering_ball(space, rungs[k], radius, config.budget)
        return balls[k]

    bonding = []
    for k in range(1, len(rungs)):
        ball = ball_at(k - 1)
        rep = phi_image_check(ball, rungs[k], config.budget)
        entry = {"coarse": k - 1, "fine": k, "ball_vertices": len(ball.vertices),
                 "incomplete_vertices": ball.incomplete_count, **rep.verdict.to_dict()}
        if rep.missing:
            entry["witness_chain"] = list(ball.vertices[rep.witness].chain)
            entry["missing"] = len(rep.missing)
        bonding.append(entry)

    extractions = []
    if config.extract:
        for k in range(len(rungs) - 1):
            ball = ball_at(k)
            res = extract(ball, rungs[k:])
            endpoints = ball.endpoints(res.component)
            extractions.append({
                "outer": k,
                "stability": res.stability.to_dict(),
                "component_size": len(res.component),
                "component_endpoints": len(endpoints),
                "pairs": [list(p) for p in res.sorted_pairs()],
                "equals_outer": res.relation == rungs[k],
            })

    triples = config.eshort
    if triples is None:
        triples = [(k, k, k + 1) for k in range(len(rungs) - 1)]
    eshort = []
    for e, f, d in triples:
        rep = e_short_join_check(space, rungs[e], rungs[f], rungs[d], config.budget)
        eshort.append({"E": e, "F": f, "D": d, **rep.verdict.to_dict(),
                       "pairs_yes": sum(1 for v in rep.pairs.values() if v.value),
                       "pairs_no": sum(1 for v in rep.pairs.values() if v.value is False),
                       "pairs_unknown": sum(1 for v in rep.pairs.values() if v.value is None)})

    oracle = []
    if config.oracle:
        if space.n > MAX_POINTS:
            raise AnalysisError(f"oracle cross-check needs at most {MAX_POINTS} points")
        for k, E in enumerate(rungs):
            classes = enumerate_classes(space, E, 3, 2)
            ball = build_covering_ball(space, E, 3, config.budget)
            oracle.append({"position": k, "oracle_classes": len(classes),
                           "ball_vertices": len(ball.vertices),
                           "agree": len(classes) == len(ball.vertices)})

    meta = {"budget": config.budget, "radius": radius, "seed": config.seed,
            "wall_time": round(time.perf_counter() - t0, 3)}
    return ScaleReport(_space_summary(space), records, bonding, eshort, extractions, oracle, meta)


def critical_scales(report: ScaleReport) -> list[int]:
    """Ladder positions ``k`` where rung ``k`` differs from rung ``k - 1``:
    abelian invariants change, or the bonding map between them is not
    certified surjective."""
    out = []
    bonding = {b["fine"]: b for b in report.bonding}
    for k in range(1, len(report.scales)):
        changed = report.scales[k].invariants != report.scales[k - 1].invariants
        b = bonding.get(k)
        if changed or (b is not None and b["verdict"] != "Surjective"):
            out.append(k)
    return out


def unknown_dominated(report: ScaleReport) -> bool:
    verdicts = [s.trivial["verdict"] for s in report.scales]
    verdicts += [b["verdict"] for b in report.bonding] + [e["verdict"] for e in report.eshort]
    unknown = sum(v == "Unknown" for v in verdicts)
    return unknown * 2 > len(verdicts)


# ---------------------------------------------------------------- rendering


def _render_json(report: ScaleReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


def _render_csv(report: ScaleReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for s in report.scales:
        writer.writerow([
            s.position, s.scale, s.edges, s.triangles, str(s.chain_connected).lower(),
            s.generators, s.relators, s.generators_simplified, s.relators_simplified,
            s.free_rank, ";".join(map(str, s.torsion)), s.trivial["verdict"],
        ])
    return buf.getvalue()


def _render_svg(report: ScaleReport) -> str:
    """Step plot of free rank against ladder position."""
    ranks = [s.free_rank for s in report.scales]
    w, h, pad = 480, 240, 40
    n = max(len(ranks), 1)
    top = max(max(ranks, default=0), 1)
    dx = (w - 2 * pad) / n
    sy = (h - 2 * pad) / top

    def y(r):
        return h - pad - r * sy

    pts = []
    for k, r in enumerate(ranks):
        pts.append(f"{pad + k * dx:.2f},{y(r):.2f}")
        pts.append(f"{pad + (k + 1) * dx:.2f},{y(r):.2f}")
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">',
        f'<line x1="{pad}" y1="{h - pad}" x2="{w - pad}" y2="{h - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{h - pad}" stroke="black"/>',
        f'<polyline fill="none" stroke="steelblue" stroke-width="2" points="{" ".join(pts)}"/>',
        f'<text x="{w / 2:.0f}" y="{h - 8}" text-anchor="middle" font-size="12">ladder position</text>',
        f'<text x="12" y="{h / 2:.0f}" font-size="12" transform="rotate(-90 12 {h / 2:.0f})" '
        f'text-anchor="middle">free rank</text>',
    ]
    for k, s in enumerate(report.scales):
        lines.append(f'<text x="{pad + (k + 0.5) * dx:.2f}" y="{h - pad + 14}" text-anchor="middle" '
                     f'font-size="10">{_xml_escape(s.scale)}</text>')
    for r in range(top + 1):
        lines.append(f'<text x="{pad - 6}" y="{y(r) + 4:.2f}" text-anchor="end" font-size="10">{r}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _xml_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


_RENDERERS = {"json": _render_json, "csv": _render_csv, "svg": _render_svg}


def render_report(report: ScaleReport, fmt: str) -> str:
    if fmt not in _RENDERERS:
        raise AnalysisError(f"unsupported format {fmt!r}")
    if not report.scales:
        raise AnalysisError("empty report")
    return _RENDERERS[fmt](report)


def write_report(report: ScaleReport, out_dir, formats=("json",), stem: str = "report") -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for fmt in formats:
        path = out_dir / f"{stem}.{fmt}"
        path.write_text(render_report(report, fmt))
        paths.append(path)
    return paths
