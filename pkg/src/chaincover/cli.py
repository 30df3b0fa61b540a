"""Command line: ``chaincover analyze | extract | exex``.

Exit codes: 0 success, 1 error, 2 when Unknown verdicts dominate (any
Unknown with ``--strict``).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .analysis import AnalysisConfig, AnalysisError, analyze_ladder, unknown_dominated, write_report
from .covering import CoveringError, build_covering_ball, extract, phi_image_check
from .fixtures import U_INTERVALS, grid, u_relation
from .groups import DEFAULT_BUDGET, GroupError
from .space import (
    Entourage,
    FiniteSpace,
    SpaceError,
    as_exact,
    build_space,
    entourage_from_diff_intervals,
    entourage_from_pairs,
    entourage_from_scale,
    fmt_exact,
)

FORMATS = ("json", "csv", "svg")
KINDS = ("points-csv", "distance-table-json")
EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    input: Path
    kind: str
    basepoint: int | None = None
    scales: list[str] = field(default_factory=list)
    outer: str | None = None
    budget: int = DEFAULT_BUDGET
    radius: int | None = None
    out: Path = Path("out")
    formats: tuple[str, ...] = ("json",)
    strict: bool = False
    jobs: int = 1
    oracle: bool = False


# ---------------------------------------------------------------- inputs


def guess_kind(path: Path) -> str:
    return "points-csv" if path.suffix.lower() == ".csv" else "distance-table-json"


def read_points_csv(path: Path, basepoint=None) -> FiniteSpace:
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ConfigError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if len(header) < 2 or header[0] != "id" or any(h != f"x{k}" for k, h in enumerate(header[1:], 1)):
        raise ConfigError(f"{path}: header must be id,x1[,x2,...]")
    points = []
    for lineno, row in enumerate(rows[1:], 2):
        if len(row) != len(header):
            raise ConfigError(f"{path}:{lineno}: expected {len(header)} fields")
        try:
            points.append((int(row[0]), tuple(as_exact(c.strip()) for c in row[1:])))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return build_space(points, basepoint=basepoint)


def read_distance_json(path: Path, basepoint=None) -> FiniteSpace:
    data = _load_json(path)
    if not isinstance(data, dict) or "n" not in data or ("d" not in data and "d2" not in data):
        raise ConfigError(f'{path}: expected {{"n": k, "d": [[...]]}}')
    n = data["n"]
    squared = "d" not in data
    table = data["d2"] if squared else data["d"]
    if not isinstance(n, int) or n < 1 or len(table) != n or any(len(r) != n for r in table):
        raise ConfigError(f"{path}: distance table must be n x n")
    try:
        table = [[as_exact(v) for v in row] for row in table]
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return build_space([(i, None) for i in range(n)], distances=table, squared=squared, basepoint=basepoint)


def read_space(path: Path, kind: str, basepoint=None) -> FiniteSpace:
    if not path.is_file():
        raise ConfigError(f"cannot read input {path}")
    if kind == "points-csv":
        return read_points_csv(path, basepoint)
    if kind == "distance-table-json":
        return read_distance_json(path, basepoint)
    raise ConfigError(f"unknown input kind {kind!r}")


def read_relation(path: Path, space: FiniteSpace) -> Entourage:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: relation must be a JSON object")
    if "pairs" in data:
        try:
            pairs = [(int(a), int(b)) for a, b in data["pairs"]]
        except (TypeError, ValueError):
            raise ConfigError(f"{path}: pairs must be [[i, j], ...]") from None
        return entourage_from_pairs(space, pairs, provenance=f"@{path.name}")
    if "diff_intervals" in data:
        try:
            intervals = [(a, b) for a, b in data["diff_intervals"]]
        except (TypeError, ValueError):
            raise ConfigError(f"{path}: diff_intervals must be [[a, b], ...]") from None
        if any(not isinstance(v, str) for iv in intervals for v in iv):
            raise ConfigError(f"{path}: interval endpoints must be decimal strings")
        return entourage_from_diff_intervals(space, intervals)
    raise ConfigError(f'{path}: expected "pairs" or "diff_intervals"')


def _load_json(path: Path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from None


def parse_scales(text: str) -> list[str]:
    if text.startswith("@") and "," not in text and not text.endswith(".json"):
        # @file holding one scale per line
        path = Path(text[1:])
        try:
            return [ln.strip() for ln in path.read_text().splitlines() if ln.strip()]
        except OSError:
            raise ConfigError(f"cannot read scale file {path}") from None
    return [s.strip() for s in text.split(",") if s.strip()]


def resolve_rung(item: str, space: FiniteSpace):
    """A decimal threshold, or ``@relation.json``."""
    if item.startswith("@"):
        return read_relation(Path(item[1:]), space)
    try:
        value = as_exact(item)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad scale {item!r}: expected a decimal or @relation.json") from None
    if value <= 0:
        raise ConfigError(f"scale must be positive, got {item}")
    return entourage_from_scale(space, value)


# ---------------------------------------------------------------- commands


def cmd_analyze(config: RunConfig) -> int:
    space = read_space(config.input, config.kind, config.basepoint)
    if not config.scales:
        raise ConfigError("no scales given")
    ladder = [resolve_rung(s, space) for s in config.scales]
    _check_thresholds(config.scales)
    acfg = AnalysisConfig(budget=config.budget, radius=config.radius, jobs=config.jobs, oracle=config.oracle)
    report = analyze_ladder(space, ladder, acfg)
    for path in write_report(report, config.out, config.formats):
        print(path)
    return _exit_for(report, config.strict)


def cmd_extract(config: RunConfig) -> int:
    space = read_space(config.input, config.kind, config.basepoint)
    if config.outer is None:
        raise ConfigError("extract needs --outer")
    outer = resolve_rung(config.outer, space)
    inner = [resolve_rung(s, space) for s in config.scales]
    ladder = [outer] + inner
    for k in range(1, len(ladder)):
        if not ladder[k].refines(ladder[k - 1]):
            raise ConfigError("ladder not nested")
    if outer.is_diagonal:
        print("warning: no motion possible (outer relation is the diagonal)", file=sys.stderr)
    radius = config.radius if config.radius is not None else min(2 * space.n, 12)
    ball = build_covering_ball(space, outer, radius, config.budget)
    res = extract(ball, ladder)
    doc = {
        "schema": 1,
        "outer": outer.provenance,
        "inner": [E.provenance for E in inner],
        "radius": radius,
        "pairs": [list(p) for p in res.sorted_pairs()],
        "witnesses": [
            {"pair": list(p), "chains": [list(ball.vertices[a].chain), list(ball.vertices[b].chain)]}
            for p, (a, b) in sorted(res.witnesses.items())
        ],
        "stability": res.stability.to_dict(),
        "equals_outer": res.relation == outer,
    }
    config.out.mkdir(parents=True, exist_ok=True)
    path = config.out / "extracted.json"
    path.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    print(path)
    if inner and res.stability.low_confidence:
        print("warning: basepoint component not stabilized over the ladder", file=sys.stderr)
    return EXIT_OK


def cmd_exex(step: str = "0.25", budget: int = DEFAULT_BUDGET, out=None) -> int:
    """Rebuild the grid example with U = (-1,1) u (2,4) u (-4,-2)."""
    h = as_exact(step)
    if h <= 0:
        raise ConfigError("step must be positive")
    space = grid(step)
    U = u_relation(space)
    xs = [p[0] for p in space.coords]
    base = space.basepoint
    out = out or sys.stdout
    say = lambda s="": print(s, file=out)  # noqa: E731

    say(f"grid: {space.n} points, step {fmt_exact(h)}, basepoint {fmt_exact(xs[base])}")
    say("U = " + " u ".join(f"({a},{b})" for a, b in U_INTERVALS))
    if h >= 1:
        print("warning: degenerate grid, no nonzero grid difference lies in (-1,1); "
              "U moves nowhere small and the example is vacuous", file=sys.stderr)
        return EXIT_OK

    far = [i for i, x in enumerate(xs) if 2 < abs(x - xs[base]) < 4]
    if not far:
        print("warning: no grid point at distance in (2,4) from the basepoint", file=sys.stderr)
        return EXIT_OK
    probe_pt = min(far, key=lambda i: (abs(xs[i] - xs[base] - 3), xs[i]))
    probe = (base, probe_pt)
    inner = [entourage_from_scale(space, min(as_exact("2.4") * h, 1)),
             entourage_from_scale(space, as_exact("1.2") * h)]
    radius = min(2 * (space.n - 1), 12)
    ball = build_covering_ball(space, U, radius, budget)
    res = extract(ball, [U] + inner)
    A = res.component
    v = ball.vertex_of(probe)
    label = "{" + f"{fmt_exact(xs[base])},{fmt_exact(xs[probe_pt])}" + "}"

    say(f"covering ball at U: radius {radius}, {len(ball.vertices)} classes, "
        f"{ball.incomplete_count} incomplete")
    say("component sizes over " + ", ".join(res.stability.scales) + ": "
        + ", ".join(str(len(c)) for c in res.stability.components))
    say(f"A = stabilized basepoint component, {len(A)} classes over {len(ball.endpoints(A))} points")
    outside = v is not None and v not in A
    say(f"  chain {label} is a single U-step; no small-step path from the basepoint reaches its class")

    V = entourage_from_diff_intervals(space, [("-1", "1")])
    matches = res.relation == V
    say(f"extracted relation: {len(res.relation.pairs)} off-diagonal pairs; "
        f"equal to the grid pairs with difference in (-1,1): {'yes' if matches else 'no'}")

    img = phi_image_check(ball, inner[-1], budget, probe=probe)
    wchain = ball.vertices[img.witness].chain if img.witness is not None else None
    witness_ok = img.verdict.value is False and wchain == probe
    say(f"image of fine chains ({inner[-1].provenance}): {img.verdict.label}, "
        f"{len(img.missing)} classes missed, witness "
        + ("{" + ",".join(fmt_exact(xs[i]) for i in wchain) + "}" if wchain else "none"))

    ok = outside and matches and witness_ok
    say(f"class of {label} outside A: {_mark(outside)}; extracted V-grid relation: {_mark(matches)}")
    return EXIT_OK if ok else EXIT_ERROR


def _mark(flag: bool) -> str:
    return "CONFIRMED" if flag else "FAILED"


def _check_thresholds(items: list[str]) -> None:
    vals = [as_exact(s) for s in items if not s.startswith("@")]
    if any(b >= a for a, b in zip(vals, vals[1:])):
        raise ConfigError("ladder not nested: thresholds must strictly decrease")


def _exit_for(report, strict: bool) -> int:
    if strict:
        verdicts = [s.trivial["verdict"] for s in report.scales]
        verdicts += [b["verdict"] for b in report.bonding] + [e["verdict"] for e in report.eshort]
        return EXIT_UNKNOWN if "Unknown" in verdicts else EXIT_OK
    return EXIT_UNKNOWN if unknown_dominated(report) else EXIT_OK


# ---------------------------------------------------------------- argparse


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _formats(text: str) -> tuple[str, ...]:
    out = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in out if f not in FORMATS]
    if bad or not out:
        raise argparse.ArgumentTypeError(f"formats must be among {','.join(FORMATS)}")
    return out


def build_parser() -> argparse.ArgumentParser:
    env_budget = int(os.environ.get("CHAINCOVER_BUDGET", DEFAULT_BUDGET))
    p = argparse.ArgumentParser(prog="chaincover", description="Chain homotopy and covering "
                                "diagnostics for finite uniform structures.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--input", required=True, type=Path, help="points CSV or distance-table JSON")
        sp.add_argument("--kind", choices=KINDS, help="input kind (default: from the file extension)")
        sp.add_argument("--basepoint", type=int, help="basepoint id (default 0)")
        sp.add_argument("--budget", type=_positive_int, default=env_budget,
                        help="word-problem step budget (env CHAINCOVER_BUDGET, default %(default)s)")
        sp.add_argument("--radius", type=int, help="covering-ball radius")
        sp.add_argument("--out", type=Path, default=Path("out"), help="output directory")

    a = sub.add_parser("analyze", help="invariants and verdicts down a scale ladder")
    common(a)
    a.add_argument("--scales", required=True, help="comma list of decimals and @relation.json, or @file")
    a.add_argument("--formats", type=_formats, default=("json",), help="json,csv,svg")
    a.add_argument("--strict", action="store_true", help="exit 2 on any Unknown verdict")
    a.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for per-scale work")
    a.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)

    e = sub.add_parser("extract", help="extract a covering relation from an outer relation")
    common(e)
    e.add_argument("--outer", required=True, help="outer relation: a decimal or @relation.json")
    e.add_argument("--scales", default="", help="inner ladder, finest last")

    x = sub.add_parser("exex", help="reproduce the interval example on a 1-D grid")
    x.add_argument("--step", default="0.25", help="grid step on [-6, 6] (default 0.25)")
    x.add_argument("--budget", type=_positive_int, default=env_budget)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "exex":
            return cmd_exex(args.step, args.budget)
        config = RunConfig(
            input=args.input,
            kind=args.kind or guess_kind(args.input),
            basepoint=args.basepoint,
            scales=parse_scales(args.scales) if args.scales else [],
            outer=getattr(args, "outer", None),
            budget=args.budget,
            radius=args.radius,
            out=args.out,
            formats=getattr(args, "formats", ("json",)),
            strict=getattr(args, "strict", False),
            jobs=getattr(args, "jobs", 1),
            oracle=getattr(args, "oracle", False),
        )
        if config.radius is not None and config.radius < 0:
            raise ConfigError("radius must be nonnegative")
        if args.command == "analyze":
            return cmd_analyze(config)
        return cmd_extract(config)
    except (ConfigError, SpaceError, AnalysisError, CoveringError, GroupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
