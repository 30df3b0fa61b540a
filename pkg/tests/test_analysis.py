import json
from pathlib import Path

import jsonschema
import pytest

from chaincover.analysis import (
    AnalysisConfig,
    AnalysisError,
    analyze_ladder,
    critical_scales,
    render_report,
    write_report,
)
from chaincover.space import entourage_from_diff_intervals

GOLDEN = Path(__file__).parent / "golden"
SCHEMA = Path(__file__).parents[1] / "src" / "chaincover" / "report.schema.json"


@pytest.fixture(scope="module")
def hex_report(hexs):
    return analyze_ladder(hexs, ["2.1", "1.8", "1.2"])


@pytest.fixture(scope="module")
def grid_report(G, U):
    return analyze_ladder(G, [U, "0.3"])


def test_hex_invariants(hex_report):
    assert [(s.free_rank, s.torsion) for s in hex_report.scales] == [(0, ()), (0, ()), (1, ())]
    assert [s.trivial["verdict"] for s in hex_report.scales] == ["True", "True", "False"]
    assert critical_scales(hex_report) == [2]


def test_grid(grid_report, G):
    assert grid_report.bonding[0]["verdict"] == "NotSurjective"
    assert critical_scales(grid_report) == [1]
    V = entourage_from_diff_intervals(G, [("-1", "1")])
    assert [tuple(p) for p in grid_report.extractions[0]["pairs"]] == V.sorted_pairs()


def test_singleton(one):
    r = analyze_ladder(one, ["1", "0.5"])
    assert all(s.trivial["verdict"] == "True" for s in r.scales)
    assert all(b["verdict"] == "Surjective" for b in r.bonding)
    assert critical_scales(r) == []


def test_monotone_counts(hex_report):
    edges = [s.edges for s in hex_report.scales]
    tris = [s.triangles for s in hex_report.scales]
    assert edges == sorted(edges, reverse=True) and tris == sorted(tris, reverse=True)


def test_ladder_validation(hexs):
    with pytest.raises(AnalysisError, match="ladder not nested"):
        analyze_ladder(hexs, ["1.2", "1.8"])
    with pytest.raises(AnalysisError):
        analyze_ladder(hexs, [])


def test_golden_hex_csv(hex_report):
    assert render_report(hex_report, "csv") == (GOLDEN / "hex_report.csv").read_text()


def test_golden_hex_svg(hex_report):
    assert render_report(hex_report, "svg") == (GOLDEN / "hex_report.svg").read_text()


def test_golden_grid_json(grid_report):
    text = render_report(grid_report, "json")
    assert text == (GOLDEN / "grid_report.json").read_text()
    doc = json.loads(text)
    pairs = doc["extractions"][0]["pairs"]
    assert pairs == sorted(pairs)
    assert doc["schema"] == 1 and "wall_time" not in doc["metadata"]


def test_schema(hex_report, grid_report):
    schema = json.loads(SCHEMA.read_text())
    for r in (hex_report, grid_report):
        jsonschema.validate(json.loads(render_report(r, "json")), schema)


def test_render_deterministic(hexs, hex_report):
    again = analyze_ladder(hexs, ["2.1", "1.8", "1.2"])
    for fmt in ("json", "csv", "svg"):
        assert render_report(again, fmt) == render_report(hex_report, fmt)


def test_bad_format(hex_report):
    with pytest.raises(AnalysisError):
        render_report(hex_report, "xml")


def test_write_report(tmp_path, hex_report):
    paths = write_report(hex_report, tmp_path, ("json", "csv"))
    assert [p.name for p in paths] == ["report.json", "report.csv"]


def test_parallel_matches_serial(hexs, hex_report):
    r = analyze_ladder(hexs, ["2.1", "1.8", "1.2"], AnalysisConfig(jobs=2))
    assert render_report(r, "json") == render_report(hex_report, "json")


def test_bigger_budget_keeps_verdicts(hexs, hex_report):
    r = analyze_ladder(hexs, ["2.1", "1.8", "1.2"], AnalysisConfig(budget=10**7, radius=8))
    for a, b in zip(r.scales, hex_report.scales):
        assert a.trivial["verdict"] == b.trivial["verdict"]
    assert [x["verdict"] for x in r.bonding] == [x["verdict"] for x in hex_report.bonding]


def test_oracle_crosscheck(hexs):
    r = analyze_ladder(hexs, ["2.1", "1.2"], AnalysisConfig(oracle=True))
    assert all(o["agree"] for o in r.oracle)
