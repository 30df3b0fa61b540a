import json

import pytest

from chaincover.cli import main
from chaincover.fixtures import grid
from chaincover.space import entourage_from_diff_intervals

HEX_D2 = [[0, 1, 3, 4, 3, 1], [1, 0, 1, 3, 4, 3], [3, 1, 0, 1, 3, 4],
          [4, 3, 1, 0, 1, 3], [3, 4, 3, 1, 0, 1], [1, 3, 4, 3, 1, 0]]


@pytest.fixture
def files(tmp_path):
    hexcsv = tmp_path / "hex.csv"
    s = "0.8660254037844386"
    hexcsv.write_text(f"id,x1,x2\n0,1,0\n1,0.5,{s}\n2,-0.5,{s}\n3,-1,0\n4,-0.5,-{s}\n5,0.5,-{s}\n")
    hexjson = tmp_path / "hex.json"
    hexjson.write_text(json.dumps({"n": 6, "d2": HEX_D2}))
    g = grid()
    gridcsv = tmp_path / "grid.csv"
    gridcsv.write_text("id,x1\n" + "".join(f"{i},{float(g.coords[i][0])}\n" for i in g.ids))
    u = tmp_path / "u.json"
    u.write_text(json.dumps({"diff_intervals": [["-1", "1"], ["2", "4"], ["-4", "-2"]]}))
    full = tmp_path / "full.json"
    full.write_text(json.dumps({"pairs": [[i, j] for i in range(6) for j in range(i + 1, 6)]}))
    diag = tmp_path / "diag.json"
    diag.write_text(json.dumps({"pairs": []}))
    return {"hexcsv": hexcsv, "hexjson": hexjson, "grid": gridcsv, "u": u, "full": full, "diag": diag,
            "out": tmp_path / "out"}


def test_analyze_hex(files):
    rc = main(["analyze", "--input", str(files["hexcsv"]), "--scales", "2.1,1.8,1.2", "--basepoint", "0",
               "--out", str(files["out"]), "--formats", "json,csv,svg"])
    assert rc == 0
    doc = json.loads((files["out"] / "report.json").read_text())
    assert [s["free_rank"] for s in doc["scales"]] == [0, 0, 1]
    assert doc["critical_scales"] == [2]
    assert (files["out"] / "report.svg").exists()


def test_analyze_is_byte_stable(files, tmp_path):
    args = ["analyze", "--input", str(files["hexjson"]), "--scales", "2.1,1.8,1.2"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    assert (tmp_path / "a/report.json").read_bytes() == (tmp_path / "b/report.json").read_bytes()


def test_missing_basepoint(files, capsys):
    rc = main(["analyze", "--input", str(files["hexcsv"]), "--scales", "2.1", "--basepoint", "9",
               "--out", str(files["out"])])
    assert rc == 1
    assert "9" in capsys.readouterr().err


def test_not_nested(files, capsys):
    rc = main(["analyze", "--input", str(files["hexcsv"]), "--scales", "1.2,1.8", "--out", str(files["out"])])
    assert rc == 1
    assert "ladder not nested" in capsys.readouterr().err


def test_bad_inputs(files, tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n0,1\n")
    assert main(["analyze", "--input", str(bad), "--scales", "1"]) == 1
    assert main(["analyze", "--input", str(tmp_path / "nope.csv"), "--scales", "1"]) == 1
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert main(["analyze", "--input", str(broken), "--scales", "1"]) == 1
    assert main(["analyze", "--input", str(files["hexjson"]), "--scales", "abc"]) == 1
    err = capsys.readouterr().err
    assert "header" in err and "invalid JSON" in err


def test_scale_file_and_relation_rungs(files, tmp_path):
    scales = tmp_path / "ladder.txt"
    scales.write_text(f"@{files['u']}\n0.6\n0.3\n")
    rc = main(["analyze", "--input", str(files["grid"]), "--basepoint", "24", "--scales", f"@{scales}",
               "--out", str(files["out"])])
    assert rc == 0
    doc = json.loads((files["out"] / "report.json").read_text())
    assert doc["scales"][0]["scale"].startswith("U=")


def test_extract_grid(files):
    rc = main(["extract", "--input", str(files["grid"]), "--basepoint", "24", "--outer", f"@{files['u']}",
               "--scales", "0.6,0.3", "--out", str(files["out"])])
    assert rc == 0
    doc = json.loads((files["out"] / "extracted.json").read_text())
    V = entourage_from_diff_intervals(grid(), [("-1", "1")])
    assert [tuple(p) for p in doc["pairs"]] == V.sorted_pairs()
    assert doc["stability"]["stable"]


def test_extract_hex(files, capsys):
    assert main(["extract", "--input", str(files["hexjson"]), "--outer", f"@{files['full']}",
                 "--out", str(files["out"])]) == 0
    assert json.loads((files["out"] / "extracted.json").read_text())["equals_outer"]
    assert main(["extract", "--input", str(files["hexjson"]), "--outer", f"@{files['diag']}",
                 "--out", str(files["out"])]) == 0
    assert json.loads((files["out"] / "extracted.json").read_text())["pairs"] == []
    assert "no motion possible" in capsys.readouterr().err


def test_exex(capsys):
    assert main(["exex"]) == 0
    out = capsys.readouterr().out
    assert "class of {0,3} outside A: CONFIRMED; extracted V-grid relation: CONFIRMED" in out
    assert "witness {0,3}" in out


def test_exex_coarse(capsys):
    assert main(["exex", "--step", "0.5"]) == 0
    assert "CONFIRMED; extracted V-grid relation: CONFIRMED" in capsys.readouterr().out


def test_exex_degenerate(capsys):
    assert main(["exex", "--step", "2.0"]) == 0
    assert "degenerate grid" in capsys.readouterr().err


def test_strict_exit(files, monkeypatch):
    from chaincover import cli
    monkeypatch.setattr(cli, "unknown_dominated", lambda r: True)
    rc = main(["analyze", "--input", str(files["hexjson"]), "--scales", "2.1", "--out", str(files["out"])])
    assert rc == 2


def test_hidden_oracle_flag(files):
    rc = main(["analyze", "--input", str(files["hexjson"]), "--scales", "2.1,1.2", "--oracle",
               "--out", str(files["out"])])
    assert rc == 0
    doc = json.loads((files["out"] / "report.json").read_text())
    assert all(o["agree"] for o in doc["oracle"])
