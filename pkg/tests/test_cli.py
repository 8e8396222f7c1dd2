"""End-to-end command line checks, run in process through cli.run."""

from __future__ import annotations

import csv
import io
import json
import math
import sys

import pytest

from qgbounds import cli, covers
from qgbounds import metric_graph as mg

PI2 = math.pi ** 2


def invoke(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture()
def tetra_file(tmp_path, capsys):
    path = tmp_path / "tetra.json"
    code, _, _ = invoke(capsys, "gen", "platonic:tetrahedron", "-o", str(path))
    assert code == 0
    return str(path)


def test_gen_validate_round_trip(tmp_path, capsys):
    path = tmp_path / "p3.json"
    code, _, err = invoke(capsys, "gen", "pumpkin:3", "--length", "3/2",
                          "-o", str(path))
    assert code == 0 and err == ""
    data = json.loads(path.read_text())
    assert len(data["edges"]) == 3

    code, out, _ = invoke(capsys, "validate", str(path))
    assert code == 0
    report = json.loads(out)
    assert report["connected"] is True
    assert report["edge_count"] == 3
    assert report["total_length"] == "9/2"


def test_gen_cycle_segments(tmp_path, capsys):
    path = tmp_path / "c.json"
    code, _, _ = invoke(capsys, "gen", "cycle:6", "--segments", "3",
                        "-o", str(path))
    assert code == 0
    code, out, _ = invoke(capsys, "validate", str(path))
    assert code == 0
    report = json.loads(out)
    assert report["edge_count"] == 3
    assert report["total_length"] == 6


def test_gen_star_needs_lengths(capsys):
    code, _, err = invoke(capsys, "gen", "star")
    assert code == 1
    assert json.loads(err)["error"] == "BadParameter"


def test_bounds_csv_table(tetra_file, capsys):
    code, out, _ = invoke(capsys, "bounds", tetra_file,
                          "--cover", "faces", "--eta", "exact")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert list(rows[0]) == ["method", "index", "bound", "oracle",
                             "ratio", "ingredients"]
    assert {r["method"] for r in rows} == {"transfer[faces,exact_cycle]"}
    for r in rows:
        if r["ratio"]:
            assert float(r["ratio"]) <= 1 + 1e-9
    second = next(r for r in rows if r["index"] == "2")
    assert float(second["bound"]) == pytest.approx(8 * PI2 / 27, abs=1e-9)
    assert float(second["oracle"]) == pytest.approx(
        math.acos(-1 / 3) ** 2, abs=1e-9)


def test_bounds_json_and_k(tetra_file, capsys):
    code, out, _ = invoke(capsys, "bounds", tetra_file, "--cover", "faces",
                          "--eta", "exact", "--format", "json", "--k", "2")
    assert code == 0
    data = json.loads(out)
    assert data["indices"] == [1, 2]
    assert data["ingredients"]["fold"] == 2

    code, out, _ = invoke(capsys, "bounds", tetra_file,
                          "--format", "json", "--k", "2")
    assert code == 0
    data = json.loads(out)
    assert data["method"] == "stars"
    assert data["indices"] == [1, 2]


def test_bounds_cover_from_file(tetra_file, tmp_path, capsys):
    g = mg.platonic("tetrahedron")
    cov = tmp_path / "cover.json"
    cov.write_text(json.dumps(covers.cover_to_json(covers.face_pair_cover(g))))
    code, out, _ = invoke(capsys, "bounds", tetra_file,
                          "--cover", f"file:{cov}", "--eta", "exact",
                          "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["method"] == "transfer[face_pairs,exact_cycle]"
    assert data["bounds"][1] == pytest.approx(3 * PI2 / 16, abs=1e-9)


def test_bounds_copies_with_oracle_eta(tetra_file, capsys):
    code, out, _ = invoke(capsys, "bounds", tetra_file, "--cover", "copies:3",
                          "--eta", "oracle", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert "numerically_assisted" in data["flags"]
    # overlap graph of full copies is complete, so the transferred second
    # bound reproduces the true gap exactly
    assert data["bounds"][1] == pytest.approx(math.acos(-1 / 3) ** 2, abs=1e-6)


def test_bounds_eta_aliases_agree(tmp_path, capsys):
    chain = tmp_path / "chain.json"
    assert invoke(capsys, "gen", "pumpkin_chain:3,2,4", "-o", str(chain))[0] == 0
    outputs = []
    for eta in ("cycle", "doubly_connected"):
        code, out, _ = invoke(capsys, "bounds", str(chain),
                              "--cover", "layered", "--eta", eta,
                              "--format", "json")
        assert code == 0
        outputs.append(json.loads(out)["bounds"])
    assert outputs[0] == outputs[1]


def test_bounds_unknown_eta(tetra_file, capsys):
    code, _, err = invoke(capsys, "bounds", tetra_file, "--eta", "bogus")
    assert code == 1
    info = json.loads(err)
    assert info["error"] == "BadParameter"
    assert "exact_cycle" in info["context"]["known"]


def test_bounds_output_file(tetra_file, tmp_path, capsys):
    out_path = tmp_path / "table.csv"
    code, out, _ = invoke(capsys, "bounds", tetra_file, "--no-oracle",
                          "-o", str(out_path))
    assert code == 0 and out == ""
    text = out_path.read_text()
    assert text.startswith("method,index,bound,oracle,ratio,ingredients")


def test_oracle_subcommand(tetra_file, capsys):
    code, out, _ = invoke(capsys, "oracle", tetra_file, "--count", "4")
    assert code == 0
    data = json.loads(out)
    assert data["method"] == "subdivision"
    assert data["values"][0] == 0.0
    assert data["values"][1] == pytest.approx(math.acos(-1 / 3) ** 2, abs=1e-9)

    code, out, _ = invoke(capsys, "oracle", tetra_file, "--count", "4",
                          "--mesh", "1/2")
    assert code == 0
    assert json.loads(out)["grid"] == "1/2"

    code, out, _ = invoke(capsys, "oracle", tetra_file, "--count", "4",
                          "--method", "fd")
    assert code == 0
    assert json.loads(out)["method"] == "fd"


def test_oracle_branch_overflow(tetra_file, capsys):
    code, _, err = invoke(capsys, "oracle", tetra_file, "--count", "5",
                          "--method", "von_below")
    assert code == 1
    info = json.loads(err)
    assert info["error"] == "CountExceedsBranch"
    assert info["context"]["available"] == 4


def test_oracle_bad_mesh_is_a_usage_error(tetra_file, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.run(["oracle", tetra_file, "--mesh", "abc"])
    assert exc.value.code == 2


def test_validate_errors(tmp_path, capsys):
    code, _, err = invoke(capsys, "validate", str(tmp_path / "missing.json"))
    assert code == 1
    assert json.loads(err)["error"] == "ParseError"

    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    code, _, err = invoke(capsys, "validate", str(bad))
    assert code == 1
    info = json.loads(err)
    assert info["error"] == "ParseError"
    assert info["context"]["line"] == 1


def test_repro_cases(capsys):
    code, out, _ = invoke(capsys, "repro", "--case", "icosahedron")
    assert code == 0
    assert "PASS" in out and "FAIL" not in out

    code, out, _ = invoke(capsys, "repro", "--case", "chain_324")
    assert code == 1
    assert "FAIL" in out

    code, out, _ = invoke(capsys, "repro", "--case", "four_pumpkin(2)",
                          "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert all(r["status"] in ("PASS", "INFO") for r in rows)


def test_repro_unknown_case(capsys):
    code, _, err = invoke(capsys, "repro", "--case", "nope")
    assert code == 1
    info = json.loads(err)
    assert info["error"] == "UnknownFamily"
    assert "icosahedron" in info["context"]["known"]


def test_usage_errors_exit_two(capsys):
    for argv in ([], ["frobnicate"], ["bounds"]):
        with pytest.raises(SystemExit) as exc:
            cli.run(argv)
        assert exc.value.code == 2


def test_console_entry(monkeypatch, capsys):
    monkeypatch.setattr(sys, "argv",
                        ["qgb", "repro", "--case", "tetrahedron"])
    with pytest.raises(SystemExit) as exc:
        cli.main_entry()
    assert exc.value.code == 0
