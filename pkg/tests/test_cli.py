import csv
import io
import json

import pytest

from mobreflect.cli import run


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


SQUARE = [{"anchor": [0, 0, 0, 0], "axes": [0, 1]}]
FREE_PAIR = {"balls": [{"center": [0, 0, 0, 0], "radius_sq": "1"},
                       {"center": [3, 0, 0, 0], "radius_sq": "1"}]}


def call(argv, capsys):
    status = run(argv)
    out, err = capsys.readouterr()
    return status, (json.loads(out) if out else None), err


def test_audit_single_square(tmp_path, capsys):
    status, rep, _ = call(["audit", write(tmp_path, "k.json", SQUARE)], capsys)
    assert status == 0 and rep["status"] == 0
    r = rep["report"]
    assert r["ball_count"] == 9
    assert r["coxeter_entries"] == [2, 3, "inf"]
    finite = {m for row in r["coxeter_matrix"] for m in row if m not in (1, "inf")}
    assert finite == {2, 3}
    assert r["nerve_check"]["isomorphism"] and r["coverage"]["ok"] and r["relations"]["ok"]
    adj = [c for c in r["claims"] if c["name"] == "midpoint_adjacent_vertex_angle"][0]
    assert adj["agrees"] is False


def test_enumerate_two_disjoint_balls(tmp_path, capsys):
    csv_path = tmp_path / "g.csv"
    status, rep, _ = call(["enumerate", write(tmp_path, "b.json", FREE_PAIR), "--max-length", "5",
                           "--growth-csv", str(csv_path)], capsys)
    assert status == 0
    assert rep["report"]["matrix_growth"] == [1, 2, 2, 2, 2, 2]
    assert rep["report"]["abstract_growth"] == [1, 2, 2, 2, 2, 2]
    rows = list(csv.DictReader(io.StringIO(csv_path.read_text())))
    assert [int(r["matrix"]) for r in rows] == [1, 2, 2, 2, 2, 2]


def test_vertex_condition_failure_names_vertex(tmp_path, capsys):
    bad = {"squares": SQUARE, "edges": [{"anchor": [5, 5, 5, 5], "axes": [0]}]}
    status, rep, err = call(["audit", write(tmp_path, "k.json", bad)], capsys)
    assert status == 1 and rep is None
    assert "[5, 5, 5, 5]" in err or "[6, 5, 5, 5]" in err


@pytest.mark.parametrize("text, fragment", [
    ("[{\"anchor\": [0,0,0,0], \"axes\": [0,1]}", "line"),
    ("[{\"anchor\": [0,0,0], \"axes\": [0,1]}]", "anchor"),
    ("[{\"anchor\": [0,0,0,0], \"axes\": [0]}]", "square"),
    ("{\"balls\": [{\"center\": [0,0,0,0]}]}", "balls[0]"),
])
def test_malformed_input(tmp_path, capsys, text, fragment):
    status, _, err = call(["audit", write(tmp_path, "k.json", text)], capsys)
    assert status == 1 and fragment in err


def test_missing_file_and_bad_flags(tmp_path, capsys):
    assert call(["audit", str(tmp_path / "nope.json")], capsys)[0] == 1
    k = write(tmp_path, "k.json", SQUARE)
    assert call(["quotient", k, "--prime", "3"], capsys)[0] == 1
    assert call(["quotient", k, "--prime", "9"], capsys)[0] == 1
    assert call(["enumerate", k, "--max-length", "-1"], capsys)[0] == 1
    assert call(["tile", k, "--probe", "0,0,0,0"], capsys)[0] == 1


def test_cap_exceeded_is_status_2(tmp_path, capsys):
    k = write(tmp_path, "k.json", SQUARE)
    status, rep, _ = call(["enumerate", k, "--max-length", "4", "--element-cap", "20"], capsys)
    assert status == 2 and rep["report"]["matrix_truncated"]


def test_violating_balls_give_status_2(tmp_path, capsys):
    overlap = {"balls": [{"center": [0, 0, 0, 0], "radius_sq": "1"}, {"center": [1, 0, 0, 0], "radius_sq": "1"}]}
    status, rep, _ = call(["audit", write(tmp_path, "b.json", overlap)], capsys)
    assert status == 2 and rep["report"]["violations"]


def test_generate_tile_quotient_nerve(tmp_path, capsys):
    k = write(tmp_path, "k.json", SQUARE)
    status, rep, _ = call(["generate", k], capsys)
    assert status == 0 and rep["report"]["ball_count"] == 9
    status, rep, _ = call(["nerve", k], capsys)
    assert status == 0 and rep["report"]["nerve"]["f_vector"][:3] == [9, 16, 8]
    status, rep, _ = call(["tile", k, "--max-length", "2", "--probe", "5,5,5,5"], capsys)
    assert status == 0 and rep["report"]["tiling"]["injective"]
    status, rep, _ = call(["quotient", k, "--max-length", "2"], capsys)
    assert status == 0 and rep["report"]["quotient"]["homomorphism_ok"]


def test_plinv(tmp_path, capsys):
    cube = {"center": ["0", "0", "0", "0"], "half_width": "1/2", "points": [[1, 0, 0, 0], "inf"]}
    out = tmp_path / "r.json"
    status = run(["plinv", write(tmp_path, "c.json", cube), "--samples", "200", "-o", str(out)])
    assert status == 0
    rep = json.loads(out.read_text())["report"]
    assert rep["involution_ok"] and rep["samples_checked"] == 222
    assert rep["images"] == [{"point": ["1", "0", "0", "0"], "image": ["1/4", "0", "0", "0"]},
                             {"point": "inf", "image": ["0", "0", "0", "0"]}]
    assert call(["plinv", write(tmp_path, "bad.json", {"center": [0, 0, 0, 0], "half_width": "-1"})], capsys)[0] == 1
