from __future__ import annotations

import json
import subprocess
import sys

import pytest

from morsegrad.cli import main


def run(args, capsys):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(args, tmp_path, capsys, name="r.json"):
    path = tmp_path / name
    code, _, _ = run(list(args) + ["--json", path], capsys)
    return code, json.loads(path.read_text())


def test_validate(data_dir, capsys):
    code, out, _ = run(["validate", data_dir / "four_cycle.txt"], capsys)
    assert code == 0
    assert "f-vector=[4, 4]" in out


def test_input_errors_exit_2(data_dir, capsys):
    code, _, err = run(["validate", data_dir / "duplicate_vertex.txt"], capsys)
    assert code == 2 and "duplicate vertex" in err
    code, _, err = run(["gradient", data_dir / "triangle_boundary.txt"], capsys)
    assert code == 2
    code, _, err = run(["persistence", data_dir / "four_cycle.txt"], capsys)
    assert code == 2 and "n = 1" in err
    code, _, _ = run(["validate", data_dir / "missing.txt"], capsys)
    assert code == 2


def test_tiebreak_in_report(data_dir, tmp_path, capsys):
    code, doc = report(["validate", data_dir / "collision.txt", "--tiebreak"], tmp_path, capsys)
    assert code == 0
    assert doc["meta"]["options"]["tiebreak"] is True
    assert {p["vertex"] for p in doc["meta"]["perturbation"]} == {1, 2}


def test_check_perfect_exit_codes(data_dir, tmp_path, capsys):
    code, doc = report(["check-perfect", data_dir / "dunce_hat.txt"], tmp_path, capsys)
    assert code == 0 and doc["perfectness"]["verdict"] is True
    code, doc = report(["check-perfect", data_dir / "cone_over_dunce_hat.txt"], tmp_path, capsys)
    assert code == 1
    assert doc["perfectness"]["verdict"] is False
    assert {(tuple(w["grade"]), w["q"]) for w in doc["perfectness"]["witnesses"]} == {((9,), 2), ((9,), 3)}


def test_reduce_prints_cell_format(data_dir, capsys):
    code, out, _ = run(["reduce", data_dir / "four_cycle.txt"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "params 2"
    assert sum(line.startswith("cell ") for line in lines) == 4
    assert sum(line.startswith("face ") for line in lines) == 4


def test_betti_and_morse_numbers(data_dir, tmp_path, capsys):
    code, doc = report(["betti", data_dir / "triangle_boundary.txt"], tmp_path, capsys)
    assert code == 0
    recs = {(tuple(r["grade"]), r["q"]): r["xi"] for r in doc["betti_tables"]["records"]}
    assert recs[((2, 2), 0)] == [0, 0, 1]
    code, doc = report(["morse-numbers", data_dir / "two_triangles.txt"], tmp_path, capsys)
    assert {"grade": [3, 3], "q": 2, "m": 1} in doc["morse_numbers"]["records"]


def test_persistence(data_dir, tmp_path, capsys):
    code, doc = report(["persistence", data_dir / "dunce_hat.txt"], tmp_path, capsys)
    assert code == 0
    assert doc["persistence_pairs"]["essential"] == [{"birth": [1], "death": None, "q": 0, "positive": [1]}]


def test_verify_report_is_self_consistent(data_dir, tmp_path, capsys):
    code, doc = report(["verify", data_dir / "four_cycle.txt"], tmp_path, capsys)
    assert code == 0
    xi = {(tuple(r["grade"]), r["q"]): r["xi"] for r in doc["betti_tables"]["records"]}
    m = {(tuple(r["grade"]), r["q"]): r["m"] for r in doc["morse_numbers"]["records"]}

    def x(i, q, u):
        return xi.get((u, q), [0, 0, 0])[i] if q >= 0 else 0

    perfect = doc["perfectness"]["verdict"]
    assert doc["inequalities"]["relative_perfect"] == perfect
    for row in doc["inequalities"]["rows"]:
        u, q = tuple(row["grade"]), row["q"]
        assert row["morse"] == m.get((u, q), 0)
        base = x(0, q, u) + x(1, q - 1, u)
        assert row["lower"] == base - x(2, q - 1, u)
        assert row["lower_holds"] == (row["morse"] >= row["lower"])
        assert row["lower_equal"] == (row["morse"] == row["lower"])
        if perfect:
            assert row["upper"] == base + x(2, q - 2, u)
            assert row["upper_printed_degree"] == base + x(2, q - 1, u)
    sharp = [r for r in doc["inequalities"]["rows"] if r["grade"] == [3, 3] and r["q"] == 1]
    assert sharp and sharp[0]["lower_equal"]
    assert doc["perfectness"]["verdict"] == all(r["equal"] for r in doc["perfectness"]["rows"])


def test_verify_random(capsys):
    code, out, _ = run(["verify", "--random", "--count", "3", "--seed", "5", "--max-vertices", "6"], capsys)
    assert code == 0
    assert "3/3 random instances passed" in out


def test_reports_do_not_depend_on_threads(data_dir, tmp_path, capsys):
    for name in ["four_cycle.txt", "two_triangles.txt", "dunce_hat.txt"]:
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        main(["verify", str(data_dir / name), "--json", str(a), "--threads", "1"])
        main(["verify", str(data_dir / name), "--json", str(b), "--threads", "4"])
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()


def test_json_to_stdout(data_dir, capsys):
    code, out, _ = run(["gradient", data_dir / "four_cycle.txt", "--json", "-"], capsys)
    assert code == 0
    assert json.loads(out)["gradient"]["counts"] == {"cells": 8, "critical": 4, "pairs": 2}


def test_missing_file_argument(capsys):
    with pytest.raises(SystemExit):
        main(["gradient"])


def test_module_entry_point(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "morsegrad", "check-perfect", str(data_dir / "single_edge.txt")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "relative-perfect: yes" in proc.stdout
