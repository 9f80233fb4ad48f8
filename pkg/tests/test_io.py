from __future__ import annotations

import json

import pytest

from morsegrad import instances
from morsegrad.complex import homology_dims
from morsegrad.gradient import compute_gradient
from morsegrad.io import InputError, emit_report, format_cells, parse_cells, parse_input, read_input
from morsegrad.morse import build_morse_complex


def test_square_file(data_dir):
    p = read_input(str(data_dir / "four_cycle.txt"))
    assert p.n == 2 and p.mode == "vertex"
    assert p.complex.f_vector() == [4, 4]
    assert p.filtration.grade == instances.four_cycle().grade


def test_closure_and_explicit_mode(data_dir):
    p = read_input(str(data_dir / "two_triangles.txt"))
    assert p.complex == instances.two_triangles().complex
    e = read_input(str(data_dir / "triangle_boundary.txt"))
    assert e.mode == "explicit" and not e.max_extension
    assert e.filtration.grade == instances.triangle_boundary().grade


@pytest.mark.parametrize(
    "text, message",
    [
        ("params 1\nvertex 0 0\nvertex 0 1\n", "line 3: duplicate vertex 0"),
        ("vertex 0 0\n", "line 1: 'params' must come before"),
        ("params 1\nvertex 0 x\n", "line 2: expected an integer"),
        ("params 1\nvertex 0 0 0\n", "line 2: 'vertex' needs an id and 1 grade"),
        ("params 1\nfoo\n", "line 2: unknown directive"),
        ("params 1\nvertex 0 0\nvertex 1 1\nsimplex 0 1 2\n", "line 4: missing face"),
        ("params 1\nvertex 0 0\nsimplex 0 1\nclosure\n", "vertex 1 used by"),
        ("params 2\nvertex 0 0 0\nvertex 1 0 1\nsimplex 0 1\n", "vertices 0 (line 2) and 1 both have value 0"),
        ("params 1\nvertex 0 -1\n", "non-negative"),
        ("params 1\ngrade 0 1\ngrade 0 2\n", "one-critical"),
        ("params 1\ngrade 0 1\ngrade 1 0\ngrade 0 1 0\n", "line 4: grade [0] of [0, 1] is not above"),
        ("params 1\ngrade 0 1\ngrade 0 1 1\nclosure\n", "simplex [1] (added by closure) has no grade"),
        ("params 1\nsimplex 0 0\n", "line 2: repeated vertex"),
        ("", "missing 'params'"),
        ("params 1\n", "no simplices"),
    ],
)
def test_parse_errors_cite_lines(text, message):
    with pytest.raises(InputError) as err:
        parse_input(text)
    assert message in str(err.value)


def test_tiebreak_is_recorded(data_dir):
    with pytest.raises(InputError, match="--tiebreak"):
        read_input(str(data_dir / "collision.txt"))
    p = read_input(str(data_dir / "collision.txt"), tiebreak=True)
    assert p.perturbation
    vals = p.filtration.vertex_values
    for i in range(2):
        assert len({g[i] for g in vals.values()}) == len(vals)


def test_comments_and_blank_lines():
    p = parse_input("# header\n\nparams 1  # one parameter\nvertex 3 7\n")
    assert p.complex.vertices == (3,)


def test_missing_file():
    with pytest.raises(InputError, match="cannot read"):
        read_input("/nonexistent/input.txt")


def test_cell_format_round_trip(square):
    V = compute_gradient(square)
    M = build_morse_complex(square, V)
    text = format_cells(M)
    back = parse_cells(text)
    assert back.n == 2
    assert back.complex.f_vector() == M.complex.f_vector()
    assert homology_dims(back.complex) == homology_dims(M.complex)
    assert sorted(back.grade.values()) == sorted(M.grade.values())


@pytest.mark.parametrize(
    "text, message",
    [
        ("params 1\ncell 0 0 0\ncell 0 0 1\n", "duplicate cell"),
        ("params 1\ncell 0 0 0\nface 0 1 1\n", "unknown cell 1"),
        ("params 1\ncell 0 0 0\ncell 1 1 1\nface 1 0 2\n", "coefficient"),
        ("params 1\ncell 0 0 3\ncell 1 1 1\nface 1 0 1\n", "not above"),
        ("params 1\ncell 0 0 0\ncell 1 2 1\nface 1 0 1\n", "drop dimension"),
    ],
)
def test_cell_format_errors(text, message):
    with pytest.raises(InputError, match=message):
        parse_cells(text)


def test_report_with_meta_only():
    doc = json.loads(emit_report({"tool": "x"}))
    assert doc == {"meta": {"tool": "x"}}
    with pytest.raises(KeyError):
        emit_report({}, {"nonsense": 1})
