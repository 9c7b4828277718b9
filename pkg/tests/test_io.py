from __future__ import annotations

import io
import json
from fractions import Fraction

import pytest

from pmatrix_toolkit.errors import InputFormatError, InvalidSpecError
from pmatrix_toolkit.io_utils import (
    canonical_json,
    inputs_digest,
    load_matrix,
    load_operator_spec,
    load_vector,
    render_report,
    write_report,
)
from pmatrix_toolkit.linalg import Matrix, ScalarKind
from pmatrix_toolkit.structure import MatrixFile, Report
from pmatrix_toolkit.zoo import OperatorKind


def test_matrix_file_with_fractions(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 2, "entries": [["1/2", 0], [0, "3"]]}), encoding="utf-8")
    m = load_matrix(path)
    assert m.scalar_kind is ScalarKind.RATIONAL
    assert m[0, 0] == Fraction(1, 2)


def test_declared_float_scalar_wins(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"entries": [[1, 0], [0, 1]], "scalar": "float"}), encoding="utf-8")
    assert load_matrix(path).scalar_kind is ScalarKind.FLOAT


def test_n_must_match_the_grid(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 3, "entries": [[1, 0], [0, 1]]}), encoding="utf-8")
    with pytest.raises(InputFormatError):
        load_matrix(path)


def test_bad_entry(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps([["1/0"]]), encoding="utf-8")
    with pytest.raises(InputFormatError):
        load_matrix(path)


def test_invalid_json(tmp_path):
    path = tmp_path / "m.json"
    path.write_text("[[1, 2]", encoding="utf-8")
    with pytest.raises(InputFormatError):
        load_matrix(path)


def test_csv_must_be_square(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1,2,3\n4,5,6\n", encoding="utf-8")
    with pytest.raises(InputFormatError):
        load_matrix(path)


def test_vector_from_csv_column(tmp_path):
    path = tmp_path / "q.csv"
    path.write_text("1\n-2\n0.5\n", encoding="utf-8")
    assert load_vector(path).tolist() == [1.0, -2.0, 0.5]


def test_vector_length_check(tmp_path):
    path = tmp_path / "q.json"
    path.write_text(json.dumps({"n": 2, "entries": [1, 2, 3]}), encoding="utf-8")
    with pytest.raises(InputFormatError):
        load_vector(path)


def test_operator_spec_file(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"kind": "diagonal", "params": {"sequence": "constant", "value": 2}}), encoding="utf-8")
    spec = load_operator_spec(path)
    assert spec.kind is OperatorKind.DIAGONAL
    assert spec.entry(5, 5) == 2


def test_operator_spec_with_unknown_kind(tmp_path):
    path = tmp_path / "spec.json"
    path.write_text(json.dumps({"kind": "teleport"}), encoding="utf-8")
    with pytest.raises(InvalidSpecError):
        load_operator_spec(path)


def test_matrix_file_round_trip():
    m = Matrix.from_rows([[Fraction(1, 3), -1], [0, 2]])
    assert MatrixFile.from_matrix(m).to_matrix() == m


def test_canonical_json_sorts_keys():
    assert canonical_json({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
    assert inputs_digest({"b": 1, "a": 2}) == inputs_digest({"a": 2, "b": 1})


def test_report_rendering_drops_timing_on_request():
    report = Report(command={"name": "analyze"}, seed=42, result={"x": 1}, timing={"total_s": 0.5})
    assert "timing" in json.loads(render_report(report))
    body = json.loads(render_report(report, include_timing=False))
    assert "timing" not in body and "inputs_digest" not in body


def test_write_report_to_stream_and_file(tmp_path):
    report = Report(command={"name": "lcp"}, seed=1)
    stream = io.StringIO()
    out = tmp_path / "r.json"
    text = write_report(report, out, stream=stream)
    assert stream.getvalue().strip() == text
    assert out.read_text(encoding="utf-8").strip() == text
