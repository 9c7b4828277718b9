from __future__ import annotations
from pathlib import Path
import hashlib
import json
import sys
from typing import Any, Optional, TextIO

import numpy as np
from pydantic import ValidationError

from .errors import InputFormatError
from .linalg import Matrix, ScalarKind, Vector
from .structure import MatrixFile, OperatorSpecFile, Report, VectorFile
from .zoo.operators import OperatorSpec


def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise InputFormatError(f"{path}: invalid JSON ({e})") from e


def _read_csv(path: Path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", ndmin=2, dtype=float)
    except ValueError as e:
        raise InputFormatError(f"{path}: invalid CSV ({e})") from e


def load_matrix(path: Path) -> Matrix:
    """JSON matrix file (or a bare JSON grid), or plain CSV rows read as float."""
    if not path.exists():
        raise InputFormatError(f"Matrix file not found: {path}")
    if path.suffix.lower() == ".csv":
        arr = _read_csv(path)
        if arr.shape[0] != arr.shape[1]:
            raise InputFormatError(f"{path}: expected a square grid, got {arr.shape[0]}x{arr.shape[1]}")
        return Matrix(arr, ScalarKind.FLOAT)
    raw = _read_json(path)
    if isinstance(raw, list):
        raw = {"entries": raw}
    try:
        return MatrixFile.model_validate(raw).to_matrix()
    except ValidationError as e:
        raise InputFormatError(f"{path}: {e}") from e
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InputFormatError(f"{path}: bad entry ({e})") from e


def load_vector(path: Path) -> Vector:
    """JSON vector file, bare JSON list, or a single CSV row/column."""
    if not path.exists():
        raise InputFormatError(f"Vector file not found: {path}")
    if path.suffix.lower() == ".csv":
        arr = _read_csv(path)
        if 1 not in arr.shape:
            raise InputFormatError(f"{path}: expected a single row or column")
        return Vector(arr.ravel(), ScalarKind.FLOAT)
    raw = _read_json(path)
    if isinstance(raw, list):
        raw = {"entries": raw}
    try:
        return VectorFile.model_validate(raw).to_vector()
    except ValidationError as e:
        raise InputFormatError(f"{path}: {e}") from e
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InputFormatError(f"{path}: bad entry ({e})") from e


def load_operator_spec(path: Path) -> OperatorSpec:
    if not path.exists():
        raise InputFormatError(f"Operator spec file not found: {path}")
    try:
        spec_file = OperatorSpecFile.model_validate(_read_json(path))
    except ValidationError as e:
        raise InputFormatError(f"{path}: {e}") from e
    return OperatorSpec.from_dict(spec_file.model_dump())


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def inputs_digest(*payloads: Any) -> str:
    """sha256 over the canonical JSON of the inputs, independent of file formatting."""
    return hashlib.sha256(canonical_json(list(payloads)).encode("utf-8")).hexdigest()


def render_report(report: Report, include_timing: bool = True) -> str:
    exclude = None if include_timing else {"timing"}
    return json.dumps(report.model_dump(exclude=exclude, exclude_none=True), ensure_ascii=False, indent=4)


def write_report(report: Report, out_file: Optional[Path] = None, include_timing: bool = True, stream: TextIO | None = None) -> str:
    """Print the report JSON to stdout and, when asked, to a file as well."""
    text = render_report(report, include_timing)
    print(text, file=stream or sys.stdout)
    if out_file is not None:
        out_file.parent.mkdir(parents=True, exist_ok=True)
        out_file.write_text(text + "\n", encoding="utf-8")
    return text
