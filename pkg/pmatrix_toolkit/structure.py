from __future__ import annotations
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Union
from pydantic import BaseModel, Field, model_validator

from .linalg import Matrix, ScalarKind, Vector

Entry = Union[int, float, str]


class ScalarName(str, Enum):
    """Scalar kind named in a matrix or vector file."""
    float = "float"
    rational = "rational"


class MatrixFile(BaseModel):
    """Matrix file: {"n": int, "entries": [[row]...], "scalar": "float"|"rational"}. Rational entries as "p/q" strings."""
    n: Optional[int] = Field(None, ge=1, description="Dimension; must match the entry grid when given.")
    entries: List[List[Entry]] = Field(..., description="Row-major n x n grid.")
    scalar: Optional[ScalarName] = Field(None, description="Scalar kind. Inferred from the entries when missing (all exact -> rational).")

    @model_validator(mode="after")
    def _square(self) -> "MatrixFile":
        rows = len(self.entries)
        if rows == 0 or any(len(r) != rows for r in self.entries):
            raise ValueError(f"entries must form a non-empty square grid, got {rows} rows of lengths {[len(r) for r in self.entries]}")
        if self.n is not None and self.n != rows:
            raise ValueError(f"n={self.n} does not match the {rows}x{rows} entry grid")
        return self

    def to_matrix(self) -> Matrix:
        return Matrix.from_rows(self.entries, ScalarKind(self.scalar.value) if self.scalar else None)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "MatrixFile":
        return cls(n=m.n, entries=m.tolist(), scalar=ScalarName(m.scalar_kind.value))


class VectorFile(BaseModel):
    """Vector file: {"n": int, "entries": [...], "scalar": ...} or a bare JSON list."""
    n: Optional[int] = Field(None, ge=1, description="Length; must match entries when given.")
    entries: List[Entry] = Field(..., min_length=1, description="Vector entries.")
    scalar: Optional[ScalarName] = Field(None, description="Scalar kind, inferred when missing.")

    @model_validator(mode="after")
    def _length(self) -> "VectorFile":
        if self.n is not None and self.n != len(self.entries):
            raise ValueError(f"n={self.n} does not match {len(self.entries)} entries")
        return self

    def to_vector(self) -> Vector:
        return Vector.of(self.entries, ScalarKind(self.scalar.value) if self.scalar else None)


class OperatorSpecFile(BaseModel):
    """Operator spec: {"kind": str, "params": {...}}."""
    kind: str = Field(..., description="Operator kind, e.g. 'right_shift' or 'IdPlusLeftShift'.")
    params: Dict[str, Any] = Field(default_factory=dict, description="Kind parameters, e.g. {'sequence': 'harmonic'} or {'coupling': -7}.")


class MinorCertificate(BaseModel):
    kind: Literal["minor"] = "minor"
    indices: List[int] = Field(..., description="1-based principal index set of a non-positive minor.")
    value: Union[str, float] = Field(..., description="Minor value ('p/q' when exact).")


class WitnessCertificate(BaseModel):
    kind: Literal["witness"] = "witness"
    vector: List[Union[str, float]] = Field(..., description="Nonzero x with x_i (Ax)_i <= 0 for all i, unit max-norm.")


class AllMinorsPositiveCertificate(BaseModel):
    kind: Literal["all_minors_positive"] = "all_minors_positive"
    count: int = Field(..., description="Number of principal minors covered, 2^n - 1.")
    evaluated: Optional[int] = Field(None, description="Minors computed directly when the matrix splits into diagonal blocks.")


class NoSignReversalCertificate(BaseModel):
    kind: Literal["no_sign_reversal"] = "no_sign_reversal"
    patterns_checked: int = Field(..., description="Sign patterns proven infeasible.")


Certificate = Annotated[
    Union[MinorCertificate, WitnessCertificate, AllMinorsPositiveCertificate, NoSignReversalCertificate],
    Field(discriminator="kind"),
]


class VerdictModel(BaseModel):
    """P-property decision with a checkable certificate."""
    is_p: bool
    method: str = Field(..., description="minors | sign_reversal | both")
    certificate: Certificate
    witness: Optional[WitnessCertificate] = Field(None, description="Sign-reversal witness when both methods ran on a non-P matrix.")
    boundary: bool = Field(False, description="A float minor was within tolerance of zero.")


class SuiteResult(BaseModel):
    """Outcome of one verification suite."""
    name: str
    passed: bool
    checked: int = Field(0, description="Number of individual checks run.")
    failures: List[str] = Field(default_factory=list, description="One line per failed check (first few only).")
    notes: List[str] = Field(default_factory=list, description="Diagnostics that are not failures.")


class Report(BaseModel):
    """Top-level JSON document written to stdout by every command."""
    command: Dict[str, Any] = Field(..., description="Echo of the command name and its flags.")
    seed: Optional[int] = Field(None, description="Seed governing all randomness of the run.")
    inputs_digest: Optional[str] = Field(None, description="sha256 over the canonical JSON of all inputs.")
    result: Dict[str, Any] = Field(default_factory=dict, description="Verdicts, LCP reports or suite results.")
    timing: Optional[Dict[str, float]] = Field(None, description="Wall-clock seconds; excluded from the determinism contract.")
