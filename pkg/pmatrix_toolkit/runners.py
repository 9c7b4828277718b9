from __future__ import annotations
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from . import detect, lcp
from .detect import PMethod, PVerdict
from .errors import InputFormatError
from .io_utils import inputs_digest, load_matrix, load_operator_spec, load_vector
from .linalg import Matrix, Vector
from .settings import get_settings
from .structure import Report, VerdictModel
from .suites import SUITES, SuiteConfig, run_suite
from .tracing import traceable
from .zoo.basis import BasisSpec, block_hadamard_unitary, commutes, p_test_relative
from .zoo.operators import OperatorKind, diagonal_bounds, truncate, verify_witness_prefix
from .zoo.presets import Preset, get_preset

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PROPERTY_FAILS = 1
EXIT_INPUT_ERROR = 2

WITNESS_PREFIX_LENGTH = 1000


@dataclass
class CommandResult:
    report: Report
    exit_code: int
    summary: str


def _verdict_payload(verdict: PVerdict) -> dict:
    # round-trip through the schema so every emitted verdict is validated
    return VerdictModel.model_validate(verdict.as_dict()).model_dump(exclude_none=True)


def _resolve_method(method: str | None, n: int) -> PMethod:
    """'auto' runs both routes while the witness search is within its cap."""
    if method in (None, "auto"):
        if n <= get_settings().witness_cap:
            return PMethod.BOTH
        logger.info("n=%d is above the witness cap; using the minors route only", n)
        return PMethod.MINORS
    return PMethod.parse(method)


def _matrix_source(input_path: Optional[Path], preset: Optional[str], n: Optional[int]) -> tuple[Matrix, dict, Optional[Preset]]:
    """Matrix plus the payload hashed into the inputs digest."""
    if input_path is not None:
        a = load_matrix(input_path)
        return a, {"matrix": a.tolist(), "scalar": a.scalar_kind.value}, None
    p = get_preset(preset)
    size = n if n is not None else p.default_n
    return truncate(p.spec, size), {"preset": p.name, "n": size}, p


def _describe(verdict: PVerdict) -> str:
    cert = verdict.certificate
    if isinstance(cert, detect.AllMinorsPositive):
        return f"all {cert.count} principal minors positive"
    if isinstance(cert, detect.NoSignReversal):
        return f"no sign-reversed vector in {cert.patterns_checked} orthant pairs"
    if isinstance(cert, detect.NonPositiveMinor):
        text = f"minor over {cert.indices} is {cert.value}"
    else:
        text = f"x={cert.vector.tolist()} has its sign reversed"
    if verdict.witness is not None:
        text += f"; witness x={verdict.witness.vector.tolist()}"
    return text


@traceable(name="Command: analyze")
def cmd_analyze(
    input_path: Optional[Path] = None,
    method: str | None = "both",
    *,
    preset: Optional[str] = None,
    n: Optional[int] = None,
) -> CommandResult:
    started = time.perf_counter()
    settings = get_settings()
    a, payload, p = _matrix_source(input_path, preset, n)
    chosen = _resolve_method(method, a.n)
    verdict = detect.is_p(a, chosen)
    positive_definite = detect.is_positive_definite(a)

    notes: list[str] = []
    if verdict.boundary:
        notes.append("a minor is within tolerance of zero; verdict sits on the P boundary")
    if verdict.is_p and not positive_definite:
        notes.append("not positive definite")
    result: dict[str, Any] = {
        "n": a.n,
        "scalar": a.scalar_kind.value,
        "verdict": _verdict_payload(verdict),
        "positive_definite": positive_definite,
        "notes": notes,
    }
    if p is not None and p.quadratic_point is not None and p.quadratic_point.n <= a.n:
        x = p.quadratic_point
        padded = x if x.n == a.n else Vector.of(list(x) + [0] * (a.n - x.n))
        result["quadratic_form"] = {"x": padded.tolist(), "value": str(detect.quadratic_form(a, padded))}

    command = {"name": "analyze", "method": chosen.value}
    command.update({"input": str(input_path)} if input_path is not None else {"preset": payload["preset"], "n": payload["n"]})
    report = Report(
        command=command,
        seed=settings.seed,
        inputs_digest=inputs_digest(payload),
        result=result,
        timing={"total_s": round(time.perf_counter() - started, 6)},
    )
    summary = f"{'P-matrix' if verdict.is_p else 'not a P-matrix'} (n={a.n}): {_describe(verdict)}"
    if notes:
        summary += "; " + "; ".join(notes)
    return CommandResult(report, EXIT_OK if verdict.is_p else EXIT_PROPERTY_FAILS, summary)


@traceable(name="Command: operator")
def cmd_operator(
    preset: Optional[str] = None,
    n: Optional[int] = None,
    basis: str = "standard",
    method: str | None = "auto",
    *,
    spec_path: Optional[Path] = None,
) -> CommandResult:
    """P-test of a preset (or an operator spec file) truncated to n, in the standard or block Hadamard basis."""
    started = time.perf_counter()
    settings = get_settings()
    p: Optional[Preset] = None
    if spec_path is not None:
        spec = load_operator_spec(spec_path)
        if n is None:
            raise InputFormatError("--n is required with --spec")
        size, label = n, spec_path.stem
        source: dict[str, Any] = {"spec": spec.as_dict()}
    else:
        p = get_preset(preset)
        spec = p.spec
        size, label = (n if n is not None else p.default_n), p.name
        source = {"preset": p.name}
    basis_spec = BasisSpec.block_hadamard(size) if basis == "block-hadamard" else BasisSpec.standard()
    chosen = _resolve_method(method, size)
    verdict = p_test_relative(spec, basis_spec, size, chosen)

    result: dict[str, Any] = {
        **source,
        "spec": spec.as_dict(),
        "n": size,
        "basis": basis_spec.label,
        "verdict": _verdict_payload(verdict),
    }
    if p is not None:
        result["example"] = p.example
        expected = p.expected.get(basis_spec.label)
        if expected is not None:
            result["expected_is_p"] = expected.is_p
            result["matches_expected"] = expected.is_p == verdict.is_p
    if not basis_spec.is_standard:
        result["commutes_with_basis_unitary"] = commutes(spec, block_hadamard_unitary(size), size)
    if p is not None and p.witness_sequence is not None:
        seq = p.witness_sequence
        result["witness_sequence"] = {
            **seq.as_dict(),
            "prefix_length": WITNESS_PREFIX_LENGTH,
            "sign_reversed": verify_witness_prefix(spec, seq, WITNESS_PREFIX_LENGTH),
        }
    if spec.kind in (OperatorKind.DIAGONAL, OperatorKind.COMPACT_DIAGONAL):
        lo, hi = diagonal_bounds(spec, size)
        result["diagonal_bounds"] = {"min": str(lo), "max": str(hi), "sequence": spec.sequence.as_dict()}

    command = {"name": "operator", **({"spec": str(spec_path)} if spec_path is not None else source)}
    command.update({"n": size, "basis": basis_spec.label, "method": chosen.value})
    report = Report(
        command=command,
        seed=settings.seed,
        inputs_digest=inputs_digest({"spec": spec.as_dict(), "n": size, "basis": basis_spec.label}),
        result=result,
        timing={"total_s": round(time.perf_counter() - started, 6)},
    )
    summary = f"{label} n={size} ({basis_spec.label} basis): {'P' if verdict.is_p else 'not P'}; {_describe(verdict)}"
    return CommandResult(report, EXIT_OK if verdict.is_p else EXIT_PROPERTY_FAILS, summary)


@traceable(name="Command: lcp")
def cmd_lcp(
    matrix_path: Optional[Path] = None,
    q_path: Optional[Path] = None,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    *,
    preset: Optional[str] = None,
    n: Optional[int] = None,
) -> CommandResult:
    """Single q: every solution. Sample mode: solution-count histogram over seeded q."""
    started = time.perf_counter()
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    a, payload, _ = _matrix_source(matrix_path, preset, n)
    command: dict[str, Any] = {"name": "lcp"}
    command.update({"matrix": str(matrix_path)} if matrix_path is not None else {"preset": payload["preset"], "n": payload["n"]})

    if q_path is not None:
        q = load_vector(q_path)
        inst = lcp.LcpInstance(a, q)
        found = lcp.lcp_solve_all(inst)
        command["q"] = str(q_path)
        result = {"n": a.n, "q": q.tolist(), **found.as_dict()}
        payload["q"] = q.tolist()
        ok = found.count == 1
        summary = f"LCP n={a.n}: {found.count} solution(s) " + ", ".join(str(z.tolist()) for z in found.solutions)
    else:
        report = lcp.lcp_unique_for_samples(a, samples, seed)
        command.update({"samples": samples, "seed": seed})
        result = report.as_dict()
        payload.update({"samples": samples, "seed": seed})
        ok = report.all_unique
        summary = f"LCP n={a.n}: {samples} sampled q, counts {result['counts']}" + (
            "" if ok else f"; q={result['violating_q']} has {report.violating_count} solutions"
        )

    out = Report(
        command=command,
        seed=seed,
        inputs_digest=inputs_digest(payload),
        result=result,
        timing={"total_s": round(time.perf_counter() - started, 6)},
    )
    return CommandResult(out, EXIT_OK if ok else EXIT_PROPERTY_FAILS, summary)


@traceable(name="Command: verify-paper")
def cmd_verify_paper(
    max_n: int = 32,
    seed: Optional[int] = None,
    suites: Optional[list[str]] = None,
    sample_divisor: int = 1,
) -> CommandResult:
    """Run the verification suites; exit code 1 iff any suite fails."""
    settings = get_settings()
    seed = settings.seed if seed is None else seed
    cfg = SuiteConfig(max_n=max_n, seed=seed, sample_divisor=sample_divisor)
    names = suites or list(SUITES)

    results = []
    timing: dict[str, float] = {}
    for name in names:
        started = time.perf_counter()
        res = run_suite(name, cfg)
        timing[name] = round(time.perf_counter() - started, 6)
        print(f"{'PASS' if res.passed else 'FAIL'} {name} ({res.checked} checks, {timing[name]:.1f}s)", file=sys.stderr)
        results.append(res)

    passed = all(r.passed for r in results)
    report = Report(
        command={"name": "verify-paper", "max_n": max_n, "seed": seed, "suites": names, "sample_divisor": sample_divisor},
        seed=seed,
        inputs_digest=inputs_digest({"max_n": max_n, "seed": seed, "suites": names, "sample_divisor": sample_divisor}),
        result={"passed": passed, "suites": [r.model_dump() for r in results]},
        timing=timing,
    )
    failed = [r.name for r in results if not r.passed]
    summary = "all suites passed" if passed else f"failed: {', '.join(failed)}"
    return CommandResult(report, EXIT_OK if passed else EXIT_PROPERTY_FAILS, summary)
