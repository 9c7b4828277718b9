from __future__ import annotations

import json
from dataclasses import replace
from pathlib import Path

import pytest

from pmatrix_toolkit import detect
from pmatrix_toolkit.cli import run_cli
from pmatrix_toolkit.settings import get_settings


def _write(path: Path, payload) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def _run(capsys, argv: list[str]) -> tuple[int, dict | None, str]:
    code = run_cli(argv)
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.strip() else None
    return code, report, captured.err


@pytest.fixture
def identity_file(tmp_path):
    return _write(tmp_path / "identity.json", {"n": 3, "entries": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "scalar": "rational"})


@pytest.fixture
def swap_file(tmp_path):
    return _write(tmp_path / "swap2.json", [[0, 1], [1, 0]])


class TestAnalyze:
    def test_identity_is_p(self, capsys, identity_file):
        code, report, _ = _run(capsys, ["analyze", "--input", str(identity_file), "--method", "both"])
        assert code == 0
        assert report["result"]["verdict"]["certificate"]["kind"] == "all_minors_positive"
        assert report["seed"] == 42

    def test_swap_is_not_p_with_witness(self, capsys, swap_file):
        code, report, err = _run(capsys, ["analyze", "--input", str(swap_file)])
        assert code == 1
        assert report["result"]["verdict"]["witness"]["vector"] == ["1", "-1"]
        assert "not a P-matrix" in err

    def test_example_17_is_p_but_not_positive_definite(self, capsys):
        code, report, _ = _run(capsys, ["analyze", "--preset", "example-17", "--n", "2"])
        assert code == 0
        assert "not positive definite" in report["result"]["notes"]
        assert report["result"]["quadratic_form"]["value"] == "-5"

    def test_minors_only(self, capsys, swap_file):
        code, report, _ = _run(capsys, ["analyze", "--input", str(swap_file), "--method", "minors"])
        assert code == 1
        assert report["result"]["verdict"]["certificate"] == {"kind": "minor", "indices": [1], "value": "0"}

    def test_csv_input(self, capsys, tmp_path):
        path = tmp_path / "a.csv"
        path.write_text("2,1\n-1,2\n", encoding="utf-8")
        code, report, _ = _run(capsys, ["analyze", "--input", str(path)])
        assert code == 0
        assert report["result"]["scalar"] == "float"

    def test_malformed_file(self, capsys, tmp_path):
        bad = _write(tmp_path / "bad.json", {"entries": [[1, 2, 3], [4, 5, 6]]})
        code, report, err = _run(capsys, ["analyze", "--input", str(bad)])
        assert code == 2
        assert report is None
        assert "Error" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = _run(capsys, ["analyze", "--input", str(tmp_path / "nope.json")])
        assert code == 2
        assert "not found" in err

    def test_cap_exceeded(self, capsys, monkeypatch, tmp_path):
        monkeypatch.setenv("PMAT_MINOR_CAP", "2")
        get_settings.cache_clear()
        dense = _write(tmp_path / "dense.json", [[2, 1, 1], [1, 2, 1], [1, 1, 2]])
        code, _, err = _run(capsys, ["analyze", "--input", str(dense), "--method", "minors"])
        assert code == 2
        assert "cap" in err

    def test_invalid_environment(self, capsys, monkeypatch, swap_file):
        monkeypatch.setenv("PMAT_TOL", "-1")
        get_settings.cache_clear()
        code, _, err = _run(capsys, ["analyze", "--input", str(swap_file)])
        assert code == 2
        assert "PMAT" in err or "tol" in err

    def test_unknown_method_is_a_usage_error(self, swap_file):
        with pytest.raises(SystemExit) as excinfo:
            run_cli(["analyze", "--input", str(swap_file), "--method", "guess"])
        assert excinfo.value.code == 2


class TestOperator:
    def test_left_shift_is_not_p(self, capsys):
        code, report, _ = _run(capsys, ["operator", "--preset", "example-4-left-shift", "--n", "8"])
        assert code == 1
        assert report["result"]["verdict"]["witness"]["vector"]
        assert report["result"]["witness_sequence"]["sign_reversed"] is True
        assert report["result"]["witness_sequence"]["square_summable"] is True

    def test_example_6_in_the_hadamard_basis(self, capsys):
        code, report, _ = _run(capsys, ["operator", "--preset", "example-6", "--n", "4", "--basis", "block-hadamard"])
        assert code == 1
        witness = report["result"]["verdict"]["witness"]["vector"]
        assert witness[:2] == pytest.approx([1.0, -1.0])
        assert witness[2:] == [0.0, 0.0]
        assert report["result"]["matches_expected"] is True
        assert report["result"]["commutes_with_basis_unitary"] is False

    def test_example_8_in_the_hadamard_basis(self, capsys):
        code, report, _ = _run(capsys, ["operator", "--preset", "example-8", "--n", "4", "--basis", "block-hadamard"])
        assert code == 0
        assert report["result"]["verdict"]["is_p"] is True
        assert report["result"]["commutes_with_basis_unitary"] is False

    def test_large_n_falls_back_to_minors(self, capsys):
        code, report, _ = _run(capsys, ["operator", "--preset", "example-6", "--n", "64"])
        assert code == 0
        assert report["command"]["method"] == "minors"

    def test_odd_n_for_a_block_kind(self, capsys):
        code, _, _ = _run(capsys, ["operator", "--preset", "example-8", "--n", "3"])
        assert code == 2

    def test_unknown_preset(self, capsys):
        code, _, err = _run(capsys, ["operator", "--preset", "example-99"])
        assert code == 2
        assert "example-99" in err

    def test_spec_file(self, capsys, tmp_path):
        spec = _write(tmp_path / "coupled.json", {"kind": "FirstEntryCoupled", "params": {"coupling": -7}})
        code, report, _ = _run(capsys, ["operator", "--spec", str(spec), "--n", "3"])
        assert code == 0
        assert report["result"]["spec"] == {"kind": "first_entry_coupled", "params": {"coupling": "-7"}}

    def test_spec_file_needs_n(self, capsys, tmp_path):
        spec = _write(tmp_path / "shift.json", {"kind": "right_shift"})
        code, _, _ = _run(capsys, ["operator", "--spec", str(spec)])
        assert code == 2


class TestLcp:
    def test_identity_single_q(self, capsys, tmp_path):
        a = _write(tmp_path / "i2.json", [[1, 0], [0, 1]])
        q = _write(tmp_path / "q.json", [-1, -2])
        code, report, _ = _run(capsys, ["lcp", "--matrix", str(a), "--q", str(q)])
        assert code == 0
        assert report["result"]["count"] == 1
        assert report["result"]["solutions"][0]["z"] == ["1", "2"]

    def test_two_solutions(self, capsys, tmp_path):
        a = _write(tmp_path / "a.json", [[-1, 0], [0, 1]])
        q = _write(tmp_path / "q.json", [1, -1])
        code, report, _ = _run(capsys, ["lcp", "--matrix", str(a), "--q", str(q)])
        assert code == 1
        assert sorted(s["z"] for s in report["result"]["solutions"]) == [["0", "1"], ["1", "1"]]

    def test_sampled_preset_is_unique(self, capsys):
        argv = ["lcp", "--preset", "example-5-id-plus-right-shift", "--n", "4", "--samples", "100", "--seed", "42"]
        code, report, _ = _run(capsys, argv)
        assert code == 0
        assert report["result"]["all_unique"] is True
        assert report["result"]["counts"] == {"1": 100}
        assert report["seed"] == 42

    def test_q_and_samples_are_exclusive(self, tmp_path):
        a = _write(tmp_path / "a.json", [[1]])
        with pytest.raises(SystemExit):
            run_cli(["lcp", "--matrix", str(a), "--q", "q.json", "--samples", "3"])

    def test_non_positive_samples(self, capsys, tmp_path):
        a = _write(tmp_path / "a.json", [[1]])
        code, _, _ = _run(capsys, ["lcp", "--matrix", str(a), "--samples", "0"])
        assert code == 2


class TestVerifyPaper:
    def test_small_regime_passes(self, capsys):
        code, report, _ = _run(capsys, ["verify-paper", "--max-n", "4", "--quick"])
        assert code == 0
        assert report["result"]["passed"] is True
        assert {s["name"] for s in report["result"]["suites"]} == {
            "oracle-equivalence",
            "lcp-characterization",
            "paper-examples",
            "conjugation",
            "commuting-unitary",
            "inverse-closure",
            "positive-definite",
        }

    def test_inverted_detector_gives_a_nonzero_exit(self, capsys, monkeypatch):
        real = detect.is_p
        monkeypatch.setattr(detect, "is_p", lambda *a, **k: replace(real(*a, **k), is_p=not real(*a, **k).is_p))
        code, report, _ = _run(capsys, ["verify-paper", "--max-n", "4", "--quick", "--suite", "paper-examples"])
        assert code != 0
        assert report["result"]["passed"] is False

    @pytest.mark.slow
    def test_defaults_pass(self, capsys):
        code, _, _ = _run(capsys, ["verify-paper"])
        assert code == 0


class TestReportContract:
    def test_identical_invocations_give_identical_reports(self, capsys, swap_file):
        argv = ["--no-timing", "analyze", "--input", str(swap_file)]
        run_cli(argv)
        first = capsys.readouterr().out
        run_cli(argv)
        second = capsys.readouterr().out
        assert first == second
        assert "timing" not in json.loads(first)

    def test_sampled_runs_are_deterministic(self, capsys):
        argv = ["--no-timing", "lcp", "--preset", "example-6", "--n", "4", "--samples", "20", "--seed", "5"]
        run_cli(argv)
        first = capsys.readouterr().out
        run_cli(argv)
        assert capsys.readouterr().out == first

    def test_out_file(self, capsys, tmp_path, swap_file):
        out = tmp_path / "reports" / "swap.json"
        run_cli(["--out", str(out), "analyze", "--input", str(swap_file)])
        printed = json.loads(capsys.readouterr().out)
        assert json.loads(out.read_text(encoding="utf-8")) == printed

    def test_digest_ignores_file_formatting(self, capsys, tmp_path):
        compact = tmp_path / "compact.json"
        compact.write_text('[[0,1],[1,0]]', encoding="utf-8")
        spaced = tmp_path / "spaced.json"
        spaced.write_text('{"entries": [[0, 1],\n  [1, 0]]}', encoding="utf-8")
        _, first, _ = _run(capsys, ["analyze", "--input", str(compact)])
        _, second, _ = _run(capsys, ["analyze", "--input", str(spaced)])
        assert first["inputs_digest"] == second["inputs_digest"]
