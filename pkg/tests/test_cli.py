"""End-to-end CLI behaviour: subcommands, exit codes, file outputs."""

import json

import numpy as np
import pytest

from qubitcert.cli import EXIT_IO, EXIT_OK, EXIT_SCHEMA, EXIT_USAGE, main
from qubitcert.configs import builtin_config, load_config, predicted_prob_matrix
from qubitcert.sampling import load_record
from qubitcert.witness import witness


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- gen-config ------------------------------------------------------------


def test_gen_config_builtin(tmp_path, capsys):
    out = tmp_path / "cfg.json"
    code, stdout, _ = run(capsys, "gen-config", "II-0", "--out", str(out))
    assert code == EXIT_OK
    assert "prep n_1" in stdout and "meas m_4" in stdout
    cfg = load_config(out)
    assert cfg == builtin_config("II-0")


def test_gen_config_canonicalizes_custom_file(tmp_path, capsys):
    src = tmp_path / "in.json"
    src.write_text(
        json.dumps(
            {
                "id": "custom",
                "preparations": [[0, 0], [0.7, 0.1], [1.4, 0.2], [2.1, 0.3], [2.8, 0.4]],
                "measurements": [[0.5, 1.5], [1.0, 2.0], [1.5, 2.5], [2.0, 3.0]],
            }
        )
    )
    out = tmp_path / "out.json"
    code, _, _ = run(capsys, "gen-config", "--config", str(src), "--out", str(out))
    assert code == EXIT_OK
    assert load_config(out).id == "custom"


def test_gen_config_unknown_id(capsys):
    code, _, stderr = run(capsys, "gen-config", "II-9")
    assert code == EXIT_USAGE
    assert "II-9" in stderr


# --- simulate --------------------------------------------------------------


def test_simulate_writes_record(tmp_path, capsys):
    out = tmp_path / "rec.json"
    code, stdout, _ = run(
        capsys,
        "simulate",
        "--config",
        "I-second",
        "--jobs",
        "3",
        "--shots",
        "500",
        "--reps",
        "2",
        "--seed",
        "7",
        "--out",
        str(out),
    )
    assert code == EXIT_OK
    assert "T = 3000" in stdout
    rec = load_record(out)
    assert rec.config_id == "I-second"
    assert len(rec.jobs) == 3
    assert rec.jobs[0].shots == 500


def test_simulate_is_seed_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        code, _, _ = run(
            capsys, "simulate", "--config", "II-1", "--jobs", "2", "--shots", "100",
            "--seed", "3", "--out", str(out),
        )
        assert code == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_simulate_noise_flags_change_truth(tmp_path, capsys):
    out = tmp_path / "rec.json"
    code, stdout, _ = run(
        capsys, "simulate", "--config", "II-0", "--jobs", "2", "--shots", "100",
        "--coherent-leak", "0.3", "--out", str(out),
    )
    assert code == EXIT_OK
    assert "true W = +3.4" in stdout  # frozen leak witness 3.41e-3


def test_simulate_drift_excludes_other_noise(tmp_path, capsys):
    code, _, stderr = run(
        capsys, "simulate", "--config", "II-0", "--drift-eps", "0.01",
        "--coherent-leak", "0.1", "--out", str(tmp_path / "r.json"),
    )
    assert code == EXIT_USAGE
    assert "drift" in stderr


def test_simulate_bad_leak_params(tmp_path, capsys):
    code, _, _ = run(
        capsys, "simulate", "--config", "II-0", "--leak-lambda", "1.5",
        "--out", str(tmp_path / "r.json"),
    )
    assert code == EXIT_USAGE


def test_simulate_custom_config_file(tmp_path, capsys):
    cfgfile = tmp_path / "c.json"
    code, _, _ = run(capsys, "gen-config", "I-prime", "--out", str(cfgfile))
    assert code == EXIT_OK
    out = tmp_path / "rec.json"
    code, _, _ = run(
        capsys, "simulate", "--config", str(cfgfile), "--jobs", "1",
        "--shots", "50", "--out", str(out),
    )
    assert code == EXIT_OK
    assert load_record(out).config_id == "I-prime"


def test_simulate_missing_config(capsys, tmp_path):
    code, _, stderr = run(
        capsys, "simulate", "--config", str(tmp_path / "ghost.json"),
        "--out", str(tmp_path / "r.json"),
    )
    assert code == EXIT_USAGE
    assert "neither" in stderr


# --- analyze ---------------------------------------------------------------


def test_analyze_pipeline(tmp_path, capsys):
    rec = tmp_path / "rec.json"
    code, _, _ = run(
        capsys, "simulate", "--config", "I-second", "--jobs", "6",
        "--shots", "2000", "--seed", "21", "--out", str(rec),
    )
    assert code == EXIT_OK
    csv = tmp_path / "scatter.csv"
    svg = tmp_path / "scatter.svg"
    code, stdout, _ = run(
        capsys, "analyze", str(rec), "--out", str(csv), "--svg", str(svg)
    )
    assert code == EXIT_OK
    assert "verdict" in stdout
    assert "PASS" in stdout
    assert csv.read_text().startswith("job_index,W")
    assert svg.read_text().startswith("<svg")


def test_analyze_flags_coherent_leak(tmp_path, capsys):
    """The headline detection scenario end to end: a strong coherent leak at
    high statistics must push |z| past the flag threshold."""
    rec = tmp_path / "leaky.json"
    code, _, _ = run(
        capsys, "simulate", "--config", "II-0", "--jobs", "10", "--shots", "100000",
        "--reps", "4", "--coherent-leak", "0.3", "--seed", "11", "--out", str(rec),
    )
    assert code == EXIT_OK
    code, stdout, _ = run(capsys, "analyze", str(rec))
    assert code == EXIT_OK
    assert "FAIL" in stdout


def test_analyze_missing_file(capsys, tmp_path):
    code, _, stderr = run(capsys, "analyze", str(tmp_path / "ghost.json"))
    assert code == EXIT_IO


def test_analyze_schema_violation(tmp_path, capsys):
    rec = tmp_path / "rec.json"
    code, _, _ = run(
        capsys, "simulate", "--config", "II-0", "--jobs", "1", "--shots", "20",
        "--out", str(rec),
    )
    assert code == EXIT_OK
    doc = json.loads(rec.read_text())
    doc["jobs"][0]["counts"][0][3] = [99, 20]  # ones > shots
    rec.write_text(json.dumps(doc))
    code, _, stderr = run(capsys, "analyze", str(rec))
    assert code == EXIT_SCHEMA
    assert "jobs[0].counts[0][3]" in stderr


# --- audit-drift -----------------------------------------------------------


def test_audit_drift_both_modes(tmp_path, capsys):
    csv = tmp_path / "audit.csv"
    code, stdout, _ = run(
        capsys, "audit-drift", "--config", "II-0", "--drift-eps", "0.02",
        "--trials", "20", "--jobs", "6", "--out", str(csv),
    )
    assert code == EXIT_OK
    assert "PASS: bound never violated" in stdout
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == "mode,trials,max_abs_pooled_W,bound,fraction,pass"
    assert len(lines) == 3
    assert lines[1].startswith("angle-jitter,20,")
    assert lines[2].startswith("column-mix,20,")


def test_gen_config_canonical_round_trip(tmp_path, capsys):
    """Feeding gen-config its own output reproduces the file bit-identically."""
    first = tmp_path / "one.json"
    second = tmp_path / "two.json"
    code, _, _ = run(capsys, "gen-config", "I-second", "--out", str(first))
    assert code == EXIT_OK
    code, _, _ = run(capsys, "gen-config", "--config", str(first), "--out", str(second))
    assert code == EXIT_OK
    assert first.read_bytes() == second.read_bytes()


def test_gen_config_malformed_leaves_no_file(tmp_path, capsys):
    src = tmp_path / "bad.json"
    src.write_text(json.dumps({"id": "x", "preparations": [[0, 0]], "measurements": []}))
    out = tmp_path / "never.json"
    code, _, _ = run(capsys, "gen-config", "--config", str(src), "--out", str(out))
    assert code == EXIT_USAGE
    assert not out.exists()


def test_audit_drift_zero_epsilon_passes(capsys):
    code, stdout, _ = run(
        capsys, "audit-drift", "--config", "I-prime", "--drift-eps", "0",
        "--trials", "3",
    )
    assert code == EXIT_OK
    assert "PASS: bound never violated" in stdout


def test_audit_drift_single_mode(capsys):
    code, stdout, _ = run(
        capsys, "audit-drift", "--config", "I-second", "--drift-eps", "0.01",
        "--trials", "5", "--drift-mode", "angle-jitter",
    )
    assert code == EXIT_OK
    assert "column-mix" not in stdout


# --- optimize --------------------------------------------------------------


def test_optimize_d3_real(tmp_path, capsys):
    out = tmp_path / "result.json"
    code, stdout, _ = run(
        capsys, "optimize", "--dim", "3", "--field", "real", "--restarts", "15",
        "--out", str(out),
    )
    assert code == EXIT_OK
    assert "0.596621346626" in stdout
    data = json.loads(out.read_text())
    assert data["problem"]["d"] == 3
    assert data["best_W"] == pytest.approx(27 * np.sqrt(2) / 64, abs=1e-9)


def test_optimize_d2_reports_zero(capsys):
    code, stdout, _ = run(capsys, "optimize", "--dim", "2", "--restarts", "5")
    assert code == EXIT_OK
    assert "vanishes" in stdout


def test_optimize_requires_dim(capsys):
    code, _, _ = run(capsys, "optimize")
    assert code == EXIT_USAGE


# --- top-level -------------------------------------------------------------


def test_no_command_prints_help(capsys):
    code, stdout, _ = run(capsys)
    assert code == EXIT_USAGE
    assert "gen-config" in stdout


def test_version_flag(capsys):
    code, stdout, _ = run(capsys, "--version")
    assert code == EXIT_OK
    assert "qubitcert" in stdout
