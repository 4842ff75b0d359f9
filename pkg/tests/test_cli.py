import json

import pytest

from quditbus.cli import main, parse_gatespec


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_gatespec():
    assert parse_gatespec("X").kind == "X"
    assert parse_gatespec("X:2").power == 2
    assert parse_gatespec("H").kind == "F"
    assert parse_gatespec("Finv").inverse
    assert parse_gatespec("R:0.7").theta == pytest.approx(0.7)
    with pytest.raises(ValueError):
        parse_gatespec("T")


def test_verify_toffoli_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "toffoli", "--n", "2", "--da", "3",
                           "--u", "X", "--tol", "1e-10")
    assert code == 0
    assert "verification: PASS" in out
    assert "interactions: 5" in out


def test_verify_refuses_bad_toffoli_dimension(capsys):
    code, _, err = run_cli(capsys, "verify", "toffoli", "--n", "3", "--da", "3")
    assert code == 2
    assert "wraparound" in err


@pytest.mark.parametrize("args", [
    ("geometric", "--d1", "2", "--d2", "3", "--da", "4", "--p1", "1", "--p2", "2"),
    ("measured", "--da", "3"),
    ("batch", "--n", "2", "--m", "2", "--da", "3"),
    ("adqc-entangle", "--d", "3"),
    ("adqc-local", "--theta", "0.785"),
    ("swapcz", "--d", "3"),
    ("swapcz-local", "--d", "3", "--u", "F"),
    ("minimal", "--prep", "1", "--u", "H", "--theta", "0.785"),
])
def test_verify_all_schemes(capsys, args):
    code, out, _ = run_cli(capsys, "verify", *args)
    assert code == 0, out
    assert "verification: PASS" in out


def test_counts_batch_shows_pairwise_baseline(capsys):
    code, out, _ = run_cli(capsys, "counts", "batch", "--n", "2", "--m", "2")
    assert code == 0
    assert "interactions: 8; pairwise baseline: 16" in out


def test_counts_ranges(capsys):
    code, out, _ = run_cli(capsys, "counts", "toffoli", "--n", "2..4")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert "interactions: 5" in lines[0]
    assert "interactions: 9" in lines[2]


def test_build_then_run_round_trip(tmp_path, capsys):
    circuit_path = tmp_path / "m.circuit.json"
    report_path = tmp_path / "m.report.txt"
    code, out, _ = run_cli(capsys, "build", "measured", "--da", "3",
                           "--circuit", str(circuit_path), "--out", str(report_path))
    assert code == 0
    assert circuit_path.exists() and report_path.exists()
    assert "interactions: 2" in report_path.read_text()
    doc = json.loads(circuit_path.read_text())
    assert {op["gate"] for op in doc["ops"]} >= {"CU", "MEASURE", "R"}

    code, out, _ = run_cli(capsys, "run", str(circuit_path), "--seed", "9",
                           "--shots", "2")
    assert code == 0
    assert "shot 0: m=" in out and "shot 1: m=" in out


@pytest.mark.parametrize("args", [
    ("geometric",),
    ("measured", "--da", "3"),
    ("batch",),
    ("toffoli", "--n", "2", "--da", "3"),
    ("adqc-entangle",),
    ("adqc-local", "--theta", "0.3"),
    ("swapcz",),
    ("swapcz-local", "--u", "F"),
    ("minimal", "--prep", "1", "--u", "H"),
])
def test_build_emits_parseable_standalone_files(tmp_path, capsys, args):
    from quditbus import fileio

    circuit_path = tmp_path / "c.json"
    report_path = tmp_path / "r.txt"
    code, _, _ = run_cli(capsys, "build", *args,
                         "--circuit", str(circuit_path), "--out", str(report_path))
    assert code == 0
    circuit = fileio.load_circuit(str(circuit_path))
    assert circuit.layout.size >= 4
    assert "interactions:" in report_path.read_text()


def test_run_is_byte_identical_for_same_seed(tmp_path, capsys):
    circuit_path = tmp_path / "c.json"
    run_cli(capsys, "build", "adqc-entangle", "--d", "2",
            "--circuit", str(circuit_path), "--out", str(tmp_path / "r.txt"))
    _, out1, _ = run_cli(capsys, "run", str(circuit_path), "--seed", "42")
    _, out2, _ = run_cli(capsys, "run", str(circuit_path), "--seed", "42")
    assert out1 == out2
    assert "m=" in out1


def test_unitary_command(tmp_path, capsys):
    path = tmp_path / "bell.json"
    path.write_text(json.dumps({
        "wires": [{"name": "q0", "dim": 2}, {"name": "q1", "dim": 2}],
        "ops": [{"gate": "F", "wire": "q0"},
                {"gate": "SUM", "control": "q0", "target": "q1"}],
    }))
    code, out, _ = run_cli(capsys, "unitary", str(path))
    assert code == 0
    rows = out.strip().splitlines()
    assert len(rows) == 4
    assert rows[0].split("\t")[0] == "0.707106781+0i"


def test_unitary_rejects_measurement(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({
        "wires": [{"name": "q", "dim": 2}],
        "ops": [{"gate": "MEASURE", "wire": "q", "record": "m"}],
    }))
    code, _, err = run_cli(capsys, "unitary", str(path))
    assert code == 2
    assert "measurement-free" in err


def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{ not json ]")
    code, _, err = run_cli(capsys, "run", str(path))
    assert code == 1
    assert "parse error" in err


def test_unitary_respects_oracle_cap(tmp_path, capsys):
    path = tmp_path / "wide.json"
    path.write_text(json.dumps({
        "wires": [{"name": f"q{k}", "dim": 2} for k in range(13)],
        "ops": [],
    }))
    code, _, err = run_cli(capsys, "unitary", str(path))
    assert code == 4
    assert "cap" in err


def test_size_cap_exit_code(tmp_path, capsys):
    path = tmp_path / "big.json"
    path.write_text(json.dumps({
        "wires": [{"name": f"q{k}", "dim": 2} for k in range(25)],
        "ops": [],
    }))
    code, _, err = run_cli(capsys, "run", str(path))
    assert code == 4
    assert "cap" in err


def test_missing_file_is_precondition_error(capsys):
    code, _, _ = run_cli(capsys, "run", "/nonexistent/file.json")
    assert code == 2


def test_verification_failure_exit_code(capsys, monkeypatch):
    from quditbus import oracle

    monkeypatch.setattr(
        oracle, "verify_construction",
        lambda report, tol: oracle.FidelityVerdict(0.5, tol),
    )
    code, out, _ = run_cli(capsys, "verify", "geometric")
    assert code == 3
    assert "verification: FAIL" in out


def test_entangled_ancilla_maps_to_verification_failure(capsys, monkeypatch):
    from quditbus import oracle

    def boom(report, tol):
        raise oracle.AncillaEntangledError("purity 0.5")

    monkeypatch.setattr(oracle, "verify_construction", boom)
    code, out, _ = run_cli(capsys, "verify", "swapcz", "--d", "2")
    assert code == 3
    assert "ancilla entangled" in out
