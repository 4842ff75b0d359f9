"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion lines.
All tolerances are fixed here; nothing is calibrated at runtime.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from quditbus import algebra, oracle
from quditbus.constructions import (
    adqc_direct_circuit,
    adqc_entangle_circuit,
    adqc_local_circuit,
    adqc_program_circuit,
    batch_rotation_circuit,
    format_report,
    geometric_phase_circuit,
    measured_phase_circuit,
    minimal_control_circuit,
    swapcz_entangle_circuit,
    swapcz_local_circuit,
    toffoli_circuit,
)
from quditbus.engine import (
    GateSpec,
    RegisterLayout,
    StateVector,
    SwapCR,
    apply_op,
    init_register,
    product_state,
    reduced_purity,
)

SUITE_START = time.perf_counter()


@contextmanager
def criterion(num, name):
    try:
        yield
    except Exception:
        print(f"criterion {num:2d} ({name}): FAIL")
        raise
    print(f"criterion {num:2d} ({name}): PASS")


def _ancilla_purities(report):
    full = oracle.circuit_unitary(report.circuit)
    layout = report.circuit.layout
    d_a = layout.dim(report.ancilla_wire)
    reg_dim = layout.size // d_a
    worst = 1.0
    for r in range(reg_dim):
        e = np.zeros(reg_dim, dtype=complex)
        e[r] = 1.0
        out = StateVector(layout, full @ np.kron(e, report.ancilla_state))
        worst = min(worst, reduced_purity(out, report.ancilla_wire))
    return worst


# ---------------------------------------------------------------------------


def test_criterion_1_algebra_suite():
    with criterion(1, "algebra suite"):
        start = time.perf_counter()
        for d in (2, 3, 4, 5, 7, 8):
            w = algebra.omega(d)
            f = algebra.fourier(d)
            eye = np.eye(d)
            assert np.max(np.abs(algebra.pauli_x(d, 1) @ algebra.pauli_x(d, d - 1) - eye)) < 1e-12
            assert np.max(np.abs(np.linalg.matrix_power(algebra.pauli_x(d), d) - eye)) < 1e-12
            assert np.max(np.abs(np.linalg.matrix_power(algebra.pauli_z(d), d) - eye)) < 1e-12
            assert np.max(np.abs(np.linalg.matrix_power(f, 4) - eye)) < 1e-12
            for q in range(d):
                plus_q = algebra.conjugate_state(d, q)
                for qp in range(d):
                    zx = algebra.pauli_z(d, q) @ algebra.pauli_x(d, qp)
                    xz = algebra.pauli_x(d, qp) @ algebra.pauli_z(d, q)
                    assert np.max(np.abs(zx - w ** (q * qp) * xz)) < 1e-12
                    conj = f @ algebra.pauli_z(d, qp) @ f.conj().T
                    assert np.max(np.abs(conj - algebra.pauli_x(d, -qp))) < 1e-12
                    shifted = algebra.pauli_z(d, qp) @ plus_q
                    assert np.max(np.abs(
                        shifted - algebra.conjugate_state(d, (q + qp) % d))) < 1e-12
                    phased = algebra.pauli_x(d, qp) @ plus_q
                    assert np.max(np.abs(phased - w ** (-q * qp) * plus_q)) < 1e-12
        elapsed = time.perf_counter() - start
        assert elapsed < 2.0, f"algebra suite took {elapsed:.2f}s"


def test_criterion_2_geometric_phase():
    with criterion(2, "geometric phase"):
        for d1 in (2, 3, 4):
            for d2 in (2, 3, 4):
                for d_a in (2, 3, 4):
                    for p1 in range(1, d_a):
                        for p2 in range(1, d_a):
                            report = geometric_phase_circuit(d1, d2, d_a, p1, p2)
                            assert report.interaction_count == 4
                            target = algebra.controlled_phase(
                                d1, d2, 2 * np.pi * p1 * p2 / d_a)
                            assert np.max(np.abs(report.target - target)) < 1e-12
                            verdict = oracle.verify_construction(report, 1e-10)
                            assert verdict.fidelity >= 1 - 1e-10
                            assert _ancilla_purities(report) >= 1 - 1e-10
        # qubit all-ones case is CZ exactly up to global phase
        report = geometric_phase_circuit(2, 2, 2, 1, 1)
        cz = np.diag([1, 1, 1, -1]).astype(complex)
        op = oracle.register_operator(report)
        assert oracle.equal_up_to_global_phase(op, cz, 1e-12).passed


def test_criterion_3_measured_phase():
    with criterion(3, "measured phase"):
        for d_a in (2, 3, 5):
            for (d1, d2), (p1, p2) in [((2, 2), (1, 1)), ((2, 3), (1, 2))]:
                report = measured_phase_circuit(d1, d2, d_a, p1, p2)
                assert report.interaction_count == 2
                layout = report.circuit.layout
                for q1 in range(d1):
                    for q2 in range(d2):
                        initial = product_state(
                            layout,
                            [np.eye(d1)[q1], np.eye(d2)[q2], report.ancilla_state],
                        )
                        branches = oracle.branch_enumerate(report.circuit, initial)
                        assert len(branches) == d_a
                        for b in branches:
                            assert abs(b.probability - 1 / d_a) < 1e-12
                target = algebra.controlled_phase(d1, d2, 2 * np.pi * p1 * p2 / d_a)
                assert np.max(np.abs(report.target - target)) < 1e-12
                verdict = oracle.verify_construction(report, 1e-10)
                assert verdict.fidelity >= 1 - 1e-10


def test_criterion_4_batch_composition():
    with criterion(4, "batch composition"):
        powers_c, powers_t = (1, 2), (1, 1)
        for d_a in (2, 3, 4):
            report = batch_rotation_circuit(powers_c, powers_t, d_a)
            assert report.interaction_count == 8
            assert report.baseline_interactions == 16
            assert "pairwise baseline: 16" in format_report(report)
            # independent target: the ordered product of the four pairwise
            # controlled rotations
            reg_layout = RegisterLayout(report.circuit.layout.wires[:-1])
            product = np.eye(16, dtype=complex)
            for j, pc in enumerate(powers_c):
                for k, pt in enumerate(powers_t):
                    cr = algebra.controlled_phase(2, 2, 2 * np.pi * pc * pt / d_a)
                    product = oracle.embed_unitary(
                        cr, [f"c{j + 1}", f"t{k + 1}"], reg_layout) @ product
            assert np.max(np.abs(report.target - product)) < 1e-12
            verdict = oracle.verify_construction(report, 1e-10)
            assert verdict.fidelity >= 1 - 1e-10


def test_criterion_5_toffoli():
    with criterion(5, "toffoli"):
        specs = {"X": GateSpec("X"), "H": GateSpec("F")}
        for n in (2, 3):
            for d_a in (n + 1, n + 2):
                for u_name, u in specs.items():
                    report = toffoli_circuit(n, d_a, u)
                    assert report.interaction_count == 2 * n + 1
                    full = oracle.circuit_unitary(report.circuit)
                    layout = report.circuit.layout
                    reg_dim = 2 ** (n + 1)
                    anc = report.ancilla_state
                    for r in range(reg_dim):
                        e = np.zeros(reg_dim, dtype=complex)
                        e[r] = 1.0
                        out = full @ np.kron(e, anc)
                        expected = np.kron(report.target @ e, anc)
                        assert np.max(np.abs(out - expected)) < 1e-10
            with pytest.raises(ValueError):
                toffoli_circuit(n, n, GateSpec("X"))


def test_criterion_6_adqc():
    with criterion(6, "adqc"):
        # entangling gate: interactions, uniform outcomes, branch consistency
        for d in (2, 3):
            report = adqc_entangle_circuit(d)
            assert report.interaction_count == 2
            layout = report.circuit.layout
            for q1 in range(d):
                for q2 in range(d):
                    initial = product_state(
                        layout, [np.eye(d)[q1], np.eye(d)[q2], report.ancilla_state])
                    branches = oracle.branch_enumerate(report.circuit, initial)
                    assert len(branches) == d
                    for b in branches:
                        assert abs(b.probability - 1 / d) < 1e-12
            ops = list(oracle.branch_operators(report).values())
            for i in range(len(ops)):
                for j in range(i + 1, len(ops)):
                    assert oracle._scaled_fidelity(ops[i], ops[j]) >= 1 - 1e-10
            assert oracle.verify_construction(report, 1e-10).passed

        # local gates v(theta) = H R(theta)
        for theta in (0.0, np.pi / 4, np.pi / 2, 1.234):
            report = adqc_local_circuit(theta)
            assert report.interaction_count == 1
            expected = algebra.fourier(2) @ algebra.phase_gate(2, theta)
            assert np.max(np.abs(report.target - expected)) < 1e-12
            assert oracle.verify_construction(report, 1e-10).fidelity >= 1 - 1e-10

        # a random 10-gate 3-qubit program compiled to ADQC form matches
        # direct simulation over the full branch enumeration
        rng = np.random.default_rng(2024)
        program = []
        for _ in range(10):
            if rng.random() < 0.5:
                i, j = rng.choice(3, size=2, replace=False)
                program.append(("entangle", int(i), int(j)))
            else:
                program.append(
                    ("local", int(rng.integers(3)), float(rng.uniform(0, 2 * np.pi))))
        compiled = adqc_program_circuit(3, program)
        direct = adqc_direct_circuit(3, program)
        ref = oracle.apply_circuit(direct, init_register(direct.layout, (0, 0, 0)).amps)
        ref_full = np.kron(ref, algebra.conjugate_state(2, 0))
        branches = oracle.branch_enumerate(
            compiled, init_register(compiled.layout, (0, 0, 0, 0)))
        assert len(branches) == 2 ** 10
        assert abs(sum(b.probability for b in branches) - 1.0) < 1e-9
        for b in branches:
            assert abs(np.vdot(ref_full, b.state.amps)) >= 1 - 1e-9


def test_criterion_7_swap_cz():
    with criterion(7, "swap-cz"):
        for d in (2, 3):
            report = swapcz_entangle_circuit(d)
            assert report.interaction_count == 3
            target = algebra.swap_gate(d) @ algebra.controlled_phase(d, d, 2 * np.pi / d)
            assert np.max(np.abs(report.target - target)) < 1e-12
            assert oracle.verify_construction(report, 1e-10).fidelity >= 1 - 1e-10
            assert _ancilla_purities(report) >= 1 - 1e-10
            for u in (GateSpec("F"), GateSpec("X"), GateSpec("R", theta=0.7)):
                local = swapcz_local_circuit(d, u)
                assert local.interaction_count == 2
                assert np.max(np.abs(local.target - u.to_matrix(d))) < 1e-12
                assert oracle.verify_construction(local, 1e-10).fidelity >= 1 - 1e-10


def test_criterion_8_minimal_control():
    with criterion(8, "minimal control"):
        h = GateSpec("F")
        theta = np.pi / 4
        r = algebra.phase_gate(2, theta)
        targets = {0: algebra.fourier(2), 1: r @ algebra.fourier(2) @ r}
        for prep, target in targets.items():
            report = minimal_control_circuit(prep, h, theta)
            assert report.interaction_count == 2
            assert not report.circuit.has_measurement()
            assert all(isinstance(op, SwapCR) for op in report.circuit.ops)
            assert np.max(np.abs(report.target - target)) < 1e-12
            op = oracle.register_operator(report)
            assert oracle.equal_up_to_global_phase(op, target, 1e-10).passed


def test_criterion_9_engine_vs_oracle():
    from random_ops import random_measurement_free_ops

    with criterion(9, "engine vs oracle"):
        rng = np.random.default_rng(7777)
        for _ in range(200):
            n_wires = int(rng.integers(1, 5))
            dims = tuple(int(rng.integers(2, 6)) for _ in range(n_wires))
            layout = RegisterLayout(
                tuple((f"w{k}", d) for k, d in enumerate(dims)))
            depth = int(rng.integers(1, 21))
            state = init_register(layout, [0] * n_wires)
            amps = state.amps.copy()
            for op in random_measurement_free_ops(layout, depth, rng):
                state = apply_op(state, op)
                amps = oracle.op_unitary(op, layout) @ amps
            assert np.max(np.abs(state.amps - amps)) < 1e-11


def test_criterion_10_performance():
    with criterion(10, "performance"):
        from quditbus.engine import Fourier

        # single-wire gate on a 2^12-amplitude register under 10 ms
        layout = RegisterLayout(tuple((f"q{k}", 2) for k in range(12)))
        state = init_register(layout, [0] * 12)
        op = Fourier("q5")
        apply_op(state, op)  # warm-up
        times = []
        for _ in range(5):
            t0 = time.perf_counter()
            apply_op(state, op)
            times.append(time.perf_counter() - t0)
        assert min(times) < 0.010, f"2^12 gate took {min(times) * 1e3:.2f} ms"

        # 20-qubit register sustains single-qubit gates under 1 s each
        big = RegisterLayout(tuple((f"q{k}", 2) for k in range(20)))
        big_state = init_register(big, [0] * 20)
        for wire in ("q0", "q10", "q19"):
            t0 = time.perf_counter()
            big_state = apply_op(big_state, Fourier(wire))
            assert time.perf_counter() - t0 < 1.0

        elapsed = time.perf_counter() - SUITE_START
        assert elapsed < 120.0, f"acceptance suite took {elapsed:.1f}s"
