"""Brute-force ground truth for circuits and constructions.

Everything here is deliberately dumb: ops are embedded as full-register
dense matrices and applied by matrix multiplication, measurements are
expanded into every outcome branch, and comparisons are global-phase-blind
trace fidelities. The fast engine is certified against this module, never
the other way round. Register sizes are capped at 2^12 amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra, engine
from .engine import Circuit, Measure, RegisterLayout, SizeCapError, StateVector

ORACLE_AMP_CAP = 2**12


class AncillaEntangledError(Exception):
    """The ancilla failed to disentangle from the register."""


@dataclass(frozen=True)
class FidelityVerdict:
    fidelity: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.fidelity >= 1.0 - self.tolerance


@dataclass(frozen=True)
class Branch:
    """One measurement-outcome history with its probability and final state."""

    outcomes: tuple[tuple[str, int], ...]
    probability: float
    state: StateVector

    def outcome(self, record: str) -> int:
        return dict(self.outcomes)[record]


def _check_cap(layout: RegisterLayout):
    if layout.size > ORACLE_AMP_CAP:
        raise SizeCapError(
            f"oracle register size {layout.size} exceeds cap {ORACLE_AMP_CAP}"
        )


def _perm_to_front(layout: RegisterLayout, axes: list[int]) -> np.ndarray:
    """index map p with p[i] = index of basis state i when the given axes
    are reordered to the front (remaining axes keep their relative order)."""
    dims = layout.dims
    n = len(dims)
    order = axes + [k for k in range(n) if k not in axes]
    strides = np.ones(n, dtype=np.int64)
    for k in range(n - 2, -1, -1):
        strides[k] = strides[k + 1] * dims[k + 1]
    new_dims = [dims[o] for o in order]
    new_strides = np.ones(n, dtype=np.int64)
    for k in range(n - 2, -1, -1):
        new_strides[k] = new_strides[k + 1] * new_dims[k + 1]
    idx = np.arange(layout.size, dtype=np.int64)
    p = np.zeros_like(idx)
    for k, o in enumerate(order):
        p += ((idx // strides[o]) % dims[o]) * new_strides[k]
    return p


def embed_unitary(u: np.ndarray, wires, layout: RegisterLayout) -> np.ndarray:
    """Full-register matrix acting as u on the named wires, identity elsewhere.

    The wires are taken in the listed order as the most-significant part of
    u's index space; non-adjacent and reordered wires are handled by index
    permutation.
    """
    u = np.asarray(u, dtype=complex)
    wires = list(wires)
    if len(set(wires)) != len(wires):
        raise ValueError(f"wires must be distinct, got {wires}")
    axes = [layout.axis(w) for w in wires]
    sel = 1
    for ax in axes:
        sel *= layout.dims[ax]
    if u.shape != (sel, sel):
        raise ValueError(
            f"matrix of shape {u.shape} does not match wire dimensions ({sel})"
        )
    rest = layout.size // sel
    k = np.kron(u, np.eye(rest, dtype=complex))
    p = _perm_to_front(layout, axes)
    return k[np.ix_(p, p)]


def op_unitary(op, layout: RegisterLayout,
               records: dict[str, int] | None = None) -> np.ndarray:
    """Full-register matrix of a non-measurement op."""
    return embed_unitary(
        engine.op_matrix(op, layout, records), engine.op_wires(op), layout
    )


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Ordered product of embedded op matrices; later ops multiply on the left."""
    _check_cap(circuit.layout)
    if circuit.has_measurement():
        raise ValueError("circuit_unitary requires a measurement-free circuit")
    full = np.eye(circuit.layout.size, dtype=complex)
    for op in circuit.ops:
        full = op_unitary(op, circuit.layout) @ full
    return full


def apply_circuit(circuit: Circuit, amps: np.ndarray,
                  records: dict[str, int] | None = None) -> np.ndarray:
    """Apply a measurement-free circuit to raw amplitudes, op by op."""
    _check_cap(circuit.layout)
    for op in circuit.ops:
        amps = op_unitary(op, circuit.layout, records) @ amps
    return amps


def _basis_vectors(d: int, basis: str, theta: float) -> np.ndarray:
    if basis == "computational":
        return np.eye(d, dtype=complex)
    if basis == "theta":
        return algebra.phase_gate(d, -theta) @ algebra.fourier(d)
    raise ValueError(f"unknown measurement basis {basis!r}")


def measurement_vector(layout: RegisterLayout, op: Measure, outcome: int,
                       records: dict[str, int] | None = None) -> np.ndarray:
    """Post-measurement state of the measured wire for a given outcome."""
    d = layout.dim(op.wire)
    theta = float(engine.resolve(op.theta, records))
    return _basis_vectors(d, op.basis, theta)[:, outcome]


def branch_enumerate(circuit: Circuit, initial: StateVector) -> list[Branch]:
    """Depth-first expansion over every measurement outcome.

    Branch probabilities are exact products of projection norms; branches
    below the engine's probability floor are pruned. Feedforward expressions
    are resolved per branch.
    """
    layout = circuit.layout
    _check_cap(layout)
    if initial.layout != layout:
        raise ValueError("initial state layout does not match circuit layout")

    branches: list[Branch] = []

    def walk(amps: np.ndarray, k: int, records: dict[str, int], prob: float):
        for j in range(k, len(circuit.ops)):
            op = circuit.ops[j]
            if isinstance(op, Measure):
                d = layout.dim(op.wire)
                theta = float(engine.resolve(op.theta, records))
                vs = _basis_vectors(d, op.basis, theta)
                for m in range(d):
                    proj = embed_unitary(
                        np.outer(vs[:, m], vs[:, m].conj()), [op.wire], layout
                    )
                    projected = proj @ amps
                    p = float(np.vdot(projected, projected).real)
                    if p < engine.PROB_FLOOR:
                        continue
                    walk(projected / np.sqrt(p), j + 1,
                         {**records, op.record: m}, prob * p)
                return
            amps = op_unitary(op, layout, records) @ amps
        branches.append(
            Branch(tuple(records.items()), prob, StateVector(layout, amps))
        )

    walk(initial.amps.copy(), 0, {}, 1.0)
    return branches


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray,
                             tol: float = 1e-10) -> FidelityVerdict:
    """Trace fidelity |tr(A^dagger B)| / dim; 1 iff A = e^(i phi) B."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    fid = abs(np.trace(a.conj().T @ b)) / a.shape[0]
    return FidelityVerdict(float(fid), tol)


def _scaled_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Phase-blind overlap of two operators, insensitive to overall scale."""
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0 or nb == 0:
        return 0.0
    return float(abs(np.trace(a.conj().T @ b)) / (na * nb))


def _split_register(report, state_amps: np.ndarray) -> np.ndarray:
    """Reshape full-register amplitudes to (register, ancilla)."""
    layout = report.circuit.layout
    if layout.names[-1] != report.ancilla_wire:
        raise ValueError("construction layouts must keep the ancilla wire last")
    d_a = layout.dim(report.ancilla_wire)
    return state_amps.reshape(-1, d_a)


def register_operator(report) -> np.ndarray:
    """Register-restricted operator of a measurement-free construction.

    Checks per-basis-input ancilla purity and raises AncillaEntangledError
    below 1 - 1e-8; otherwise factors out the ancilla state and returns the
    operator acting on the register wires alone.
    """
    circuit = report.circuit
    full = circuit_unitary(circuit)
    d_a = circuit.layout.dim(report.ancilla_wire)
    reg_dim = circuit.layout.size // d_a
    anc0 = np.asarray(report.ancilla_state, dtype=complex).reshape(d_a, 1)
    w = full @ np.kron(np.eye(reg_dim, dtype=complex), anc0)
    w3 = w.reshape(reg_dim, d_a, reg_dim)

    for r in range(reg_dim):
        m = w3[:, :, r]
        rho = m.T @ m.conj()
        purity = float(np.sum(np.abs(rho) ** 2).real)
        if purity < 1.0 - 1e-8:
            raise AncillaEntangledError(
                f"ancilla purity {purity:.12g} on register input {r}"
            )

    # w3[i, a, j] = O[i, j] * v[a]; the dominant right singular vector of the
    # (reg^2, d_a) unfolding is proportional to v, so projecting with its
    # conjugate recovers O up to a global phase
    flat = w3.transpose(1, 0, 2).reshape(d_a, reg_dim * reg_dim)
    _, _, vh = np.linalg.svd(flat.T, full_matrices=False)
    return np.einsum("a,iaj->ij", vh[0].conj(), w3)


def branch_operators(report) -> dict[tuple, np.ndarray]:
    """Per-outcome register operators of a measured construction.

    Columns are assembled from branch enumeration over every register basis
    input; each operator is sub-normalised by its branch probabilities
    (for an outcome of probability p on every input it equals sqrt(p) times
    a unitary when the construction is sound).
    """
    circuit = report.circuit
    layout = circuit.layout
    d_a = layout.dim(report.ancilla_wire)
    reg_dim = layout.size // d_a
    anc0 = np.asarray(report.ancilla_state, dtype=complex)
    measures = {op.record: op for op in circuit.ops if isinstance(op, Measure)}

    ops: dict[tuple, np.ndarray] = {}
    for r in range(reg_dim):
        e_r = np.zeros(reg_dim, dtype=complex)
        e_r[r] = 1.0
        initial = StateVector(layout, np.kron(e_r, anc0))
        for branch in branch_enumerate(circuit, initial):
            key = branch.outcomes
            records = dict(branch.outcomes)
            # the measured wire is left in a known basis state, so the
            # register part can be projected out with exact phases
            last_record = branch.outcomes[-1][0]
            anc_vec = measurement_vector(
                layout, measures[last_record], records[last_record], records
            )
            m = _split_register(report, branch.state.amps)
            reg_vec = m @ anc_vec.conj()
            residual = abs(np.linalg.norm(reg_vec) - 1.0)
            if residual > 1e-9:
                raise AncillaEntangledError(
                    f"branch {key}: ancilla not in the expected basis state "
                    f"(residual {residual:.3g})"
                )
            col = np.sqrt(branch.probability) * reg_vec
            ops.setdefault(key, np.zeros((reg_dim, reg_dim), dtype=complex))
            ops[key][:, r] = col
    return ops


def verify_construction(report, tol: float = 1e-10) -> FidelityVerdict:
    """Certify a construction report against its target gate.

    Measurement-free circuits are compiled to a dense unitary, the ancilla
    is factored out (with a purity check), and the register operator is
    compared to the target up to global phase. Measured circuits are branch
    enumerated over all register basis inputs and every post-correction
    branch is compared to the target. The verdict carries the minimum
    fidelity observed.
    """
    target = np.asarray(report.target)
    if not report.circuit.has_measurement():
        op = register_operator(report)
        return equal_up_to_global_phase(op, target, tol)

    worst = 1.0
    for op in branch_operators(report).values():
        fid = _scaled_fidelity(op, target)
        worst = min(worst, fid)
    return FidelityVerdict(float(worst), tol)
