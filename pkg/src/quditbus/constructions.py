"""Builders for ancilla-mediated gate schemes.

Each builder emits a ConstructionReport holding the circuit, the target
register gate, the classical correction schedule, and the register-ancilla
interaction count. Circuits keep register wires first and the ancilla wire
last; the intended ancilla preparation is carried as a state vector in the
report (serialisation prepends explicit preparation ops so emitted circuit
files run standalone from |0...0>).

The schemes:

* geometric: four register-controlled Pauli gates steer the ancilla around
  a closed loop, leaving a controlled phase CR(2*pi*p1*p2/d_a) on the
  register and the ancilla untouched.
* measured: the first half of the geometric loop followed by a
  computational measurement of the ancilla; the outcome-dependent phase
  error is cancelled by a feedforward rotation on the first register wire.
* batch: the geometric loop with the controlled Paulis from N control and
  M target wires batched together, giving all N*M pairwise controlled
  rotations in 2(N+M) interactions instead of 4*N*M.
* toffoli: a qudit ancilla counts how many control qubits are set; a
  zero-controlled gate fires u on the target exactly when the count hits N,
  then the counting is undone. 2N+1 interactions, requires d_a > N.
* adqc entangle / local: a single fixed interaction (controlled-Z then
  Fourier gates on both systems) plus ancilla measurements; Pauli errors
  are derived by branch enumeration and corrected by feedforward.
* swapcz entangle / local: a fixed SWAP * CR(theta) interaction; three
  interactions entangle two register wires, two interactions sandwich a
  local ancilla gate onto a register wire.
* minimal control: SWAP * CR(theta) with a fixed local u folded into the
  interaction; the ancilla preparation basis state alone selects between
  implementing u and R(theta) u R(theta).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from . import algebra, oracle
from .engine import (
    Affine,
    Circuit,
    ControlledU,
    Fourier,
    GateOp,
    GateSpec,
    LocalU,
    Measure,
    PauliX,
    PauliZ,
    PhaseR,
    RegisterLayout,
    StateVector,
    SwapCR,
    describe_op,
    op_wires,
)

SCHEMES = (
    "geometric", "measured", "batch", "toffoli", "adqc-entangle",
    "adqc-local", "swapcz", "swapcz-local", "minimal",
)


@dataclass(frozen=True, eq=False)
class ConstructionReport:
    """Target gate, emitted circuit, counts, corrections and verdict."""

    scheme: str
    circuit: Circuit
    register_wires: tuple[str, ...]
    ancilla_wire: str
    ancilla_state: np.ndarray
    target: np.ndarray
    corrections: tuple[tuple[str, GateOp], ...] = ()
    interaction_count: int = 0
    baseline_interactions: int | None = None
    notes: tuple[str, ...] = ()
    verified: bool = False
    fidelity: float | None = None

    def with_verdict(self, verdict: oracle.FidelityVerdict) -> "ConstructionReport":
        return replace(self, verified=True, fidelity=verdict.fidelity)

    def initial_state(self, register_labels) -> StateVector:
        """Full initial state: register basis labels plus the ancilla prep."""
        layout = self.circuit.layout
        reg_dim = layout.size // layout.dim(self.ancilla_wire)
        e = np.zeros(reg_dim, dtype=complex)
        idx = 0
        for q, w in zip(register_labels, self.register_wires):
            idx = idx * layout.dim(w) + int(q)
        e[idx] = 1.0
        return StateVector(layout, np.kron(e, self.ancilla_state))


def count_interactions(circuit: Circuit, ancilla_wire: str) -> int:
    """Number of two-wire ops touching the ancilla wire."""
    total = 0
    for op in circuit.ops:
        if isinstance(op, Measure):
            continue
        wires = op_wires(op)
        if len(wires) == 2 and ancilla_wire in wires:
            total += 1
    return total


def _basis_state(d: int, label: int) -> np.ndarray:
    e = np.zeros(d, dtype=complex)
    e[label % d] = 1.0
    return e


def _as_gatespec(u, d: int) -> GateSpec:
    if isinstance(u, GateSpec):
        u.to_matrix(d)  # validates the dimension
        return u
    spec = GateSpec.from_matrix(np.asarray(u, dtype=complex))
    if spec.matrix.shape[0] != d:
        raise ValueError(
            f"gate of dimension {spec.matrix.shape[0]} does not match wire "
            f"dimension {d}"
        )
    return spec


def _signed_power(a: int, d: int) -> int:
    """Smallest-magnitude representative of a mod d, for readable schedules."""
    a %= d
    return a - d if a > d // 2 else a


# ---------------------------------------------------------------------------
# Geometric phase family
# ---------------------------------------------------------------------------


def _loop_ops(p1: int, p2: int) -> tuple[GateOp, ...]:
    # closed loop: Z(p1), X(-p2), Z(-p1), X(p2) on the ancilla accumulates
    # the phase omega^(p1*p2) per unit of control excitation
    return (
        ControlledU("r1", "a", GateSpec("Z", power=p1)),
        ControlledU("r2", "a", GateSpec("X", power=-p2)),
        ControlledU("r1", "a", GateSpec("Z", power=-p1)),
        ControlledU("r2", "a", GateSpec("X", power=p2)),
    )


def geometric_phase_circuit(d1: int, d2: int, d_a: int,
                            p1: int, p2: int) -> ConstructionReport:
    """Unitary controlled-phase gate mediated by four ancilla interactions.

    Register action is CR(2*pi*p1*p2/d_a) up to global phase; the ancilla
    returns to its initial state whatever that state is.
    """
    layout = RegisterLayout((("r1", d1), ("r2", d2), ("a", d_a)))
    circuit = Circuit(layout, _loop_ops(int(p1), int(p2)))
    theta = 2.0 * np.pi * int(p1) * int(p2) / d_a
    return ConstructionReport(
        scheme="geometric",
        circuit=circuit,
        register_wires=("r1", "r2"),
        ancilla_wire="a",
        ancilla_state=_basis_state(d_a, 0),
        target=algebra.controlled_phase(d1, d2, theta),
        interaction_count=count_interactions(circuit, "a"),
    )


def measured_phase_circuit(d1: int, d2: int, d_a: int,
                           p1: int, p2: int) -> ConstructionReport:
    """Measurement-driven controlled-phase gate with feedforward correction.

    Half the geometric loop entangles the ancilla (prepared in the
    conjugate state |+_0>), a computational measurement disentangles it
    while revealing nothing about the register, and the outcome-dependent
    error R(2*pi*m*p1/d_a) on the first register wire is undone by
    feedforward.
    """
    p1, p2 = int(p1), int(p2)
    layout = RegisterLayout((("r1", d1), ("r2", d2), ("a", d_a)))
    correction = PhaseR("r1", Affine(-2.0 * np.pi * p1 / d_a, "m"))
    circuit = Circuit(layout, (
        ControlledU("r1", "a", GateSpec("Z", power=p1)),
        ControlledU("r2", "a", GateSpec("X", power=-p2)),
        Measure("a", "m"),
        correction,
    ))
    theta = 2.0 * np.pi * p1 * p2 / d_a
    return ConstructionReport(
        scheme="measured",
        circuit=circuit,
        register_wires=("r1", "r2"),
        ancilla_wire="a",
        ancilla_state=algebra.conjugate_state(d_a, 0),
        target=algebra.controlled_phase(d1, d2, theta),
        corrections=(("m", correction),),
        interaction_count=count_interactions(circuit, "a"),
    )


def batch_rotation_circuit(control_powers, target_powers, d_a: int,
                           control_dims=None, target_dims=None,
                           ) -> ConstructionReport:
    """All pairwise controlled rotations between two wire groups at once.

    One geometric loop with the controlled Paulis batched per group yields
    CR(2*pi*p_j*p'_k/d_a) between every control wire j and target wire k,
    using 2(N+M) interactions against the 4*N*M pairwise baseline.
    """
    control_powers = [int(p) for p in control_powers]
    target_powers = [int(p) for p in target_powers]
    n, m = len(control_powers), len(target_powers)
    if n < 1 or m < 1:
        raise ValueError("both wire groups must be non-empty")
    control_dims = list(control_dims) if control_dims else [2] * n
    target_dims = list(target_dims) if target_dims else [2] * m
    if len(control_dims) != n or len(target_dims) != m:
        raise ValueError("dimension lists must match the power lists")

    c_names = tuple(f"c{j + 1}" for j in range(n))
    t_names = tuple(f"t{k + 1}" for k in range(m))
    layout = RegisterLayout(
        tuple(zip(c_names, control_dims)) + tuple(zip(t_names, target_dims))
        + (("a", d_a),)
    )
    ops: list[GateOp] = []
    ops += [ControlledU(c, "a", GateSpec("Z", power=p))
            for c, p in zip(c_names, control_powers)]
    ops += [ControlledU(t, "a", GateSpec("X", power=-p))
            for t, p in zip(t_names, target_powers)]
    ops += [ControlledU(c, "a", GateSpec("Z", power=-p))
            for c, p in zip(c_names, control_powers)]
    ops += [ControlledU(t, "a", GateSpec("X", power=p))
            for t, p in zip(t_names, target_powers)]
    circuit = Circuit(layout, tuple(ops))

    reg_dims = control_dims + target_dims
    reg_dim = int(np.prod(reg_dims))
    phases = np.zeros(reg_dim, dtype=complex)
    for idx in range(reg_dim):
        rem, labels = idx, []
        for d in reversed(reg_dims):
            rem, q = divmod(rem, d)
            labels.append(q)
        labels.reverse()
        a = sum(p * q for p, q in zip(control_powers, labels[:n]))
        b = sum(p * q for p, q in zip(target_powers, labels[n:]))
        phases[idx] = np.exp(2j * np.pi * ((a * b) % d_a) / d_a)

    return ConstructionReport(
        scheme="batch",
        circuit=circuit,
        register_wires=c_names + t_names,
        ancilla_wire="a",
        ancilla_state=_basis_state(d_a, 0),
        target=np.diag(phases),
        interaction_count=count_interactions(circuit, "a"),
        baseline_interactions=4 * n * m,
    )


# ---------------------------------------------------------------------------
# Qudit-ancilla Toffoli
# ---------------------------------------------------------------------------


def toffoli_circuit(n_controls: int, d_a: int, u) -> ConstructionReport:
    """Generalised Toffoli on qubits via a counting qudit ancilla.

    The ancilla starts at |-N mod d_a> and counts the set control qubits;
    a zero-controlled u fires on the target exactly when all N controls are
    set, and the counting is then inverted. Needs d_a > N so the count
    cannot wrap around; 2N+1 interactions total.
    """
    n_controls = int(n_controls)
    if n_controls < 1:
        raise ValueError("need at least one control qubit")
    if d_a <= n_controls:
        raise ValueError(
            f"ancilla dimension {d_a} allows modular wraparound with "
            f"{n_controls} controls; need d_a > N"
        )
    u_spec = _as_gatespec(u, 2)
    c_names = tuple(f"c{j + 1}" for j in range(n_controls))
    layout = RegisterLayout(
        tuple((c, 2) for c in c_names) + (("t", 2), ("a", d_a))
    )
    ops: list[GateOp] = [
        ControlledU(c, "a", GateSpec("X", power=1)) for c in c_names
    ]
    ops.append(ControlledU("a", "t", u_spec, zero_controlled=True))
    ops += [ControlledU(c, "a", GateSpec("X", power=-1)) for c in c_names]
    circuit = Circuit(layout, tuple(ops))

    reg_dim = 2 ** (n_controls + 1)
    target = np.eye(reg_dim, dtype=complex)
    target[reg_dim - 2:, reg_dim - 2:] = u_spec.to_matrix(2)

    return ConstructionReport(
        scheme="toffoli",
        circuit=circuit,
        register_wires=c_names + ("t",),
        ancilla_wire="a",
        ancilla_state=_basis_state(d_a, -n_controls),
        target=target,
        interaction_count=count_interactions(circuit, "a"),
    )


# ---------------------------------------------------------------------------
# Ancilla-driven computation (fixed interaction + measurement)
# ---------------------------------------------------------------------------


def adqc_interaction(d: int, variant: str = "main") -> np.ndarray:
    """The fixed two-system ADQC interaction as a dense matrix.

    variant "main": controlled-Z followed by F on the register and
    F^dagger on the ancilla. variant "caption": F on both systems instead.
    """
    if variant not in ("main", "caption"):
        raise ValueError(f"unknown interaction variant {variant!r}")
    cz = algebra.controlled_phase(d, d, 2.0 * np.pi / d)
    f = algebra.fourier(d)
    anc = algebra.fourier(d, inverse=(variant == "main"))
    return np.kron(f, anc) @ cz


def _interaction_ops(register_wire: str, variant: str) -> tuple[GateOp, ...]:
    return (
        ControlledU(register_wire, "a", GateSpec("Z", power=1)),
        Fourier(register_wire),
        Fourier("a", inverse=(variant == "main")),
    )


def _derive_pauli_corrections(uncorrected: ConstructionReport,
                              wires: tuple[str, ...], d: int,
                              ) -> tuple[tuple[str, GateOp], ...]:
    """Outcome-dependent Pauli powers cancelling each branch's error.

    Searched by brute force against the branch operators and fitted to the
    affine form a*m; fails loudly if any branch resists a Pauli correction
    or the fit is not affine.
    """
    branch_ops = oracle.branch_operators(uncorrected)
    record = uncorrected.circuit.records[0]
    found: dict[int, tuple[int, ...]] = {}
    for key, op in branch_ops.items():
        m = dict(key)[record]
        for combo in itertools.product(range(d), repeat=2 * len(wires)):
            corr = np.eye(1, dtype=complex)
            for w in range(len(wires)):
                x, z = combo[2 * w], combo[2 * w + 1]
                corr = np.kron(corr, algebra.pauli_x(d, x) @ algebra.pauli_z(d, z))
            if oracle._scaled_fidelity(corr @ op, uncorrected.target) >= 1 - 1e-9:
                found[m] = combo
                break
        else:
            raise ValueError(f"no Pauli correction found for outcome {m}")

    coeffs = []
    for slot in range(2 * len(wires)):
        a = found.get(1, (0,) * 2 * len(wires))[slot]
        for m, combo in found.items():
            if combo[slot] != (a * m) % d:
                raise ValueError("correction powers are not affine in the outcome")
        coeffs.append(_signed_power(a, d))

    schedule: list[tuple[str, GateOp]] = []
    for w, wire in enumerate(wires):
        x, z = coeffs[2 * w], coeffs[2 * w + 1]
        if z:
            schedule.append((record, PauliZ(wire, Affine(z, record))))
        if x:
            schedule.append((record, PauliX(wire, Affine(x, record))))
    return tuple(schedule)


def adqc_entangle_circuit(d: int, variant: str = "main") -> ConstructionReport:
    """Entangling gate from two fixed ADQC interactions and a measurement.

    The effective register gate is (F (x) F) * CZ for the main variant and
    (F (x) F) * CZ^-1 for the caption variant, in both cases up to an
    outcome-dependent Pauli error on the first register wire. The
    correction schedule is derived by branch enumeration, not hard-coded.
    """
    layout = RegisterLayout((("r1", d), ("r2", d), ("a", d)))
    base = _interaction_ops("r1", variant) + _interaction_ops("r2", variant)
    base += (Measure("a", "m"),)
    theta = 2.0 * np.pi / d if variant == "main" else -2.0 * np.pi / d
    target = np.kron(algebra.fourier(d), algebra.fourier(d)) \
        @ algebra.controlled_phase(d, d, theta)
    gate_note = "(F x F) * CZ" if variant == "main" else "(F x F) * CZ^-1"

    draft = ConstructionReport(
        scheme="adqc-entangle",
        circuit=Circuit(layout, base),
        register_wires=("r1", "r2"),
        ancilla_wire="a",
        ancilla_state=algebra.conjugate_state(d, 0),
        target=target,
    )
    schedule = _derive_pauli_corrections(draft, ("r1", "r2"), d)
    circuit = Circuit(layout, base + tuple(op for _, op in schedule))
    return replace(
        draft,
        circuit=circuit,
        corrections=schedule,
        interaction_count=count_interactions(circuit, "a"),
        notes=(f"variant: {variant}", f"effective register gate: {gate_note}"),
    )


def adqc_local_circuit(theta: float) -> ConstructionReport:
    """Local gate v(theta) = H R(theta) on a register qubit, ADQC style.

    One fixed interaction delocalises the qubit into the ancilla; measuring
    the ancilla in the rotated basis |theta_m> = R(-theta)F|m> applies
    v(theta), with outcome 1 leaving a Pauli error that feedforward removes.
    Qubits only.
    """
    theta = float(theta)
    layout = RegisterLayout((("r", 2), ("a", 2)))
    base = _interaction_ops("r", "main") + (
        Measure("a", "m", basis="theta", theta=theta),
    )
    target = algebra.fourier(2) @ algebra.phase_gate(2, theta)
    draft = ConstructionReport(
        scheme="adqc-local",
        circuit=Circuit(layout, base),
        register_wires=("r",),
        ancilla_wire="a",
        ancilla_state=algebra.conjugate_state(2, 0),
        target=target,
    )
    schedule = _derive_pauli_corrections(draft, ("r",), 2)
    circuit = Circuit(layout, base + tuple(op for _, op in schedule))
    return replace(
        draft,
        circuit=circuit,
        corrections=schedule,
        interaction_count=count_interactions(circuit, "a"),
    )


# ---------------------------------------------------------------------------
# Swap-type interaction models
# ---------------------------------------------------------------------------


def swapcz_entangle_circuit(d: int, theta: float | None = None,
                            ) -> ConstructionReport:
    """SWAP * CR(theta) on two register wires via three fixed interactions.

    The ancilla starts in |0>, making the first interaction a pure swap-in;
    after interacting with the second wire the logical state is swapped
    back, leaving the register entangled and the ancilla again in |0>.
    theta defaults to 2*pi/d, for which the entangling part is CZ.
    """
    d = algebra.check_dimension(d)
    theta = 2.0 * np.pi / d if theta is None else float(theta)
    layout = RegisterLayout((("r1", d), ("r2", d), ("a", d)))
    circuit = Circuit(layout, (
        SwapCR("a", "r1", theta),
        SwapCR("a", "r2", theta),
        SwapCR("a", "r1", theta),
    ))
    return ConstructionReport(
        scheme="swapcz",
        circuit=circuit,
        register_wires=("r1", "r2"),
        ancilla_wire="a",
        ancilla_state=_basis_state(d, 0),
        target=algebra.swap_gate(d) @ algebra.controlled_phase(d, d, theta),
        interaction_count=count_interactions(circuit, "a"),
    )


def swapcz_local_circuit(d: int, u, theta: float | None = None,
                         ) -> ConstructionReport:
    """Local register gate via swap-in, ancilla manipulation, swap-out.

    Because CR(theta) is inert whenever either system is in |0>, the two
    fixed interactions act as exact swaps and the register picks up u with
    no residual phase.
    """
    d = algebra.check_dimension(d)
    theta = 2.0 * np.pi / d if theta is None else float(theta)
    u_spec = _as_gatespec(u, d)
    layout = RegisterLayout((("r", d), ("a", d)))
    circuit = Circuit(layout, (
        SwapCR("r", "a", theta),
        LocalU("a", u_spec),
        SwapCR("r", "a", theta),
    ))
    return ConstructionReport(
        scheme="swapcz-local",
        circuit=circuit,
        register_wires=("r",),
        ancilla_wire="a",
        ancilla_state=_basis_state(d, 0),
        target=u_spec.to_matrix(d),
        interaction_count=count_interactions(circuit, "a"),
    )


def minimal_control_circuit(prep: int, u, theta: float) -> ConstructionReport:
    """Ancilla preparation as the only control: u or R(theta) u R(theta).

    The fixed interaction is SWAP * CR(theta) with a local u folded in on
    the outgoing side. Two interactions of the register qubit with an
    ancilla prepared in |0> implement u; preparing |1> instead implements
    R(theta) u R(theta). No other controls and no measurement. Qubits only.
    """
    prep = int(prep)
    if prep not in (0, 1):
        raise ValueError(f"ancilla preparation must be 0 or 1, got {prep}")
    theta = float(theta)
    u_spec = _as_gatespec(u, 2)
    layout = RegisterLayout((("r", 2), ("a", 2)))
    interaction = SwapCR("r", "a", theta, local=u_spec)
    circuit = Circuit(layout, (interaction, interaction))

    u_mat = u_spec.to_matrix(2)
    if prep == 0:
        target = u_mat
    else:
        r = algebra.phase_gate(2, theta)
        target = r @ u_mat @ r
    return ConstructionReport(
        scheme="minimal",
        circuit=circuit,
        register_wires=("r",),
        ancilla_wire="a",
        ancilla_state=_basis_state(2, prep),
        target=target,
        interaction_count=count_interactions(circuit, "a"),
        notes=(f"ancilla preparation selects the gate: prep={prep}",),
    )


# ---------------------------------------------------------------------------
# ADQC program compilation
# ---------------------------------------------------------------------------


def adqc_program_circuit(n_qubits: int, program) -> Circuit:
    """Compile a program of v(theta) and entangling gates to ADQC form.

    Instructions are ("local", wire_index, theta) or
    ("entangle", wire_i, wire_j). Each gate becomes fixed interactions with
    a single reused ancilla wire, an ancilla measurement and feedforward
    Pauli corrections; the ancilla is reset to |+_0> by feedforward after
    every measurement so it can mediate the next gate.
    """
    if n_qubits < 1:
        raise ValueError("need at least one register qubit")
    names = [f"q{i}" for i in range(n_qubits)]
    layout = RegisterLayout(tuple((q, 2) for q in names) + (("a", 2),))
    ops: list[GateOp] = [Fourier("a")]
    for k, instr in enumerate(program):
        rec = f"m{k}"
        if instr[0] == "entangle":
            _, i, j = instr
            ops += list(_interaction_ops(names[i], "main"))
            ops += list(_interaction_ops(names[j], "main"))
            ops += [
                Measure("a", rec),
                PauliX(names[i], Affine(-1, rec)),
                PauliX("a", Affine(-1, rec)),
                Fourier("a"),
            ]
        elif instr[0] == "local":
            _, i, theta = instr
            ops += list(_interaction_ops(names[i], "main"))
            ops += [
                Measure("a", rec, basis="theta", theta=float(theta)),
                PauliX(names[i], Affine(-1, rec)),
                PhaseR("a", float(theta)),
                Fourier("a", inverse=True),
                PauliX("a", Affine(-1, rec)),
                Fourier("a"),
            ]
        else:
            raise ValueError(f"unknown instruction {instr!r}")
    return Circuit(layout, tuple(ops))


def adqc_direct_circuit(n_qubits: int, program) -> Circuit:
    """The same program as plain register gates, for cross-checking."""
    names = [f"q{i}" for i in range(n_qubits)]
    layout = RegisterLayout(tuple((q, 2) for q in names))
    ops: list[GateOp] = []
    for instr in program:
        if instr[0] == "entangle":
            _, i, j = instr
            ops += [
                ControlledU(names[i], names[j], GateSpec("Z", power=1)),
                Fourier(names[i]),
                Fourier(names[j]),
            ]
        elif instr[0] == "local":
            _, i, theta = instr
            ops += [PhaseR(names[i], float(theta)), Fourier(names[i])]
        else:
            raise ValueError(f"unknown instruction {instr!r}")
    return Circuit(layout, tuple(ops))


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------


def format_complex(z: complex) -> str:
    re = z.real + 0.0
    im = z.imag + 0.0
    return f"{re:.9g}{im:+.9g}i"


def format_matrix(m: np.ndarray) -> str:
    return "\n".join(
        "\t".join(format_complex(z) for z in row) for row in np.asarray(m)
    )


def _prep_label(state: np.ndarray) -> str:
    d = len(state)
    for k in range(d):
        if abs(abs(state[k]) - 1.0) < 1e-12:
            return f"|{k}>"
    for k in range(d):
        if abs(abs(np.vdot(algebra.conjugate_state(d, k), state)) - 1.0) < 1e-12:
            return f"|+_{k}>"
    return "custom"


def format_report(report: ConstructionReport) -> str:
    """Stable line-oriented rendering; identical inputs give identical text."""
    layout = report.circuit.layout
    lines = [
        f"scheme: {report.scheme}",
        "wires: " + " ".join(f"{n}:{d}" for n, d in layout.wires),
        "register: " + " ".join(report.register_wires),
        f"ancilla: {report.ancilla_wire}",
        f"ancilla preparation: {_prep_label(report.ancilla_state)}",
        f"interactions: {report.interaction_count}",
    ]
    if report.baseline_interactions is not None:
        lines.append(f"pairwise baseline: {report.baseline_interactions}")
    if report.corrections:
        lines.append("corrections:")
        for record, op in report.corrections:
            lines.append(f"  {record}: {describe_op(op)}")
    else:
        lines.append("corrections: none")
    for note in report.notes:
        lines.append(f"note: {note}")
    if report.verified and report.fidelity is not None:
        lines.append(f"fidelity: {report.fidelity:.12g}")
    else:
        lines.append("fidelity: unverified")
    lines.append("target:")
    lines.append(format_matrix(report.target))
    return "\n".join(lines) + "\n"


def preparation_ops(wire: str, d: int, state: np.ndarray) -> list[GateOp]:
    """Ops preparing the given ancilla state from |0>.

    Recognises computational basis states and conjugate basis states, which
    covers every scheme here.
    """
    state = np.asarray(state, dtype=complex)
    for k in range(d):
        if abs(abs(state[k]) - 1.0) < 1e-12:
            return [] if k == 0 else [PauliX(wire, k)]
    for k in range(d):
        if abs(abs(np.vdot(algebra.conjugate_state(d, k), state)) - 1.0) < 1e-12:
            ops: list[GateOp] = [] if k == 0 else [PauliX(wire, k)]
            ops.append(Fourier(wire))
            return ops
    raise ValueError("ancilla preparation is not a basis or conjugate state")


def standalone_circuit(report: ConstructionReport) -> Circuit:
    """The report's circuit with ancilla preparation prepended, runnable
    from the all-zeros state (circuit files carry no initial state)."""
    layout = report.circuit.layout
    prep = preparation_ops(
        report.ancilla_wire, layout.dim(report.ancilla_wire), report.ancilla_state
    )
    return Circuit(layout, tuple(prep) + report.circuit.ops)
