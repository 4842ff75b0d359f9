"""Mixed-dimension register state, circuit representation and execution.

A register is an ordered list of named wires with individual dimensions.
Amplitude indexing is big-endian mixed radix: wire 0 is most significant,
index = sum_k q_k * prod_{j>k} d_j. Gate application contracts the gate
matrix against the wire's amplitude groups (a strided tensor contraction)
rather than building full-register matrices, so a single-wire gate costs
O(d * S) for a state of S amplitudes.

Measurement sampling is driven by a splitmix64 stream mapped to [0, 1) by
53-bit mantissa extraction; runs are bit-reproducible from (circuit,
initial state, seed) alone. Classical feedforward is expressed with affine
expressions a*m + b over previously recorded outcomes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra

AMP_CAP = 2**24

PROB_FLOOR = 1e-15  # branch probabilities below this are treated as zero

_MASK64 = (1 << 64) - 1


class SizeCapError(Exception):
    """Register would exceed the amplitude cap."""


class SplitMix64:
    """splitmix64 generator; next_float() yields 53-bit uniforms in [0, 1)."""

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_u64() >> 11) * 2.0**-53


def shot_seed(seed: int, shot: int) -> int:
    """Seed of an individual shot: seed + shot index, wrapped to 64 bits."""
    return (int(seed) + int(shot)) & _MASK64


# ---------------------------------------------------------------------------
# Register layout and state
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered wires (name, dimension) defining the amplitude index space."""

    wires: tuple[tuple[str, int], ...]

    def __post_init__(self):
        wires = tuple((str(n), algebra.check_dimension(d)) for n, d in self.wires)
        object.__setattr__(self, "wires", wires)
        names = [n for n, _ in wires]
        if len(set(names)) != len(names):
            raise ValueError(f"wire names must be unique, got {names}")
        if not names:
            raise ValueError("layout must contain at least one wire")
        size = 1
        for _, d in wires:
            size *= d
        if size > AMP_CAP:
            raise SizeCapError(f"register size {size} exceeds cap {AMP_CAP}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.wires)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.wires)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    def axis(self, wire: str) -> int:
        for k, (n, _) in enumerate(self.wires):
            if n == wire:
                return k
        raise ValueError(f"unknown wire {wire!r}")

    def dim(self, wire: str) -> int:
        return self.dims[self.axis(wire)]


def amp_index(layout: RegisterLayout, labels) -> int:
    """Mixed-radix amplitude index of a tuple of basis labels."""
    dims = layout.dims
    labels = tuple(int(q) for q in labels)
    if len(labels) != len(dims):
        raise ValueError(f"expected {len(dims)} labels, got {len(labels)}")
    idx = 0
    for q, d in zip(labels, dims):
        if not 0 <= q < d:
            raise ValueError(f"label {q} out of range for dimension {d}")
        idx = idx * d + q
    return idx


def unindex(layout: RegisterLayout, index: int) -> tuple[int, ...]:
    """Inverse of amp_index."""
    dims = layout.dims
    if not 0 <= index < layout.size:
        raise ValueError(f"index {index} out of range")
    labels = []
    for d in reversed(dims):
        index, q = divmod(index, d)
        labels.append(q)
    return tuple(reversed(labels))


@dataclass(frozen=True)
class StateVector:
    """Dense complex amplitudes over a layout."""

    layout: RegisterLayout
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex)
        if amps.shape != (self.layout.size,):
            raise ValueError(
                f"amplitude array of length {amps.shape} does not match "
                f"layout size {self.layout.size}"
            )
        object.__setattr__(self, "amps", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tensor(self) -> np.ndarray:
        return self.amps.reshape(self.layout.dims)


def init_register(layout: RegisterLayout, labels) -> StateVector:
    """Product computational basis state |labels>."""
    amps = np.zeros(layout.size, dtype=complex)
    amps[amp_index(layout, labels)] = 1.0
    return StateVector(layout, amps)


def from_amplitudes(layout: RegisterLayout, amps) -> StateVector:
    """StateVector from a raw amplitude array, normalised."""
    amps = np.asarray(amps, dtype=complex)
    n = np.linalg.norm(amps)
    if n < 1e-12:
        raise ValueError("cannot normalise a zero state")
    return StateVector(layout, amps / n)


# ---------------------------------------------------------------------------
# Feedforward expressions and gate specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Affine:
    """Affine expression a*m + b over a recorded measurement outcome m."""

    a: float
    record: str
    b: float = 0.0

    def resolve(self, records: dict[str, int]) -> float:
        if self.record not in records:
            raise ValueError(f"unresolved record reference {self.record!r}")
        return self.a * records[self.record] + self.b

    def describe(self) -> str:
        s = f"{_num(self.a)}*{self.record}"
        if self.b:
            s += f"{'+' if self.b > 0 else '-'}{_num(abs(self.b))}"
        return s


def _num(x: float) -> str:
    return f"{x:.9g}"


def resolve(value, records: dict[str, int] | None):
    """Resolve a literal or Affine expression against records."""
    if isinstance(value, Affine):
        return value.resolve(records or {})
    return value


def resolve_power(value, records: dict[str, int] | None) -> int:
    p = resolve(value, records)
    if abs(p - round(p)) > 1e-9:
        raise ValueError(f"gate power must resolve to an integer, got {p}")
    return int(round(p))


def expr_records(value) -> tuple[str, ...]:
    return (value.record,) if isinstance(value, Affine) else ()


@dataclass(frozen=True, eq=False)
class GateSpec:
    """Named or raw description of a single-wire unitary.

    kinds: "X"/"Z" (power), "F" (inverse flag), "R" (theta), "matrix".
    """

    kind: str
    power: object = 1
    theta: object = 0.0
    inverse: bool = False
    matrix: np.ndarray | None = None

    @staticmethod
    def from_matrix(m: np.ndarray) -> "GateSpec":
        m = np.asarray(m, dtype=complex)
        if not algebra.is_unitary(m, 1e-8):
            raise ValueError("gate matrix is not unitary within tolerance")
        return GateSpec(kind="matrix", matrix=m)

    def to_matrix(self, dim: int, records: dict[str, int] | None = None) -> np.ndarray:
        if self.kind == "X":
            return algebra.pauli_x(dim, resolve_power(self.power, records))
        if self.kind == "Z":
            return algebra.pauli_z(dim, resolve_power(self.power, records))
        if self.kind == "F":
            return algebra.fourier(dim, inverse=self.inverse)
        if self.kind == "R":
            return algebra.phase_gate(dim, resolve(self.theta, records))
        if self.kind == "matrix":
            if self.matrix.shape[0] != dim:
                raise ValueError(
                    f"gate matrix dimension {self.matrix.shape[0]} does not "
                    f"match wire dimension {dim}"
                )
            return self.matrix
        raise ValueError(f"unknown gate spec kind {self.kind!r}")

    def records(self) -> tuple[str, ...]:
        return expr_records(self.power) + expr_records(self.theta)

    def describe(self) -> str:
        if self.kind in ("X", "Z"):
            p = self.power.describe() if isinstance(self.power, Affine) else _num(self.power)
            return f"{self.kind}({p})"
        if self.kind == "F":
            return "Finv" if self.inverse else "F"
        if self.kind == "R":
            t = self.theta.describe() if isinstance(self.theta, Affine) else _num(self.theta)
            return f"R({t})"
        return "U[matrix]"


# ---------------------------------------------------------------------------
# Gate operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PauliX:
    wire: str
    power: object = 1


@dataclass(frozen=True)
class PauliZ:
    wire: str
    power: object = 1


@dataclass(frozen=True)
class Fourier:
    wire: str
    inverse: bool = False


@dataclass(frozen=True)
class PhaseR:
    wire: str
    theta: object = 0.0


@dataclass(frozen=True, eq=False)
class LocalU:
    """Arbitrary single-wire unitary given by a gate spec."""

    wire: str
    u: GateSpec


@dataclass(frozen=True, eq=False)
class ControlledU:
    """Controlled-u: u^m on the target for control label m.

    With zero_controlled set, u is applied only on the control-0 block and
    the other blocks act as the identity.
    """

    control: str
    target: str
    u: GateSpec
    zero_controlled: bool = False


@dataclass(frozen=True)
class Sum:
    control: str
    target: str


@dataclass(frozen=True)
class Swap:
    a: str
    b: str


@dataclass(frozen=True, eq=False)
class SwapCR:
    """Fixed swap-type interaction SWAP * CR(theta) on wires (a, b).

    An optional local gate is folded into the interaction, acting on wire b
    after the swap. Counts as a single two-wire interaction.
    """

    a: str
    b: str
    theta: object = 0.0
    local: GateSpec | None = None


@dataclass(frozen=True)
class Measure:
    """Projective measurement of one wire.

    basis "computational" projects onto |m>; basis "theta" projects onto
    |theta_m> = R(-theta) F |m>. The outcome is stored under the record name.
    """

    wire: str
    record: str
    basis: str = "computational"
    theta: object = 0.0


GateOp = (
    PauliX | PauliZ | Fourier | PhaseR | LocalU | ControlledU | Sum | Swap
    | SwapCR | Measure
)


def op_wires(op: GateOp) -> tuple[str, ...]:
    if isinstance(op, (PauliX, PauliZ, Fourier, PhaseR, LocalU, Measure)):
        return (op.wire,)
    if isinstance(op, (ControlledU, Sum)):
        return (op.control, op.target)
    if isinstance(op, (Swap, SwapCR)):
        return (op.a, op.b)
    raise TypeError(f"unknown op {op!r}")


def op_reads(op: GateOp) -> tuple[str, ...]:
    """Record names an op's expressions depend on."""
    if isinstance(op, (PauliX, PauliZ)):
        return expr_records(op.power)
    if isinstance(op, PhaseR):
        return expr_records(op.theta)
    if isinstance(op, LocalU):
        return op.u.records()
    if isinstance(op, ControlledU):
        return op.u.records()
    if isinstance(op, SwapCR):
        r = expr_records(op.theta)
        if op.local is not None:
            r += op.local.records()
        return r
    if isinstance(op, Measure):
        return expr_records(op.theta)
    return ()


def describe_op(op: GateOp) -> str:
    """Stable one-line rendering of an op, used in reports."""
    if isinstance(op, PauliX):
        return f"X({_expr(op.power)}) on {op.wire}"
    if isinstance(op, PauliZ):
        return f"Z({_expr(op.power)}) on {op.wire}"
    if isinstance(op, Fourier):
        return f"{'Finv' if op.inverse else 'F'} on {op.wire}"
    if isinstance(op, PhaseR):
        return f"R({_expr(op.theta)}) on {op.wire}"
    if isinstance(op, LocalU):
        return f"{op.u.describe()} on {op.wire}"
    if isinstance(op, ControlledU):
        tag = "C0" if op.zero_controlled else "C"
        return f"{tag}[{op.u.describe()}] {op.control}->{op.target}"
    if isinstance(op, Sum):
        return f"SUM {op.control}->{op.target}"
    if isinstance(op, Swap):
        return f"SWAP {op.a},{op.b}"
    if isinstance(op, SwapCR):
        s = f"SWAPCR({_expr(op.theta)}) {op.a},{op.b}"
        if op.local is not None:
            s += f" then {op.local.describe()} on {op.b}"
        return s
    if isinstance(op, Measure):
        basis = "comp" if op.basis == "computational" else f"theta({_expr(op.theta)})"
        return f"MEASURE[{basis}] {op.wire} -> {op.record}"
    raise TypeError(f"unknown op {op!r}")


def _expr(value) -> str:
    return value.describe() if isinstance(value, Affine) else _num(value)


@dataclass(frozen=True)
class Circuit:
    """Time-ordered ops over a layout; validated on construction.

    records may be passed as an explicit declaration; it must then match
    the measurement ops in order. When omitted it is derived from them.
    """

    layout: RegisterLayout
    ops: tuple[GateOp, ...]
    records: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        declared = _validate_ops(self.layout, self.ops)
        if self.records is None:
            object.__setattr__(self, "records", declared)
        else:
            got = tuple(self.records)
            if got != declared:
                raise ValueError(
                    f"declared records {got} do not match measurements {declared}"
                )
            object.__setattr__(self, "records", got)

    def has_measurement(self) -> bool:
        return any(isinstance(op, Measure) for op in self.ops)


def _validate_ops(layout: RegisterLayout, ops) -> tuple[str, ...]:
    names = set(layout.names)
    written: list[str] = []
    for k, op in enumerate(ops):
        wires = op_wires(op)
        for w in wires:
            if w not in names:
                raise ValueError(f"ops[{k}]: unknown wire {w!r}")
        if len(wires) == 2 and wires[0] == wires[1]:
            raise ValueError(f"ops[{k}]: two-wire op references wire {wires[0]!r} twice")
        if isinstance(op, (Swap, SwapCR)):
            da, db = layout.dim(wires[0]), layout.dim(wires[1])
            if da != db:
                raise ValueError(
                    f"ops[{k}]: swap requires equal dimensions, got {da} and {db}"
                )
        for r in op_reads(op):
            if r not in written:
                raise ValueError(
                    f"ops[{k}]: record {r!r} read before it is measured"
                )
        if isinstance(op, Measure):
            if op.record in written:
                raise ValueError(f"ops[{k}]: record {op.record!r} written twice")
            if op.basis not in ("computational", "theta"):
                raise ValueError(f"ops[{k}]: unknown measurement basis {op.basis!r}")
            written.append(op.record)
    return tuple(written)


# ---------------------------------------------------------------------------
# Gate application
# ---------------------------------------------------------------------------


def op_matrix(op: GateOp, layout: RegisterLayout,
              records: dict[str, int] | None = None) -> np.ndarray:
    """Dense matrix of a non-measurement op over its own wires only."""
    if isinstance(op, PauliX):
        return algebra.pauli_x(layout.dim(op.wire), resolve_power(op.power, records))
    if isinstance(op, PauliZ):
        return algebra.pauli_z(layout.dim(op.wire), resolve_power(op.power, records))
    if isinstance(op, Fourier):
        return algebra.fourier(layout.dim(op.wire), inverse=op.inverse)
    if isinstance(op, PhaseR):
        return algebra.phase_gate(layout.dim(op.wire), resolve(op.theta, records))
    if isinstance(op, LocalU):
        return op.u.to_matrix(layout.dim(op.wire), records)
    if isinstance(op, ControlledU):
        u = op.u.to_matrix(layout.dim(op.target), records)
        if op.zero_controlled:
            return algebra.zero_controlled(layout.dim(op.control), u)
        return algebra.controlled(layout.dim(op.control), u)
    if isinstance(op, Sum):
        return algebra.controlled(
            layout.dim(op.control), algebra.pauli_x(layout.dim(op.target))
        )
    if isinstance(op, (Swap, SwapCR)):
        a, b = op_wires(op)
        if layout.dim(a) != layout.dim(b):
            raise ValueError(
                f"swap requires equal dimensions, got {layout.dim(a)} and "
                f"{layout.dim(b)}"
            )
        if isinstance(op, Swap):
            return algebra.swap_gate(layout.dim(a))
        local = None
        if op.local is not None:
            local = op.local.to_matrix(layout.dim(b), records)
        return algebra.swap_cr(layout.dim(a), resolve(op.theta, records), local)
    raise ValueError(f"op {op!r} has no unitary matrix")


def _apply_single(amps: np.ndarray, dims, axis: int, m: np.ndarray) -> np.ndarray:
    t = amps.reshape(dims)
    out = np.tensordot(m, t, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis).reshape(-1)


def _apply_pair(amps: np.ndarray, dims, ax1: int, ax2: int, m: np.ndarray) -> np.ndarray:
    d1, d2 = dims[ax1], dims[ax2]
    t = amps.reshape(dims)
    m4 = m.reshape(d1, d2, d1, d2)
    out = np.tensordot(m4, t, axes=([2, 3], [ax1, ax2]))
    return np.moveaxis(out, [0, 1], [ax1, ax2]).reshape(-1)


def apply_op(state: StateVector, op: GateOp,
             records: dict[str, int] | None = None) -> StateVector:
    """Apply a non-measurement op; untouched wires act as the identity."""
    if isinstance(op, Measure):
        raise ValueError("apply_op cannot execute a measurement; use measure()")
    layout = state.layout
    m = op_matrix(op, layout, records)
    wires = op_wires(op)
    if len(wires) == 1:
        amps = _apply_single(state.amps, layout.dims, layout.axis(wires[0]), m)
    else:
        amps = _apply_pair(
            state.amps, layout.dims, layout.axis(wires[0]), layout.axis(wires[1]), m
        )
    return StateVector(layout, amps)


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------


def _sample(probs: np.ndarray, rng: SplitMix64) -> int:
    probs = probs.copy()
    probs[probs < PROB_FLOOR] = 0.0
    total = probs.sum()
    if total <= 0:
        raise ValueError("degenerate state: all outcome probabilities vanish")
    probs /= total
    u = rng.next_float()
    cum = np.cumsum(probs)
    m = int(np.searchsorted(cum, u, side="right"))
    if m >= len(probs) or probs[m] == 0.0:
        m = int(np.flatnonzero(probs)[-1])
    return m


def measure(state: StateVector, wire: str, rng: SplitMix64,
            basis: str = "computational", theta: float = 0.0,
            ) -> tuple[int, StateVector]:
    """Projective measurement. Consumes exactly one value from the stream.

    Returns (outcome, collapsed state). The theta basis projects onto
    |theta_m> = R(-theta) F |m>; measurement is performed by rotating into
    the computational frame and back.
    """
    layout = state.layout
    axis = layout.axis(wire)
    d = layout.dims[axis]

    rotated = state
    if basis == "theta":
        v = algebra.phase_gate(d, -theta) @ algebra.fourier(d)
        rotated = StateVector(
            layout, _apply_single(state.amps, layout.dims, axis, v.conj().T)
        )
    elif basis != "computational":
        raise ValueError(f"unknown measurement basis {basis!r}")

    grouped = np.moveaxis(rotated.amps.reshape(layout.dims), axis, 0).reshape(d, -1)
    probs = np.einsum("ij,ij->i", grouped, grouped.conj()).real
    m = _sample(probs, rng)

    collapsed = np.zeros_like(grouped)
    collapsed[m] = grouped[m] / np.linalg.norm(grouped[m])
    amps = np.moveaxis(
        collapsed.reshape((d,) + tuple(np.delete(layout.dims, axis))), 0, axis
    ).reshape(-1)
    if basis == "theta":
        amps = _apply_single(amps, layout.dims, axis, v)
    return m, StateVector(layout, amps)


def outcome_probabilities(state: StateVector, wire: str,
                          basis: str = "computational",
                          theta: float = 0.0) -> np.ndarray:
    """Outcome distribution of a measurement without collapsing."""
    layout = state.layout
    axis = layout.axis(wire)
    d = layout.dims[axis]
    amps = state.amps
    if basis == "theta":
        v = algebra.phase_gate(d, -theta) @ algebra.fourier(d)
        amps = _apply_single(amps, layout.dims, axis, v.conj().T)
    grouped = np.moveaxis(amps.reshape(layout.dims), axis, 0).reshape(d, -1)
    return np.einsum("ij,ij->i", grouped, grouped.conj()).real


def run(circuit: Circuit, initial: StateVector, seed: int,
        ) -> tuple[StateVector, dict[str, int]]:
    """Execute a circuit deterministically from a 64-bit seed.

    Measurement outcomes are recorded by name and substituted into later
    affine expressions. Identical (circuit, initial, seed) triples give
    bit-identical outputs.
    """
    if initial.layout != circuit.layout:
        raise ValueError("initial state layout does not match circuit layout")
    rng = SplitMix64(seed)
    records: dict[str, int] = {}
    state = initial
    for op in circuit.ops:
        if isinstance(op, Measure):
            outcome, state = measure(
                state, op.wire, rng, basis=op.basis,
                theta=float(resolve(op.theta, records)),
            )
            records[op.record] = outcome
        else:
            state = apply_op(state, op, records)
    return state, records


def reduced_purity(state: StateVector, wire: str) -> float:
    """tr(rho^2) of the wire's reduced density matrix; 1 iff unentangled."""
    layout = state.layout
    axis = layout.axis(wire)
    d = layout.dims[axis]
    grouped = np.moveaxis(state.amps.reshape(layout.dims), axis, 0).reshape(d, -1)
    rho = grouped @ grouped.conj().T
    return float(np.sum(np.abs(rho) ** 2).real)


def product_state(layout: RegisterLayout, factors) -> StateVector:
    """State built as the tensor product of one vector per wire."""
    factors = [np.asarray(f, dtype=complex) for f in factors]
    if len(factors) != len(layout.dims):
        raise ValueError(f"expected {len(layout.dims)} factors")
    for f, d in zip(factors, layout.dims):
        if f.shape != (d,):
            raise ValueError(f"factor of shape {f.shape} does not match dimension {d}")
    amps = factors[0]
    for f in factors[1:]:
        amps = np.kron(amps, f)
    return from_amplitudes(layout, amps)
