"""Circuit file format: a single JSON document.

Top-level fields: `wires` (array of {"name", "dim"}), `ops` (array of
tagged op objects, tag field `gate`), optional `records` declaration.
Power and theta expressions are either numbers or {"a": number,
"m": record-name, "b": number}. Field names are case-sensitive.

Gate tags: X, Z, F, Finv, R, CU, C0U, SUM, SWAP, MEASURE, plus two
extensions emitted for the swap-interaction models: SWAPCR (the fixed
SWAP * CR(theta) interaction, optionally with a folded-in local gate) and
U (an arbitrary named or raw local unitary).
"""

from __future__ import annotations

import json

import numpy as np

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
    Sum,
    Swap,
    SwapCR,
)


class ParseError(Exception):
    """Malformed circuit document; the message carries the offending path."""


def _fail(path: str, msg: str):
    raise ParseError(f"{path}: {msg}")


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------


def _expr_json(value):
    if isinstance(value, Affine):
        return {"a": value.a, "m": value.record, "b": value.b}
    return value


def _uspec_json(u: GateSpec) -> dict:
    if u.kind in ("X", "Z"):
        return {"kind": u.kind, "power": _expr_json(u.power)}
    if u.kind == "F":
        return {"kind": "F", "inverse": bool(u.inverse)}
    if u.kind == "R":
        return {"kind": "R", "theta": _expr_json(u.theta)}
    if u.kind == "matrix":
        entries = [[[float(z.real), float(z.imag)] for z in row]
                   for row in u.matrix]
        return {"kind": "matrix", "entries": entries}
    raise ValueError(f"unknown gate spec kind {u.kind!r}")


def _op_json(op: GateOp) -> dict:
    if isinstance(op, PauliX):
        return {"gate": "X", "wire": op.wire, "power": _expr_json(op.power)}
    if isinstance(op, PauliZ):
        return {"gate": "Z", "wire": op.wire, "power": _expr_json(op.power)}
    if isinstance(op, Fourier):
        return {"gate": "Finv" if op.inverse else "F", "wire": op.wire}
    if isinstance(op, PhaseR):
        return {"gate": "R", "wire": op.wire, "theta": _expr_json(op.theta)}
    if isinstance(op, LocalU):
        return {"gate": "U", "wire": op.wire, "u": _uspec_json(op.u)}
    if isinstance(op, ControlledU):
        return {
            "gate": "C0U" if op.zero_controlled else "CU",
            "control": op.control,
            "target": op.target,
            "u": _uspec_json(op.u),
        }
    if isinstance(op, Sum):
        return {"gate": "SUM", "control": op.control, "target": op.target}
    if isinstance(op, Swap):
        return {"gate": "SWAP", "a": op.a, "b": op.b}
    if isinstance(op, SwapCR):
        doc = {"gate": "SWAPCR", "a": op.a, "b": op.b,
               "theta": _expr_json(op.theta)}
        if op.local is not None:
            doc["local"] = _uspec_json(op.local)
        return doc
    if isinstance(op, Measure):
        doc = {"gate": "MEASURE", "wire": op.wire, "basis": op.basis,
               "record": op.record}
        if op.basis == "theta":
            doc["theta"] = _expr_json(op.theta)
        return doc
    raise TypeError(f"unknown op {op!r}")


def dumps_circuit(circuit: Circuit) -> str:
    doc = {
        "wires": [{"name": n, "dim": d} for n, d in circuit.layout.wires],
        "ops": [_op_json(op) for op in circuit.ops],
    }
    if circuit.records:
        doc["records"] = list(circuit.records)
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _parse_expr(value, path: str, integer: bool):
    if isinstance(value, bool):
        _fail(path, "expected a number or an affine expression")
    if isinstance(value, (int, float)):
        if integer and float(value) != int(value):
            _fail(path, f"expected an integer power, got {value}")
        return int(value) if integer else float(value)
    if isinstance(value, dict):
        extra = set(value) - {"a", "m", "b"}
        if extra:
            _fail(path, f"unknown expression fields {sorted(extra)}")
        if "m" not in value:
            _fail(path, "affine expression needs a record name field 'm'")
        a = value.get("a", 1)
        b = value.get("b", 0)
        if not isinstance(a, (int, float)) or not isinstance(b, (int, float)):
            _fail(path, "expression coefficients must be numbers")
        if integer and not (float(a).is_integer() and float(b).is_integer()):
            _fail(path, "power expressions need integer coefficients")
        if not isinstance(value["m"], str):
            _fail(path, "record name must be a string")
        return Affine(a, value["m"], b)
    _fail(path, f"expected a number or an affine expression, got {type(value).__name__}")


def _parse_uspec(value, path: str) -> GateSpec:
    if not isinstance(value, dict) or "kind" not in value:
        _fail(path, "gate spec must be an object with a 'kind' field")
    kind = value["kind"]
    if kind in ("X", "Z"):
        return GateSpec(kind, power=_parse_expr(value.get("power", 1),
                                                f"{path}.power", True))
    if kind == "F":
        return GateSpec("F", inverse=bool(value.get("inverse", False)))
    if kind == "R":
        return GateSpec("R", theta=_parse_expr(value.get("theta", 0.0),
                                               f"{path}.theta", False))
    if kind == "matrix":
        entries = value.get("entries")
        if not isinstance(entries, list):
            _fail(path, "matrix spec needs an 'entries' array")
        try:
            m = np.array(
                [[complex(c[0], c[1]) for c in row] for row in entries],
                dtype=complex,
            )
            return GateSpec.from_matrix(m)
        except (TypeError, IndexError, ValueError) as exc:
            _fail(path, f"bad matrix entries: {exc}")
    _fail(path, f"unknown gate spec kind {kind!r}")


def _field(doc: dict, name: str, path: str, typ=str):
    if name not in doc:
        _fail(path, f"missing field {name!r}")
    value = doc[name]
    if not isinstance(value, typ):
        _fail(path, f"field {name!r} must be {typ.__name__}")
    return value


def _parse_op(doc, path: str) -> GateOp:
    if not isinstance(doc, dict):
        _fail(path, "op must be an object")
    gate = _field(doc, "gate", path)
    if gate == "X":
        return PauliX(_field(doc, "wire", path),
                      _parse_expr(doc.get("power", 1), f"{path}.power", True))
    if gate == "Z":
        return PauliZ(_field(doc, "wire", path),
                      _parse_expr(doc.get("power", 1), f"{path}.power", True))
    if gate in ("F", "Finv"):
        return Fourier(_field(doc, "wire", path), inverse=(gate == "Finv"))
    if gate == "R":
        return PhaseR(_field(doc, "wire", path),
                      _parse_expr(doc.get("theta", 0.0), f"{path}.theta", False))
    if gate == "U":
        return LocalU(_field(doc, "wire", path),
                      _parse_uspec(doc.get("u"), f"{path}.u"))
    if gate in ("CU", "C0U"):
        return ControlledU(
            _field(doc, "control", path),
            _field(doc, "target", path),
            _parse_uspec(doc.get("u"), f"{path}.u"),
            zero_controlled=(gate == "C0U"),
        )
    if gate == "SUM":
        return Sum(_field(doc, "control", path), _field(doc, "target", path))
    if gate == "SWAP":
        return Swap(_field(doc, "a", path), _field(doc, "b", path))
    if gate == "SWAPCR":
        local = None
        if "local" in doc:
            local = _parse_uspec(doc["local"], f"{path}.local")
        return SwapCR(
            _field(doc, "a", path), _field(doc, "b", path),
            _parse_expr(doc.get("theta", 0.0), f"{path}.theta", False),
            local=local,
        )
    if gate == "MEASURE":
        basis = doc.get("basis", "computational")
        if basis not in ("computational", "theta"):
            _fail(path, f"unknown measurement basis {basis!r}")
        theta = 0.0
        if basis == "theta":
            theta = _parse_expr(doc.get("theta", 0.0), f"{path}.theta", False)
        return Measure(_field(doc, "wire", path), _field(doc, "record", path),
                       basis=basis, theta=theta)
    _fail(path, f"unknown gate tag {gate!r}")


def loads_circuit(text: str) -> Circuit:
    """Parse and validate a circuit document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        _fail("document", "top level must be an object")
    wires_doc = _field(doc, "wires", "document", list)
    wires = []
    for k, w in enumerate(wires_doc):
        if not isinstance(w, dict):
            _fail(f"wires[{k}]", "wire must be an object")
        name = _field(w, "name", f"wires[{k}]")
        dim = _field(w, "dim", f"wires[{k}]", int)
        wires.append((name, dim))
    ops_doc = _field(doc, "ops", "document", list)
    ops = [_parse_op(o, f"ops[{k}]") for k, o in enumerate(ops_doc)]

    records = None
    if "records" in doc:
        records = doc["records"]
        if (not isinstance(records, list)
                or not all(isinstance(r, str) for r in records)):
            _fail("records", "must be an array of record names")
        records = tuple(records)
    try:
        return Circuit(RegisterLayout(tuple(wires)), tuple(ops), records)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def load_circuit(path: str) -> Circuit:
    with open(path, "r", encoding="utf-8") as fh:
        return loads_circuit(fh.read())


def dump_circuit(circuit: Circuit, path: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_circuit(circuit))
