"""Command-line front end.

Subcommands: run (execute a circuit file with a seeded stream), unitary
(dump the dense matrix of a measurement-free circuit), build (emit a named
construction as a circuit file plus report), verify (machine-check a
construction against the brute-force oracle) and counts (interaction
totals versus the pairwise baseline).

Exit codes: 0 success, 1 parse error, 2 precondition violation,
3 verification failure, 4 size cap exceeded.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import constructions, fileio, oracle
from .engine import GateSpec, SizeCapError, init_register, run, shot_seed, unindex
from .fileio import ParseError


def parse_gatespec(text: str) -> GateSpec:
    """Gate spec shorthand: X, X:2, Z, Z:-1, F, Finv, H, R:0.7."""
    name, _, param = text.partition(":")
    name = name.strip()
    if name in ("X", "Z"):
        return GateSpec(name, power=int(param) if param else 1)
    if name in ("F", "H"):
        return GateSpec("F")
    if name == "Finv":
        return GateSpec("F", inverse=True)
    if name == "R":
        if not param:
            raise ValueError("R needs an angle, e.g. R:0.7")
        return GateSpec("R", theta=float(param))
    raise ValueError(f"unknown gate {text!r} (use X, Z, F, Finv, H or R:theta)")


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def _range(text: str) -> list[int]:
    lo, sep, hi = text.partition("..")
    if sep:
        return list(range(int(lo), int(hi) + 1))
    return [int(lo)]


def build_scheme(scheme: str, ns: argparse.Namespace) -> constructions.ConstructionReport:
    da = ns.da if ns.da is not None else 2
    if scheme == "geometric":
        return constructions.geometric_phase_circuit(ns.d1, ns.d2, da, ns.p1, ns.p2)
    if scheme == "measured":
        return constructions.measured_phase_circuit(ns.d1, ns.d2, da, ns.p1, ns.p2)
    if scheme == "batch":
        cp = _int_list(ns.control_powers) if ns.control_powers else [1] * ns.n
        tp = _int_list(ns.target_powers) if ns.target_powers else [1] * ns.m
        cd = _int_list(ns.control_dims) if ns.control_dims else None
        td = _int_list(ns.target_dims) if ns.target_dims else None
        return constructions.batch_rotation_circuit(cp, tp, da, cd, td)
    if scheme == "toffoli":
        da = ns.da if ns.da is not None else ns.n + 1
        return constructions.toffoli_circuit(ns.n, da, parse_gatespec(ns.u))
    if scheme == "adqc-entangle":
        return constructions.adqc_entangle_circuit(ns.d, ns.variant)
    if scheme == "adqc-local":
        return constructions.adqc_local_circuit(ns.theta or 0.0)
    if scheme == "swapcz":
        return constructions.swapcz_entangle_circuit(ns.d, ns.theta)
    if scheme == "swapcz-local":
        return constructions.swapcz_local_circuit(ns.d, parse_gatespec(ns.u), ns.theta)
    if scheme == "minimal":
        theta = ns.theta if ns.theta is not None else np.pi / 4
        return constructions.minimal_control_circuit(ns.prep, parse_gatespec(ns.u), theta)
    raise ValueError(f"unknown scheme {scheme!r}")


def _add_scheme_args(p: argparse.ArgumentParser):
    p.add_argument("scheme", choices=constructions.SCHEMES)
    p.add_argument("--d1", type=int, default=2)
    p.add_argument("--d2", type=int, default=2)
    p.add_argument("--da", type=int, default=None)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--p1", type=int, default=1)
    p.add_argument("--p2", type=int, default=1)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--u", default="X", help="gate spec, e.g. X, H, R:0.7")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--prep", type=int, default=0, choices=(0, 1))
    p.add_argument("--variant", default="main", choices=("main", "caption"))
    p.add_argument("--control-powers", default=None, help="e.g. 1,2")
    p.add_argument("--target-powers", default=None)
    p.add_argument("--control-dims", default=None)
    p.add_argument("--target-dims", default=None)


def _ket(labels) -> str:
    return "|" + ",".join(str(q) for q in labels) + ">"


def _cmd_run(ns) -> int:
    circuit = fileio.load_circuit(ns.file)
    initial = init_register(circuit.layout, [0] * len(circuit.layout.dims))
    for shot in range(ns.shots):
        final, records = run(circuit, initial, shot_seed(ns.seed, shot))
        rec = " ".join(f"{k}={v}" for k, v in records.items()) or "(no records)"
        print(f"shot {shot}: {rec}")
        order = np.argsort(-np.abs(final.amps), kind="stable")[: ns.top]
        print(f"final state (top {ns.top}):")
        for idx in order:
            amp = final.amps[idx]
            if abs(amp) < 1e-12:
                continue
            labels = unindex(circuit.layout, int(idx))
            print(f"  {_ket(labels)} {constructions.format_complex(amp)}")
    return 0


def _cmd_unitary(ns) -> int:
    circuit = fileio.load_circuit(ns.file)
    if circuit.has_measurement():
        raise ValueError("unitary requires a measurement-free circuit")
    print(constructions.format_matrix(oracle.circuit_unitary(circuit)))
    return 0


def _cmd_build(ns) -> int:
    report = build_scheme(ns.scheme, ns)
    circuit_path = ns.circuit or f"{ns.scheme}.circuit.json"
    report_path = ns.out or f"{ns.scheme}.report.txt"
    fileio.dump_circuit(constructions.standalone_circuit(report), circuit_path)
    text = constructions.format_report(report)
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(text, end="")
    print(f"wrote {circuit_path} and {report_path}", file=sys.stderr)
    return 0


def _cmd_verify(ns) -> int:
    report = build_scheme(ns.scheme, ns)
    try:
        verdict = oracle.verify_construction(report, ns.tol)
    except oracle.AncillaEntangledError as exc:
        print(f"verification: FAIL (ancilla entangled: {exc})")
        return 3
    report = report.with_verdict(verdict)
    print(constructions.format_report(report), end="")
    status = "PASS" if verdict.passed else "FAIL"
    print(f"verification: {status} (fidelity {verdict.fidelity:.12g}, "
          f"tolerance {verdict.tolerance:g})")
    return 0 if verdict.passed else 3


def _cmd_counts(ns) -> int:
    if ns.scheme == "batch":
        for n in _range(ns.n):
            for m in _range(ns.m):
                for da in _range(ns.da or "2"):
                    r = constructions.batch_rotation_circuit([1] * n, [1] * m, da)
                    print(f"batch N={n} M={m} d_a={da}: interactions: "
                          f"{r.interaction_count}; pairwise baseline: "
                          f"{r.baseline_interactions}")
        return 0
    if ns.scheme == "toffoli":
        for n in _range(ns.n):
            da_range = _range(ns.da) if ns.da else [n + 1]
            for da in da_range:
                r = constructions.toffoli_circuit(n, da, GateSpec("X"))
                print(f"toffoli N={n} d_a={da}: interactions: {r.interaction_count}")
        return 0
    fixed = argparse.Namespace(**vars(ns))
    fixed.n, fixed.m = 2, 2
    fixed.da = int(ns.da.split("..")[0]) if ns.da else 2
    report = build_scheme(ns.scheme, fixed)
    line = f"{ns.scheme}: interactions: {report.interaction_count}"
    if report.baseline_interactions is not None:
        line += f"; pairwise baseline: {report.baseline_interactions}"
    print(line)
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quditbus",
        description="mixed-dimension circuit simulator and ancilla gate builder",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a circuit file")
    p.add_argument("file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shots", type=int, default=1)
    p.add_argument("--top", type=int, default=8)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("unitary", help="dump the dense matrix of a circuit")
    p.add_argument("file")
    p.set_defaults(func=_cmd_unitary)

    p = sub.add_parser("build", help="emit a construction circuit and report")
    _add_scheme_args(p)
    p.add_argument("--out", default=None, help="report path")
    p.add_argument("--circuit", default=None, help="circuit file path")
    p.set_defaults(func=_cmd_build)

    p = sub.add_parser("verify", help="oracle-check a construction")
    _add_scheme_args(p)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("counts", help="interaction totals and baselines")
    p.add_argument("scheme", choices=constructions.SCHEMES)
    p.add_argument("--n", default="2", help="count or range, e.g. 2..4")
    p.add_argument("--m", default="2")
    p.add_argument("--da", default=None)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--d1", type=int, default=2)
    p.add_argument("--d2", type=int, default=2)
    p.add_argument("--p1", type=int, default=1)
    p.add_argument("--p2", type=int, default=1)
    p.add_argument("--u", default="X")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--prep", type=int, default=0, choices=(0, 1))
    p.add_argument("--variant", default="main", choices=("main", "caption"))
    p.set_defaults(func=_cmd_counts)
    return parser


def main(argv=None) -> int:
    ns = make_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except SizeCapError as exc:
        print(f"size cap: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
