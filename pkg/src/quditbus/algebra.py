"""Dimension-generic gate matrices and states for d-level systems.

All builders return dense complex128 numpy arrays. Phases are computed from
exponents reduced modulo d before exponentiation, so integer-power gates are
exact up to one complex exponential evaluation (X(0) is exactly the identity,
Z(d) is exactly the identity, and so on).

Conventions:
    omega(d) = exp(2*pi*i/d), the principal d-th root of unity.
    X(p)|q> = |q+p mod d>          (cyclic shift)
    Z(p)|q> = omega^(q*p)|q>       (clock / phase)
    F|q>    = (1/sqrt(d)) * sum_q' omega^(q*q')|q'>
    R(theta)|q> = exp(i*theta*q)|q>
    Two-system matrices are indexed with the first system most significant:
    basis order |0,0>, |0,1>, ..., |1,0>, ...
"""

from __future__ import annotations

import math

import numpy as np

UNITARITY_TOL = 1e-10


def check_dimension(d: int) -> int:
    """Validate a system dimension; returns it as a plain int."""
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise ValueError(f"dimension must be an integer >= 2, got {d!r}")
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return int(d)


def omega(d: int) -> complex:
    """Principal d-th root of unity exp(2*pi*i/d)."""
    d = check_dimension(d)
    return complex(np.exp(2j * np.pi / d))


def _mod_phases(exponents: np.ndarray, d: int) -> np.ndarray:
    """omega^k for integer exponents, reduced mod d first for exactness."""
    return np.exp(2j * np.pi * (np.asarray(exponents) % d) / d)


def pauli_x(d: int, power: int = 1) -> np.ndarray:
    """Generalized Pauli X^power: the cyclic shift |q> -> |q+power mod d>."""
    d = check_dimension(d)
    return np.roll(np.eye(d, dtype=complex), int(power) % d, axis=0)


def pauli_z(d: int, power: int = 1) -> np.ndarray:
    """Generalized Pauli Z^power: the diagonal diag(omega^(q*power))."""
    d = check_dimension(d)
    return np.diag(_mod_phases(np.arange(d) * (int(power) % d), d))


def fourier(d: int, inverse: bool = False) -> np.ndarray:
    """Fourier gate F[q',q] = omega^(q*q')/sqrt(d); F^dagger if inverse.

    For d=2 this is the Hadamard gate.
    """
    d = check_dimension(d)
    q = np.arange(d)
    f = _mod_phases(np.outer(q, q), d) / math.sqrt(d)
    return f.conj().T if inverse else f


def phase_gate(d: int, theta: float) -> np.ndarray:
    """Phase rotation R(theta) = diag(1, e^(i*theta), e^(2i*theta), ...)."""
    d = check_dimension(d)
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"phase angle must be finite, got {theta}")
    return np.diag(np.exp(1j * theta * np.arange(d)))


def conjugate_state(d: int, q: int) -> np.ndarray:
    """Conjugate basis state F|q> as a length-d unit vector."""
    d = check_dimension(d)
    if not 0 <= q < d:
        raise ValueError(f"basis label {q} out of range for dimension {d}")
    return fourier(d)[:, q].copy()


def is_unitary(m: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    """True if m is square and m^dagger m = I within entrywise tolerance."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    delta = m.conj().T @ m - np.eye(m.shape[0])
    return float(np.max(np.abs(delta))) <= tol


def _require_unitary(u: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise ValueError("matrix is not unitary within tolerance")
    return u


def controlled(d_control: int, u: np.ndarray) -> np.ndarray:
    """Controlled-u over a d_control control: |m>|n> -> |m> u^m |n>.

    Block-diagonal with blocks u^0, u^1, ..., u^(d_control-1). Control and
    target dimensions may differ.
    """
    d_control = check_dimension(d_control)
    u = _require_unitary(u)
    dt = u.shape[0]
    full = np.zeros((d_control * dt, d_control * dt), dtype=complex)
    block = np.eye(dt, dtype=complex)
    for m in range(d_control):
        full[m * dt:(m + 1) * dt, m * dt:(m + 1) * dt] = block
        block = u @ block
    return full


def zero_controlled(d_control: int, u: np.ndarray) -> np.ndarray:
    """Apply u on the target only when the control label is 0.

    All other control blocks act as the identity.
    """
    d_control = check_dimension(d_control)
    u = _require_unitary(u)
    dt = u.shape[0]
    full = np.eye(d_control * dt, dtype=complex)
    full[:dt, :dt] = u
    return full


def sum_gate(d: int) -> np.ndarray:
    """SUM gate |m>|n> -> |m>|m+n mod d>; CNOT for d=2."""
    d = check_dimension(d)
    full = np.zeros((d * d, d * d), dtype=complex)
    for m in range(d):
        for n in range(d):
            full[m * d + (m + n) % d, m * d + n] = 1.0
    return full


def swap_gate(d: int) -> np.ndarray:
    """SWAP gate |m>|n> -> |n>|m> for two systems of equal dimension."""
    d = check_dimension(d)
    full = np.zeros((d * d, d * d), dtype=complex)
    for m in range(d):
        for n in range(d):
            full[n * d + m, m * d + n] = 1.0
    return full


def controlled_phase(d1: int, d2: int, theta: float) -> np.ndarray:
    """CR(theta): the diagonal gate |q1>|q2> -> exp(i*theta*q1*q2)|q1>|q2>."""
    d1 = check_dimension(d1)
    d2 = check_dimension(d2)
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError(f"phase angle must be finite, got {theta}")
    q1 = np.arange(d1)[:, None]
    q2 = np.arange(d2)[None, :]
    return np.diag(np.exp(1j * theta * (q1 * q2)).ravel())


def swap_cr(d: int, theta: float, local: np.ndarray | None = None) -> np.ndarray:
    """Fixed swap-type interaction SWAP * CR(theta) on two d-level systems.

    If local is given, it is a d x d unitary applied to the second system
    after the swap, giving (I (x) local) * SWAP * CR(theta). This single
    two-system gate covers the swap-based interaction models: theta = 2*pi/d
    makes the entangling part a controlled-Z.
    """
    d = check_dimension(d)
    m = swap_gate(d) @ controlled_phase(d, d, theta)
    if local is not None:
        local = _require_unitary(local)
        if local.shape[0] != d:
            raise ValueError(
                f"local gate dimension {local.shape[0]} does not match d={d}"
            )
        m = np.kron(np.eye(d, dtype=complex), local) @ m
    return m
