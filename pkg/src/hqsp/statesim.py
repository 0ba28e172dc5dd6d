"""Dense statevector simulation of the circuit IR.

States are little-endian: qubit 0 is the least significant bit of the basis
index, so ``state[5]`` is the amplitude of |...101>.  All gate kinds of the
IR are applied natively (multi-controlled gates do not need decomposition
first); axis slicing on the ``[2]*n``-shaped view keeps every update
vectorised.  Register width is capped at 24 qubits, which bounds the state
at 256 MiB of complex128.
"""

from __future__ import annotations

import csv
import io
import math

import numpy as np

from .circuit import Circuit

__all__ = [
    "CapacityError",
    "simulate",
    "unitary_of",
    "fidelity",
    "trace_distance",
    "equal_up_to_global_phase",
    "dump_state_csv",
    "load_state_csv",
    "MAX_QUBITS",
    "MAX_UNITARY_QUBITS",
]

MAX_QUBITS = 24
MAX_UNITARY_QUBITS = 8


class CapacityError(Exception):
    """Register too wide for dense simulation."""


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
_X = np.array([[0, 1], [1, 0]], dtype=complex)


def _apply_1q(psi: np.ndarray, n: int, mat: np.ndarray, target: int, controls) -> None:
    """In-place application of a controlled single-qubit matrix."""
    view = psi.reshape([2] * n)
    idx: list = [slice(None)] * n
    for c in controls:
        idx[n - 1 - c] = 1
    ax = n - 1 - target
    i0, i1 = list(idx), list(idx)
    i0[ax], i1[ax] = 0, 1
    i0, i1 = tuple(i0), tuple(i1)
    a, b = view[i0].copy(), view[i1].copy()
    view[i0] = mat[0, 0] * a + mat[0, 1] * b
    view[i1] = mat[1, 0] * a + mat[1, 1] * b


def _apply_diag(psi: np.ndarray, n: int, phases: tuple, target: int, controls) -> None:
    """Diagonal gate: multiply the target's 0/1 slices under the controls."""
    view = psi.reshape([2] * n)
    idx: list = [slice(None)] * n
    for c in controls:
        idx[n - 1 - c] = 1
    ax = n - 1 - target
    for value, phase in enumerate(phases):
        if phase != 1:
            sel = list(idx)
            sel[ax] = value
            view[tuple(sel)] *= phase


def _apply_gate(psi: np.ndarray, n: int, g) -> None:
    kind = g.kind
    if kind == "H":
        _apply_1q(psi, n, _H, g.qubits[0], ())
    elif kind == "X":
        _apply_1q(psi, n, _X, g.qubits[0], ())
    elif kind == "RX":
        _apply_1q(psi, n, _rx(g.angle), g.qubits[0], ())
    elif kind == "RY":
        _apply_1q(psi, n, _ry(g.angle), g.qubits[0], ())
    elif kind == "RZ":
        half = np.exp(0.5j * g.angle)
        _apply_diag(psi, n, (np.conj(half), half), g.qubits[0], ())
    elif kind == "PHASE":
        _apply_diag(psi, n, (1, np.exp(1j * g.angle)), g.qubits[0], ())
    elif kind == "CX":
        _apply_1q(psi, n, _X, g.qubits[1], (g.qubits[0],))
    elif kind == "CPHASE":
        _apply_diag(psi, n, (1, np.exp(1j * g.angle)), g.qubits[1], (g.qubits[0],))
    elif kind == "SWAP":
        a, b = g.qubits
        view = psi.reshape([2] * n)
        np.copyto(view, np.swapaxes(view, n - 1 - a, n - 1 - b).copy())
    elif kind == "CCX":
        _apply_1q(psi, n, _X, g.qubits[2], g.qubits[:2])
    elif kind == "MCX":
        _apply_1q(psi, n, _X, g.targets[0], g.controls)
    elif kind == "MCRY":
        _apply_1q(psi, n, _ry(g.angle), g.targets[0], g.controls)
    else:  # pragma: no cover - the IR validates kinds on construction
        raise ValueError(f"cannot simulate gate kind {kind!r}")


def simulate(circuit: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Run the circuit on ``initial`` (default |0...0>) and return the state."""
    n = circuit.n_qubits
    if n > MAX_QUBITS:
        raise CapacityError(
            f"{n} qubits exceeds the {MAX_QUBITS}-qubit dense-simulation cap"
        )
    if initial is None:
        psi = np.zeros(2**n, dtype=complex)
        psi[0] = 1.0
    else:
        psi = np.asarray(initial, dtype=complex).copy()
        if psi.shape != (2**n,):
            raise ValueError(f"initial state must have length {2**n}")
    for g in circuit:
        _apply_gate(psi, n, g)
    return psi


def unitary_of(circuit: Circuit) -> np.ndarray:
    """Full unitary matrix of the circuit (capped at 8 qubits)."""
    n = circuit.n_qubits
    if n > MAX_UNITARY_QUBITS:
        raise CapacityError(
            f"{n} qubits exceeds the {MAX_UNITARY_QUBITS}-qubit unitary cap"
        )
    dim = 2**n
    u = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        basis = np.zeros(dim, dtype=complex)
        basis[j] = 1.0
        u[:, j] = simulate(circuit, basis)
    return u


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """|<a|b>|^2 with defensive normalisation of both inputs."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("fidelity of a zero vector is undefined")
    overlap = np.vdot(a, b) / (na * nb)
    return min(1.0, float(np.abs(overlap)) ** 2)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Pure-state trace distance sqrt(1 - F).

    Computed from the residual a - <b|a>b, whose squared norm equals 1 - F
    exactly for unit vectors; summing small residuals avoids the
    cancellation that flooring 1 - F at machine epsilon would cause, so
    near-identical states resolve far below sqrt(eps).
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise ValueError("trace distance of a zero vector is undefined")
    a = a / na
    b = b / nb
    r = a - np.vdot(b, a) * b
    return math.sqrt(min(1.0, float(np.real(np.vdot(r, r)))))


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """Elementwise equality after removing one overall phase factor."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != b.shape:
        return False
    k = int(np.argmax(np.abs(a)))
    if np.abs(a[k]) < tol or np.abs(b[k]) < tol:
        return bool(np.allclose(a, b, atol=tol))
    phase = (b[k] / np.abs(b[k])) / (a[k] / np.abs(a[k]))
    return bool(np.allclose(a * phase, b, atol=tol))


def dump_state_csv(state: np.ndarray, path) -> None:
    """Write amplitudes as ``index,real,imaginary`` rows with a header."""
    state = np.asarray(state, dtype=complex)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "real", "imaginary"])
        for i, amp in enumerate(state):
            writer.writerow([i, repr(float(amp.real)), repr(float(amp.imag))])


def load_state_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        return _read_state(fh)


def _read_state(fh: io.TextIOBase) -> np.ndarray:
    reader = csv.reader(fh)
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["index", "real", "imaginary"]:
        raise ValueError("expected header 'index,real,imaginary'")
    entries = {int(row[0]): float(row[1]) + 1j * float(row[2]) for row in reader if row}
    if not entries:
        raise ValueError("empty state file")
    dim = max(entries) + 1
    out = np.zeros(dim, dtype=complex)
    for i, amp in entries.items():
        out[i] = amp
    return out
