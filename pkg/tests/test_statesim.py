"""Simulator kernels checked against independently built matrices.

The reference unitaries below are constructed basis state by basis state
from the textbook 2x2 blocks, with explicit little-endian bit twiddling,
sharing no code with the axis-slicing kernels under test.
"""

import math

import numpy as np
import pytest

from hqsp.circuit import Circuit, gate
from hqsp.statesim import (
    MAX_QUBITS,
    CapacityError,
    dump_state_csv,
    equal_up_to_global_phase,
    fidelity,
    load_state_csv,
    simulate,
    trace_distance,
    unitary_of,
)

RNG = np.random.default_rng(2024)


def _mat_h():
    return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def _mat_x():
    return np.array([[0, 1], [1, 0]], dtype=complex)


def _mat_rx(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _mat_ry(t):
    c, s = math.cos(t / 2), math.sin(t / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _mat_rz(t):
    return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])


def _mat_phase(t):
    return np.diag([1.0, np.exp(1j * t)])


def reference_unitary(n: int, g) -> np.ndarray:
    """Build the gate's 2**n unitary by routing each basis state by hand."""
    if g.kind == "SWAP":
        a, b = g.qubits
        dim = 2**n
        u = np.zeros((dim, dim), dtype=complex)
        for j in range(dim):
            ba, bb = (j >> a) & 1, (j >> b) & 1
            k = j & ~(1 << a) & ~(1 << b) | (bb << a) | (ba << b)
            u[k, j] = 1.0
        return u
    blocks = {
        "H": lambda: _mat_h(),
        "X": lambda: _mat_x(),
        "RX": lambda: _mat_rx(g.angle),
        "RY": lambda: _mat_ry(g.angle),
        "RZ": lambda: _mat_rz(g.angle),
        "PHASE": lambda: _mat_phase(g.angle),
        "CX": lambda: _mat_x(),
        "CPHASE": lambda: _mat_phase(g.angle),
        "CCX": lambda: _mat_x(),
        "MCX": lambda: _mat_x(),
        "MCRY": lambda: _mat_ry(g.angle),
    }
    mat = blocks[g.kind]()
    target = g.targets[0]
    controls = g.controls
    dim = 2**n
    u = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        if any(not (j >> c) & 1 for c in controls):
            u[j, j] = 1.0
            continue
        t = (j >> target) & 1
        for t_out in (0, 1):
            k = (j & ~(1 << target)) | (t_out << target)
            u[k, j] += mat[t_out, t]
    return u


GATE_CASES = [
    gate("H", 1),
    gate("X", 2),
    gate("RX", 0, angle=0.7),
    gate("RY", 2, angle=-1.3),
    gate("RZ", 1, angle=2.1),
    gate("PHASE", 0, angle=0.9),
    gate("CX", 2, 0),
    gate("CPHASE", 0, 2, angle=-0.4),
    gate("SWAP", 0, 2),
    gate("CCX", 0, 2, 1),
    gate("MCX", 1, 2, 0),
    gate("MCRY", 0, 1, 2, angle=1.9),
]


@pytest.mark.parametrize("g", GATE_CASES, ids=lambda g: g.kind)
def test_gate_kernel_matches_reference_matrix(g):
    circuit = Circuit(3, [g])
    np.testing.assert_allclose(
        unitary_of(circuit), reference_unitary(3, g), atol=1e-12
    )


def test_simulate_starts_from_all_zeros():
    psi = simulate(Circuit(2))
    np.testing.assert_allclose(psi, [1, 0, 0, 0], atol=0)


def test_simulate_is_little_endian():
    # X on qubit 0 flips the least significant bit: |00> -> |01> = index 1
    psi = simulate(Circuit(2, [gate("X", 0)]))
    assert psi[1] == 1.0
    psi = simulate(Circuit(2, [gate("X", 1)]))
    assert psi[2] == 1.0


def test_simulate_accepts_initial_state():
    init = np.array([0, 1, 0, 0], dtype=complex)
    psi = simulate(Circuit(2, [gate("CX", 0, 1)]), initial=init)
    assert psi[3] == 1.0  # control on qubit 0 set, target qubit 1 flips


def test_simulate_rejects_wrong_initial_length():
    with pytest.raises(ValueError):
        simulate(Circuit(2), initial=np.ones(3, dtype=complex))


def test_simulate_norm_preserved_on_random_circuits():
    kinds = ["H", "X", "RX", "RY", "RZ", "PHASE", "CX", "CPHASE", "SWAP"]
    for _ in range(25):
        n = int(RNG.integers(1, 5))
        circuit = Circuit(n)
        for _ in range(12):
            kind = kinds[int(RNG.integers(0, len(kinds)))]
            takes_angle = kind in ("RX", "RY", "RZ", "PHASE", "CPHASE")
            arity = 2 if kind in ("CX", "CPHASE", "SWAP") else 1
            if arity > n:
                continue
            qubits = RNG.choice(n, size=arity, replace=False)
            circuit.add(
                kind,
                *map(int, qubits),
                angle=float(RNG.uniform(-3, 3)) if takes_angle else None,
            )
        psi = simulate(circuit)
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-12


def test_capacity_cap_enforced():
    with pytest.raises(CapacityError):
        simulate(Circuit(MAX_QUBITS + 1))
    with pytest.raises(CapacityError):
        unitary_of(Circuit(9))


def test_fidelity_extremes():
    a = np.array([1, 0], dtype=complex)
    b = np.array([0, 1], dtype=complex)
    assert fidelity(a, a) == 1.0
    assert fidelity(a, b) == 0.0
    assert abs(fidelity(a, (a + b) / math.sqrt(2)) - 0.5) < 1e-12


def test_fidelity_normalizes_and_rejects_zero():
    a = np.array([3.0, 0.0])
    assert fidelity(a, a) == 1.0
    with pytest.raises(ValueError):
        fidelity(a, np.zeros(2))
    with pytest.raises(ValueError):
        trace_distance(np.zeros(2), a)


def test_trace_distance_matches_fidelity_for_far_states():
    for _ in range(20):
        a = RNG.standard_normal(32) + 1j * RNG.standard_normal(32)
        b = RNG.standard_normal(32) + 1j * RNG.standard_normal(32)
        td = trace_distance(a, b)
        assert abs(td - math.sqrt(1.0 - fidelity(a, b))) < 1e-9


def test_trace_distance_resolves_below_float_fidelity_floor():
    # sqrt(1 - F) computed through fidelity() floors near sqrt(eps); the
    # residual form must resolve identical-up-to-phase states to ~1e-15
    a = RNG.standard_normal(2**12) + 1j * RNG.standard_normal(2**12)
    a /= np.linalg.norm(a)
    assert trace_distance(a, a * np.exp(0.83j)) < 1e-12
    perturbed = a + 1e-11 * RNG.standard_normal(2**12)
    assert trace_distance(a, perturbed) < 1e-9


def test_trace_distance_symmetry_and_range():
    for _ in range(10):
        a = RNG.standard_normal(16) + 1j * RNG.standard_normal(16)
        b = RNG.standard_normal(16) + 1j * RNG.standard_normal(16)
        td = trace_distance(a, b)
        assert 0.0 <= td <= 1.0
        assert abs(td - trace_distance(b, a)) < 1e-12


def test_equal_up_to_global_phase():
    a = np.array([0.6, 0.8j], dtype=complex)
    assert equal_up_to_global_phase(a, a * np.exp(1.2j))
    assert not equal_up_to_global_phase(a, np.array([0.8, 0.6j]))
    assert not equal_up_to_global_phase(a, np.array([0.6, 0.8j, 0.0]))


def test_state_csv_roundtrip(tmp_path):
    state = RNG.standard_normal(8) + 1j * RNG.standard_normal(8)
    path = tmp_path / "state.csv"
    dump_state_csv(state, path)
    loaded = load_state_csv(path)
    np.testing.assert_array_equal(loaded, state.astype(complex))


def test_state_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("idx,re,im\n0,1.0,0.0\n")
    with pytest.raises(ValueError):
        load_state_csv(path)
