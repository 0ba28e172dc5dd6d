"""Gate-level circuit representation, decomposition, scheduling and export.

The intermediate representation is deliberately small: a circuit is a flat
list of :class:`Gate` records over ``n_qubits`` wires.  Gate operands are
stored controls-first, targets-last.  Everything downstream (simulation,
resource accounting, OpenQASM export) consumes this one structure.

Decomposition targets the base set {H, X, RX, RY, RZ, PHASE, CX}.  The
multi-controlled gates reduce through uniformly controlled rotations
(Gray-code multiplexers), which gives exact, ancilla-free networks with
predictable CX budgets:

* ``MCRY`` with k controls costs ``2**k`` CX (one-hot multiplexer),
* ``MCX`` with k controls costs ``2**(k+1) - 2`` CX (Hadamard conjugation
  of a phase network built from uniformly controlled RZ layers),
* ``CCX`` uses the textbook 6-CX / 9-single-qubit T network,
* ``SWAP`` is 3 CX, ``CPHASE`` is 2 CX plus 3 phase gates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Gate",
    "Circuit",
    "ResourceReport",
    "GATE_KINDS",
    "gate",
    "decompose",
    "depth",
    "report",
    "export",
    "parse_qasm",
    "parse_listing",
    "ucry_gates",
    "ucrz_gates",
    "cancel_adjacent_inverses",
    "mcx_cx_cost",
    "mcry_cx_cost",
]

# kind -> (n_controls, n_targets, takes_angle); None means variadic controls
_SIGNATURES = {
    "H": (0, 1, False),
    "X": (0, 1, False),
    "RX": (0, 1, True),
    "RY": (0, 1, True),
    "RZ": (0, 1, True),
    "PHASE": (0, 1, True),
    "CX": (1, 1, False),
    "CPHASE": (1, 1, True),
    "SWAP": (0, 2, False),
    "CCX": (2, 1, False),
    "MCX": (None, 1, False),
    "MCRY": (None, 1, True),
}

GATE_KINDS = frozenset(_SIGNATURES)

_BASE_KINDS = frozenset({"H", "X", "RX", "RY", "RZ", "PHASE", "CX"})
_SINGLE_QUBIT_KINDS = frozenset({"H", "X", "RX", "RY", "RZ", "PHASE"})

# rotations drop below this magnitude are identity for all practical purposes
_ANGLE_EPS = 1e-14


@dataclass(frozen=True)
class Gate:
    """One gate application.  ``qubits`` lists controls first, targets last."""

    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    @property
    def n_controls(self) -> int:
        fixed, targets, _ = _SIGNATURES[self.kind]
        return len(self.qubits) - targets if fixed is None else fixed

    @property
    def targets(self) -> tuple[int, ...]:
        _, n_targets, _ = _SIGNATURES[self.kind]
        return self.qubits[len(self.qubits) - n_targets :]

    @property
    def controls(self) -> tuple[int, ...]:
        _, n_targets, _ = _SIGNATURES[self.kind]
        return self.qubits[: len(self.qubits) - n_targets]


def gate(kind: str, *qubits: int, angle: float | None = None) -> Gate:
    """Validated :class:`Gate` constructor."""
    if kind not in _SIGNATURES:
        raise ValueError(f"unknown gate kind {kind!r}")
    n_ctrl, n_tgt, takes_angle = _SIGNATURES[kind]
    if n_ctrl is None:
        if len(qubits) < 1 + n_tgt:
            raise ValueError(f"{kind} needs at least one control")
    elif len(qubits) != n_ctrl + n_tgt:
        raise ValueError(f"{kind} takes {n_ctrl + n_tgt} operands, got {len(qubits)}")
    if len(set(qubits)) != len(qubits):
        raise ValueError(f"{kind} operands must be distinct, got {qubits}")
    if any(q < 0 for q in qubits):
        raise ValueError("qubit indices must be non-negative")
    if takes_angle:
        if angle is None:
            raise ValueError(f"{kind} requires an angle")
        angle = float(angle)
    elif angle is not None:
        raise ValueError(f"{kind} does not take an angle")
    return Gate(kind, tuple(int(q) for q in qubits), angle)


class Circuit:
    """Ordered gate list on a fixed-width qubit register (qubit 0 = LSB)."""

    def __init__(self, n_qubits: int, gates: list[Gate] | None = None):
        if n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        self.n_qubits = int(n_qubits)
        self.gates: list[Gate] = []
        if gates:
            for g in gates:
                self.append(g)

    def append(self, g: Gate) -> "Circuit":
        if max(g.qubits) >= self.n_qubits:
            raise ValueError(
                f"gate {g.kind} on {g.qubits} exceeds register width {self.n_qubits}"
            )
        self.gates.append(g)
        return self

    def add(self, kind: str, *qubits: int, angle: float | None = None) -> "Circuit":
        return self.append(gate(kind, *qubits, angle=angle))

    def extend(self, gates) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValueError("cannot concatenate circuits of different width")
        return Circuit(self.n_qubits, self.gates + other.gates)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and other.n_qubits == self.n_qubits
            and other.gates == self.gates
        )

    def __repr__(self) -> str:
        return f"Circuit(n_qubits={self.n_qubits}, gates={len(self.gates)})"


@dataclass
class ResourceReport:
    """Costs of a circuit after decomposition to the base gate set."""

    cnot_count: int
    single_qubit_count: int
    depth: int
    stage_breakdown: dict[str, "ResourceReport"] = field(default_factory=dict)

    def __str__(self) -> str:
        lines = [
            f"cnot_count={self.cnot_count} "
            f"single_qubit_count={self.single_qubit_count} depth={self.depth}"
        ]
        for name, sub in self.stage_breakdown.items():
            lines.append(
                f"  {name}: cnot={sub.cnot_count} "
                f"single_qubit={sub.single_qubit_count} depth={sub.depth}"
            )
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Gray-code multiplexers (uniformly controlled rotations)
# ---------------------------------------------------------------------------


def _fwht(v: np.ndarray) -> np.ndarray:
    """In-place-style fast Walsh-Hadamard transform (unnormalised)."""
    out = np.array(v, dtype=float)
    h = 1
    while h < len(out):
        for i in range(0, len(out), 2 * h):
            a = out[i : i + h].copy()
            b = out[i + h : i + 2 * h].copy()
            out[i : i + h] = a + b
            out[i + h : i + 2 * h] = a - b
        h *= 2
    return out


def _multiplexer_angles(pattern_angles: np.ndarray) -> np.ndarray:
    """Map per-control-pattern rotation angles to Gray-walk gate angles.

    Position ``i`` of the walk sees a net sign ``(-1)**<gray(i), pattern>``,
    so the solve is a Walsh-Hadamard transform followed by the Gray-code
    permutation.
    """
    k = int(np.log2(len(pattern_angles)))
    xi = _fwht(pattern_angles) / len(pattern_angles)
    idx = np.arange(2**k)
    return xi[idx ^ (idx >> 1)]


def _ucr_gates(kind: str, controls, target: int, pattern_angles) -> list[Gate]:
    controls = tuple(controls)
    theta = np.asarray(pattern_angles, dtype=float)
    k = len(controls)
    if theta.shape != (2**k,):
        raise ValueError(f"need {2**k} pattern angles for {k} controls")
    if k == 0:
        if abs(theta[0]) < _ANGLE_EPS:
            return []
        return [gate(kind, target, angle=theta[0])]
    phis = _multiplexer_angles(theta)
    gates: list[Gate] = []
    for i in range(2**k):
        if abs(phis[i]) >= _ANGLE_EPS:
            gates.append(gate(kind, target, angle=phis[i]))
        # Gray-code walk: flip the bit that changes between successive codes
        ctrl = controls[_ctz(i + 1)] if i + 1 < 2**k else controls[k - 1]
        gates.append(gate("CX", ctrl, target))
    return gates


def _ctz(x: int) -> int:
    return (x & -x).bit_length() - 1


def ucry_gates(controls, target: int, pattern_angles) -> list[Gate]:
    """Uniformly controlled RY: rotate ``target`` by ``pattern_angles[p]``
    when the control qubits hold bit pattern ``p`` (``controls[j]`` is bit j).

    Emits exactly ``2**k`` CX for k >= 1 controls; zero-angle rotations are
    dropped but the CX ladder is kept intact so counts stay structural.
    """
    return _ucr_gates("RY", controls, target, pattern_angles)


def ucrz_gates(controls, target: int, pattern_angles) -> list[Gate]:
    """Uniformly controlled RZ; same layout and CX budget as :func:`ucry_gates`."""
    return _ucr_gates("RZ", controls, target, pattern_angles)


def _mcphase_gates(theta: float, wires: tuple[int, ...]) -> list[Gate]:
    """Phase ``exp(i*theta)`` applied exactly on the all-ones state of ``wires``.

    Recursive layering: a one-hot uniformly controlled RZ splits the phase
    between target values, and the residual half-angle recurses on the
    controls.  Total cost over j wires is ``2**j - 2`` CX.
    """
    if len(wires) == 1:
        return [gate("PHASE", wires[0], angle=theta)]
    controls, target = wires[:-1], wires[-1]
    one_hot = np.zeros(2 ** len(controls))
    one_hot[-1] = theta
    return ucrz_gates(controls, target, one_hot) + _mcphase_gates(theta / 2.0, controls)


def mcx_cx_cost(k: int) -> int:
    """CX count of the decomposed k-controlled X."""
    if k < 1:
        raise ValueError("MCX needs at least one control")
    return {1: 1, 2: 6}.get(k, 2 ** (k + 1) - 2)


def mcry_cx_cost(k: int) -> int:
    """CX count of the decomposed k-controlled RY."""
    if k < 0:
        raise ValueError("negative control count")
    return 0 if k == 0 else 2**k


# ---------------------------------------------------------------------------
# Decomposition to the base set
# ---------------------------------------------------------------------------


def _decompose_gate(g: Gate) -> list[Gate]:
    if g.kind in _BASE_KINDS:
        return [g]
    if g.kind == "SWAP":
        a, b = g.qubits
        return [gate("CX", a, b), gate("CX", b, a), gate("CX", a, b)]
    if g.kind == "CPHASE":
        a, b = g.qubits
        t = g.angle
        return [
            gate("CX", a, b),
            gate("PHASE", b, angle=-t / 2.0),
            gate("CX", a, b),
            gate("PHASE", a, angle=t / 2.0),
            gate("PHASE", b, angle=t / 2.0),
        ]
    if g.kind == "CCX":
        a, b, t = g.qubits
        q = np.pi / 4.0
        return [
            gate("H", t),
            gate("CX", b, t),
            gate("PHASE", t, angle=-q),
            gate("CX", a, t),
            gate("PHASE", t, angle=q),
            gate("CX", b, t),
            gate("PHASE", t, angle=-q),
            gate("CX", a, t),
            gate("PHASE", b, angle=q),
            gate("PHASE", t, angle=q),
            gate("H", t),
            gate("CX", a, b),
            gate("PHASE", a, angle=q),
            gate("PHASE", b, angle=-q),
            gate("CX", a, b),
        ]
    if g.kind == "MCX":
        controls, target = g.controls, g.targets[0]
        if len(controls) == 1:
            return [gate("CX", controls[0], target)]
        if len(controls) == 2:
            return _decompose_gate(gate("CCX", *controls, target))
        inner = _mcphase_gates(np.pi, controls + (target,))
        return [gate("H", target), *inner, gate("H", target)]
    if g.kind == "MCRY":
        controls, target = g.controls, g.targets[0]
        one_hot = np.zeros(2 ** len(controls))
        one_hot[-1] = g.angle
        return ucry_gates(controls, target, one_hot)
    raise ValueError(f"no decomposition rule for {g.kind}")


def decompose(circuit: Circuit) -> Circuit:
    """Rewrite into the base set {H, X, RX, RY, RZ, PHASE, CX} exactly."""
    out = Circuit(circuit.n_qubits)
    for g in circuit:
        out.extend(_decompose_gate(g))
    return out


def depth(circuit: Circuit) -> int:
    """ASAP-schedule depth with every gate counting one layer.

    Meant for already-decomposed circuits; multi-qubit gates still schedule
    correctly (one layer spanning all their operands) if present.
    """
    frontier = [0] * circuit.n_qubits
    for g in circuit:
        layer = 1 + max(frontier[q] for q in g.qubits)
        for q in g.qubits:
            frontier[q] = layer
    return max(frontier, default=0)


def report(circuit: Circuit, stages: dict[str, Circuit] | None = None) -> ResourceReport:
    """Decompose, then tally CX count, single-qubit count and ASAP depth.

    ``stages`` attaches per-stage sub-reports (each stage scheduled on its
    own); the top-level depth is that of the whole scheduled circuit.
    """
    dec = decompose(circuit)
    cx = sum(1 for g in dec if g.kind == "CX")
    single = sum(1 for g in dec if g.kind in _SINGLE_QUBIT_KINDS)
    rep = ResourceReport(cx, single, depth(dec))
    if stages:
        rep.stage_breakdown = {name: report(sub) for name, sub in stages.items()}
    return rep


# ---------------------------------------------------------------------------
# Peephole cancellation
# ---------------------------------------------------------------------------

_SELF_INVERSE = frozenset({"H", "X", "CX", "SWAP", "CCX"})
_ROTATION_KINDS = frozenset({"RX", "RY", "RZ", "PHASE", "CPHASE", "MCRY"})


def _cancels(a: Gate, b: Gate) -> bool:
    if a.kind != b.kind or a.qubits != b.qubits:
        return False
    if a.kind in _SELF_INVERSE:
        return True
    if a.kind in _ROTATION_KINDS:
        return abs(a.angle + b.angle) < _ANGLE_EPS
    return False


def cancel_adjacent_inverses(circuit: Circuit) -> Circuit:
    """Drop gate pairs that are mutual inverses with nothing on their wires
    in between.  Iterates until no further pair cancels."""
    gates = list(circuit.gates)
    changed = True
    while changed:
        changed = False
        out: list[Gate] = []
        for g in gates:
            j = len(out) - 1
            while j >= 0 and not (set(out[j].qubits) & set(g.qubits)):
                j -= 1
            if j >= 0 and _cancels(out[j], g):
                del out[j]
                changed = True
            else:
                out.append(g)
        gates = out
    return Circuit(circuit.n_qubits, gates)


# ---------------------------------------------------------------------------
# Export / import
# ---------------------------------------------------------------------------

_QASM_NAMES = {
    "H": "h",
    "X": "x",
    "RX": "rx",
    "RY": "ry",
    "RZ": "rz",
    "PHASE": "u1",
    "CX": "cx",
    "CPHASE": "cp",
    "SWAP": "swap",
    "CCX": "ccx",
}
_QASM_KINDS = {v: k for k, v in _QASM_NAMES.items()}


def export(circuit: Circuit, fmt: str = "qasm") -> str:
    """Serialise to OpenQASM 2.0 (subset h,x,rx,ry,rz,u1,cx,cp,swap,ccx) or
    to a line-per-gate debug listing.  Gates outside the QASM subset (MCX,
    MCRY) are decomposed on the way out; CCX is kept as ``ccx``."""
    if fmt == "listing":
        lines = [f"qubits {circuit.n_qubits}"]
        for g in circuit:
            parts = [g.kind, *map(str, g.qubits)]
            if g.angle is not None:
                parts.append(repr(g.angle))
            lines.append(" ".join(parts))
        return "\n".join(lines) + "\n"
    if fmt != "qasm":
        raise ValueError(f"unknown export format {fmt!r}")
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{circuit.n_qubits}];",
    ]
    for g in circuit:
        if g.kind not in _QASM_NAMES:
            for sub in _decompose_gate(g):
                lines.append(_qasm_line(sub))
        else:
            lines.append(_qasm_line(g))
    return "\n".join(lines) + "\n"


def _qasm_line(g: Gate) -> str:
    name = _QASM_NAMES[g.kind]
    if g.angle is not None:
        name += f"({g.angle!r})"
    operands = ",".join(f"q[{q}]" for q in g.qubits)
    return f"{name} {operands};"


def parse_qasm(text: str) -> Circuit:
    """Parse the OpenQASM 2.0 subset produced by :func:`export`."""
    circuit: Circuit | None = None
    for raw in text.splitlines():
        line = raw.split("//")[0].strip()
        if not line:
            continue
        if line.startswith("OPENQASM") or line.startswith("include"):
            continue
        if not line.endswith(";"):
            raise ValueError(f"missing semicolon in {raw!r}")
        line = line[:-1].strip()
        if line.startswith("qreg"):
            n = int(line[line.index("[") + 1 : line.index("]")])
            circuit = Circuit(n)
            continue
        if circuit is None:
            raise ValueError("gate before qreg declaration")
        head, _, operands = line.partition(" ")
        angle = None
        if "(" in head:
            name, arg = head.split("(", 1)
            angle = float(arg.rstrip(")"))
        else:
            name = head
        if name not in _QASM_KINDS:
            raise ValueError(f"unsupported qasm gate {name!r}")
        qubits = []
        for tok in operands.split(","):
            tok = tok.strip()
            qubits.append(int(tok[tok.index("[") + 1 : tok.index("]")]))
        circuit.add(_QASM_KINDS[name], *qubits, angle=angle)
    if circuit is None:
        raise ValueError("no qreg declaration found")
    return circuit


def parse_listing(text: str) -> Circuit:
    """Parse the debug listing produced by ``export(c, fmt="listing")``."""
    circuit: Circuit | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("qubits "):
            circuit = Circuit(int(line.split()[1]))
            continue
        if circuit is None:
            raise ValueError("listing must start with a 'qubits N' line")
        parts = line.split()
        kind = parts[0]
        if kind not in _SIGNATURES:
            raise ValueError(f"unknown gate kind {kind!r} in listing")
        takes_angle = _SIGNATURES[kind][2]
        if takes_angle:
            qubits, angle = parts[1:-1], float(parts[-1])
        else:
            qubits, angle = parts[1:], None
        circuit.add(kind, *(int(q) for q in qubits), angle=angle)
    if circuit is None:
        raise ValueError("empty listing")
    return circuit
