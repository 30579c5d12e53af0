"""Circuit descriptions: ordered gate lists with parameter slots.

A parameter slot indexes into an external parameter vector, so one topology
can be run with any number of independent parameter sets (e.g. separate
query/key/value circuits sharing a layout).
"""

from __future__ import annotations

from dataclasses import dataclass

from .gates import MAX_QUBITS

__all__ = ["GateOp", "CircuitSpec", "build_qasa_circuit", "build_qrwkv_circuit"]

ROTATION_KINDS = ("rx", "ry", "rz")


@dataclass(frozen=True)
class GateOp:
    """One gate: a parameterized rotation or a CNOT."""

    kind: str               # rx | ry | rz | cnot
    target: int
    control: int | None = None
    param_slot: int | None = None

    def __post_init__(self):
        if self.kind in ROTATION_KINDS:
            if self.param_slot is None:
                raise ValueError(f"{self.kind} gate requires a param_slot")
            if self.control is not None:
                raise ValueError("rotation gates take no control qubit")
        elif self.kind == "cnot":
            if self.control is None:
                raise ValueError("cnot requires a control qubit")
            if self.control == self.target:
                raise ValueError("cnot control equals target")
            if self.param_slot is not None:
                raise ValueError("cnot takes no parameter")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")


@dataclass(frozen=True)
class CircuitSpec:
    """Gate list over ``n_qubits``; param slots must form 0..n_params-1."""

    n_qubits: int
    gates: tuple[GateOp, ...]

    def __post_init__(self):
        if not 1 <= self.n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in [1, {MAX_QUBITS}], got {self.n_qubits}")
        slots = []
        for g in self.gates:
            if not 0 <= g.target < self.n_qubits:
                raise ValueError(f"gate target {g.target} out of range")
            if g.control is not None:
                if not 0 <= g.control < self.n_qubits:
                    raise ValueError(f"gate control {g.control} out of range")
                if g.control == g.target:
                    raise ValueError("cnot control equals target")
            if g.param_slot is not None:
                slots.append(g.param_slot)
        if sorted(set(slots)) != list(range(len(set(slots)))):
            raise ValueError("param slots must form a contiguous range starting at 0")
        object.__setattr__(self, "gates", tuple(self.gates))

    @property
    def n_params(self) -> int:
        slots = {g.param_slot for g in self.gates if g.param_slot is not None}
        return len(slots)


def build_qasa_circuit(n_qubits: int, layers: int) -> CircuitSpec:
    """Layered ansatz: each layer is RY on every qubit, then a CNOT chain."""
    if n_qubits < 2:
        raise ValueError("need at least 2 qubits for the entangling chain")
    gates, slot = [], 0
    for _ in range(layers):
        for q in range(n_qubits):
            gates.append(GateOp("ry", q, param_slot=slot))
            slot += 1
        for q in range(n_qubits - 1):
            gates.append(GateOp("cnot", q + 1, control=q))
    return CircuitSpec(n_qubits, tuple(gates))


def build_qrwkv_circuit(n_qubits: int) -> CircuitSpec:
    """Three RX columns with two CNOT rings (wraparound entangler) between.

    Column one is conventionally driven with input-derived angles
    (re-uploading); the remaining two columns hold trainable angles.  The
    spec itself is agnostic: all three columns are ordinary param slots.
    """
    if n_qubits < 2:
        raise ValueError("need at least 2 qubits for the entangling ring")
    gates, slot = [], 0

    def rx_column():
        nonlocal slot
        for q in range(n_qubits):
            gates.append(GateOp("rx", q, param_slot=slot))
            slot += 1

    def cnot_ring():
        for q in range(n_qubits):
            gates.append(GateOp("cnot", (q + 1) % n_qubits, control=q))

    rx_column()
    rx_column()
    cnot_ring()
    rx_column()
    cnot_ring()
    return CircuitSpec(n_qubits, tuple(gates))
