"""Amplitude encoding, circuit execution, Z readout, and differentiable VQC.

The simulator is plain complex linear algebra, so the gradient of the Z
expectations is computed analytically by one adjoint sweep (reverse pass over
the gate list) rather than by shifting each parameter.  The parameter-shift
rule is kept as an independent, slower oracle.
"""

from __future__ import annotations

from functools import cache

import numpy as np

from ..numerics.tensor import Tensor, record_op
from .circuit import ROTATION_KINDS, CircuitSpec, GateOp
from .gates import (
    StateVector,
    apply_single_qubit,
    pauli,
    rotation_matrix,
    z_signs,
)

__all__ = [
    "amplitude_encode",
    "apply_gate",
    "run_circuit",
    "expect_z_all",
    "vqc_expectations",
    "vqc_forward",
    "param_shift_grad",
]

_ZERO_NORM = 1e-12


def amplitude_encode(x: np.ndarray, n_qubits: int) -> StateVector:
    """L2-normalize ``x`` into the first len(x) basis amplitudes.

    A vector with norm below 1e-12 maps to the |0...0> basis state so the
    forward pass stays total (and flat, i.e. zero gradient, at that point).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"amplitude_encode expects a flat vector, got shape {x.shape}")
    dim = 2 ** n_qubits
    if x.size > dim:
        raise ValueError(f"cannot encode {x.size} values into {n_qubits} qubits ({dim} amplitudes)")
    amps = np.zeros(dim, dtype=np.complex128)
    norm = float(np.linalg.norm(x))
    if norm < _ZERO_NORM:
        amps[0] = 1.0
    else:
        amps[: x.size] = x / norm
    return StateVector(n_qubits, amps)


@cache
def _cnot_indices(n: int, control: int, target: int):
    kc, kt = n - 1 - control, n - 1 - target
    idx = np.arange(2 ** n)
    src = idx[((idx >> kc) & 1 == 1) & ((idx >> kt) & 1 == 0)]
    return src, src | (1 << kt)


def _apply_gate_amps(amps: np.ndarray, gate: GateOp, theta: float | None, n: int) -> np.ndarray:
    if gate.kind in ROTATION_KINDS:
        return apply_single_qubit(amps, rotation_matrix(gate.kind[1], theta), gate.target, n)
    # cnot: swap the target-bit pair wherever the control bit is set
    src, dst = _cnot_indices(n, gate.control, gate.target)
    out = amps.copy()
    out[src], out[dst] = amps[dst], amps[src]
    return out


def apply_gate(state: StateVector, gate: GateOp, theta: float | None = None) -> StateVector:
    if gate.kind in ROTATION_KINDS and theta is None:
        raise ValueError(f"{gate.kind} gate needs an angle")
    if not 0 <= gate.target < state.n_qubits or (gate.control is not None and not 0 <= gate.control < state.n_qubits):
        raise IndexError(f"gate qubits out of range for {state.n_qubits}-qubit state")
    amps = _apply_gate_amps(state.amplitudes, gate, theta, state.n_qubits)
    return StateVector(state.n_qubits, amps)


def _check_params(spec: CircuitSpec, params: np.ndarray):
    if params.ndim != 1 or params.size < spec.n_params:
        raise ValueError(f"circuit needs {spec.n_params} parameters, got {params.shape}")


def run_circuit(spec: CircuitSpec, params: np.ndarray, state: StateVector | None = None) -> StateVector:
    """Apply the gate list in order to ``state`` (default |0...0>)."""
    params = np.asarray(params, dtype=np.float64)
    _check_params(spec, params)
    if state is None:
        amps = np.zeros(2 ** spec.n_qubits, dtype=np.complex128)
        amps[0] = 1.0
    else:
        if state.n_qubits != spec.n_qubits:
            raise ValueError(f"state has {state.n_qubits} qubits, circuit wants {spec.n_qubits}")
        amps = state.amplitudes
    for gate in spec.gates:
        theta = params[gate.param_slot] if gate.param_slot is not None else None
        amps = _apply_gate_amps(amps, gate, theta, spec.n_qubits)
    return StateVector(spec.n_qubits, amps)


def expect_z_all(state: StateVector) -> np.ndarray:
    """Per-qubit Z expectations; every entry lies in [-1, 1]."""
    probs = np.abs(state.amplitudes) ** 2
    return z_signs(state.n_qubits) @ probs


def vqc_expectations(spec: CircuitSpec, params: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Non-differentiable fast path: encode, run, measure."""
    return expect_z_all(run_circuit(spec, np.asarray(params, dtype=np.float64), amplitude_encode(x, spec.n_qubits)))


def vqc_forward(spec: CircuitSpec, params: Tensor, x: Tensor) -> Tensor:
    """Differentiable encode -> run -> measure, registered on the record.

    Backward runs one adjoint sweep: with O = sum_k g_k Z_k (diagonal), the
    cotangent state lambda = O psi is pulled back through the daggered gates;
    each rotation contributes Im(lambda^dag G psi) to its angle's gradient and
    2 Re(lambda_0) is the gradient w.r.t. the encoded (normalized) amplitudes.
    """
    n = spec.n_qubits
    pdata = np.asarray(params.data, dtype=np.float64)
    _check_params(spec, pdata)
    xdata = np.asarray(x.data, dtype=np.float64)
    if xdata.ndim != 1:
        raise ValueError(f"vqc_forward expects a flat input vector, got shape {x.shape}")

    encoded = amplitude_encode(xdata, n)
    zero_input = float(np.linalg.norm(xdata)) < _ZERO_NORM
    states = [encoded.amplitudes]
    for gate in spec.gates:
        theta = pdata[gate.param_slot] if gate.param_slot is not None else None
        states.append(_apply_gate_amps(states[-1], gate, theta, n))
    signs = z_signs(n)
    out = Tensor(signs @ (np.abs(states[-1]) ** 2), copy=False)

    def bw(g):
        weights = signs.T @ g
        lam = weights * states[-1]
        grad_params = np.zeros_like(pdata)
        for t in range(len(spec.gates) - 1, -1, -1):
            gate = spec.gates[t]
            if gate.param_slot is not None:
                g_psi = apply_single_qubit(states[t + 1], pauli(gate.kind[1]), gate.target, n)
                grad_params[gate.param_slot] += float(np.imag(np.vdot(lam, g_psi)))
                lam = apply_single_qubit(lam, rotation_matrix(gate.kind[1], -pdata[gate.param_slot]), gate.target, n)
            else:
                lam = _apply_gate_amps(lam, gate, None, n)
        if zero_input:
            grad_x = np.zeros_like(xdata)
        else:
            grad_amps = 2.0 * np.real(lam)[: xdata.size]
            r = float(np.linalg.norm(xdata))
            grad_x = grad_amps / r - xdata * float(grad_amps @ xdata) / r ** 3
        return grad_params, grad_x

    return record_op(out, (params, x), bw)


def param_shift_grad(spec: CircuitSpec, params: np.ndarray, x: np.ndarray, output_index: int) -> np.ndarray:
    """d<Z_k>/d(theta_j) via two shifted runs per parameter.

    Exact for parameters that drive exactly one rotation gate; anything else
    (a slot shared across gates) is rejected.
    """
    params = np.asarray(params, dtype=np.float64)
    _check_params(spec, params)
    usage = {}
    for gate in spec.gates:
        if gate.param_slot is not None:
            usage[gate.param_slot] = usage.get(gate.param_slot, 0) + 1
            if gate.kind not in ROTATION_KINDS:  # pragma: no cover - CircuitSpec forbids this
                raise ValueError(f"param slot {gate.param_slot} feeds a non-rotation gate")
    if any(count != 1 for count in usage.values()):
        raise ValueError("parameter-shift rule requires each slot to drive exactly one rotation")

    grad = np.zeros(spec.n_params)
    for slot in range(spec.n_params):
        plus = params.copy()
        plus[slot] += np.pi / 2.0
        minus = params.copy()
        minus[slot] -= np.pi / 2.0
        f_plus = vqc_expectations(spec, plus, x)[output_index]
        f_minus = vqc_expectations(spec, minus, x)[output_index]
        grad[slot] = (f_plus - f_minus) / 2.0
    return grad
