"""Independent reference implementations used as test oracles.

Everything here is deliberately written the dumb way (python loops, dense
matrices, central differences) and never calls the code paths it checks.
"""

from __future__ import annotations

import math

import numpy as np

from qtextgen.numerics import ComputationRecord, Tensor, cross_entropy

# ---------------------------------------------------------------------------
# gradient checking
# ---------------------------------------------------------------------------

FD_STEP = 1e-5


def rel_err(a: float, b: float) -> float:
    """Relative error with a unit floor so near-zero gradients compare absolutely."""
    return abs(a - b) / max(1.0, abs(a), abs(b))


def finite_diff_grad(f, x: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    g = np.zeros_like(x, dtype=np.float64)
    flat_x = x.reshape(-1)
    flat_g = g.reshape(-1)
    for i in range(flat_x.size):
        old = flat_x[i]
        flat_x[i] = old + h
        fp = f()
        flat_x[i] = old - h
        fm = f()
        flat_x[i] = old
        flat_g[i] = (fp - fm) / (2.0 * h)
    return g


def op_grad_check(fn, arrays, h: float = FD_STEP, seed: int = 0) -> float:
    """Max relative error between taped and finite-difference gradients.

    ``fn`` maps Tensors to one Tensor; the scalar under test is a fixed
    random weighting of the output so every output entry matters.
    """
    rng = np.random.default_rng(seed)
    tensors = [Tensor(a) for a in arrays]
    probe = fn(*tensors)
    w = rng.uniform(-1.0, 1.0, probe.shape)

    tensors = [Tensor(a) for a in arrays]
    with ComputationRecord() as rec:
        loss = (fn(*tensors) * Tensor(w)).sum()
        rec.backward(loss)

    def value():
        return float((fn(*tensors).data * w).sum())

    worst = 0.0
    for t in tensors:
        fd = finite_diff_grad(value, t.data, h)
        analytic = t.grad if t.grad is not None else np.zeros_like(t.data)
        for a, b in zip(analytic.reshape(-1), fd.reshape(-1)):
            worst = max(worst, rel_err(a, b))
    return worst


def model_loss_value(model, ids, targets) -> float:
    return cross_entropy(model.logits(ids), targets).item()


def model_grad_check(model, ids, targets, h: float = FD_STEP, sample_per_param: int | None = None,
                     seed: int = 0) -> float:
    """Analytic loss gradients of every parameter vs central finite differences."""
    with ComputationRecord() as rec:
        loss = cross_entropy(model.logits(ids), targets)
        rec.backward(loss)
    grads = {name: (t.grad.copy() if t.grad is not None else np.zeros_like(t.data))
             for name, t in model.parameters().items()}
    for t in model.parameters().values():
        t.grad = None
    rng = np.random.default_rng(seed)
    worst = 0.0
    for name, t in model.parameters().items():
        flat = t.data.reshape(-1)
        gflat = grads[name].reshape(-1)
        if sample_per_param is None or flat.size <= sample_per_param:
            indices = range(flat.size)
        else:
            indices = rng.choice(flat.size, size=sample_per_param, replace=False)
        for i in indices:
            old = flat[i]
            flat[i] = old + h
            fp = model_loss_value(model, ids, targets)
            flat[i] = old - h
            fm = model_loss_value(model, ids, targets)
            flat[i] = old
            worst = max(worst, rel_err(gflat[i], (fp - fm) / (2.0 * h)))
    return worst


# ---------------------------------------------------------------------------
# dense-matrix circuit oracle
# ---------------------------------------------------------------------------

_I2 = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_P0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
_P1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)


def _rot(axis: str, theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if axis == "y":
        return np.array([[c, -s], [s, c]])
    return np.array([[np.exp(-1j * theta / 2.0), 0], [0, np.exp(1j * theta / 2.0)]])


def _chain(n: int, placed: dict) -> np.ndarray:
    m = np.eye(1, dtype=np.complex128)
    for q in range(n):
        m = np.kron(m, placed.get(q, _I2))
    return m


def gate_matrix(gate, theta, n: int) -> np.ndarray:
    """Full 2^n unitary of one gate (qubit 0 = most significant bit)."""
    if gate.kind == "cnot":
        return _chain(n, {gate.control: _P0}) + _chain(n, {gate.control: _P1, gate.target: _X})
    return _chain(n, {gate.target: _rot(gate.kind[1], theta)})


def dense_unitary(spec, params: np.ndarray) -> np.ndarray:
    u = np.eye(2 ** spec.n_qubits, dtype=np.complex128)
    for gate in spec.gates:
        theta = params[gate.param_slot] if gate.param_slot is not None else None
        u = gate_matrix(gate, theta, spec.n_qubits) @ u
    return u


def random_circuit(rng: np.random.Generator, n_qubits: int, n_gates: int = 12):
    """Arbitrary rotation/CNOT circuit with contiguous parameter slots."""
    from qtextgen.qsim import CircuitSpec, GateOp

    gates, slot = [], 0
    for _ in range(n_gates):
        kind = rng.choice(["rx", "ry", "rz", "cnot"])
        if kind == "cnot" and n_qubits >= 2:
            control = int(rng.integers(n_qubits))
            target = (control + 1 + int(rng.integers(n_qubits - 1))) % n_qubits
            gates.append(GateOp("cnot", target, control=control))
        else:
            if kind == "cnot":
                kind = "ry"
            gates.append(GateOp(str(kind), int(rng.integers(n_qubits)), param_slot=slot))
            slot += 1
    return CircuitSpec(n_qubits, tuple(gates)), slot


# ---------------------------------------------------------------------------
# scalar-loop attention oracle
# ---------------------------------------------------------------------------

def qksan_head_reference(x: np.ndarray, head, causal: bool = True, eps: float = 1e-6) -> np.ndarray:
    """Per-entry reimplementation of the kernel-attention head with loops."""
    def affine(w, b):
        return x @ w + b[None, :]

    q = affine(head.w_q.data, head.b_q.data)
    k = affine(head.w_k.data, head.b_k.data)
    v = affine(head.w_v.data, head.b_v.data)
    n, dh = q.shape
    dq = head.omega.data.shape[0]
    sigma = math.exp(float(head.log_sigma.data))

    def phi(z):
        out = np.zeros((z.shape[0], dq))
        for i in range(z.shape[0]):
            envelope = math.exp(-sum((z[i, j] - head.mu.data[j]) ** 2 for j in range(dh)) / (2.0 * sigma ** 2))
            for f in range(dq):
                phase = sum(z[i, j] * head.omega.data[f, j] for j in range(dh)) + head.b_phase.data[f]
                out[i, f] = envelope * math.cos(phase)
        return out

    phi_q, phi_k, phi_v = phi(q), phi(k), phi(v)
    scores = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            s = sum(q[i, t] * k[j, t] for t in range(dh)) / math.sqrt(dh)
            gamma = sum(phi_q[i, f] * phi_k[j, f] for f in range(dq))
            scores[i, j] = s + math.log(max(gamma, 0.0) + eps)
    weights = np.zeros((n, n))
    for i in range(n):
        limit = i + 1 if causal else n
        row = scores[i, :limit]
        e = np.exp(row - row.max())
        weights[i, :limit] = e / e.sum()
    gated = np.zeros((n, dh))
    for i in range(n):
        for j in range(dh):
            gate_sig = 1.0 / (1.0 + math.exp(-(sum(phi_v[i, f] * head.u_v.data[f, j] for f in range(dq))
                                               + head.c_v.data[j])))
            gate_cos = math.cos(sum(v[i, t] * head.w_omega.data[j, t] for t in range(dh)) + head.b_omega.data[j])
            gated[i, j] = v[i, j] * gate_sig * gate_cos
    return weights @ gated
