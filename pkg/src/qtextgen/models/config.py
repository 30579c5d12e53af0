"""Architecture selection and hyperparameters for all five model families."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

ARCHITECTURES = ("transformer", "mlp", "qksan", "qasa", "qrwkv")

DISPLAY_NAMES = {
    "transformer": "Transformer",
    "mlp": "MLP",
    "qksan": "QKSAN",
    "qasa": "QASA",
    "qrwkv": "QRWKV",
}

__all__ = ["ARCHITECTURES", "DISPLAY_NAMES", "ModelConfig", "default_config"]


@dataclass(frozen=True)
class ModelConfig:
    """All hyperparameters of one model instance.

    Desk-scale defaults keep every statevector at 16 amplitudes or fewer and
    full training runs under minutes.
    """

    arch: str
    vocab_size: int
    d_model: int = 32
    n_heads: int = 4
    d_ff: int = 64
    n_blocks: int = 2
    quantum_features: int = 16   # feature-map width per QKSAN head
    circuit_layers: int = 2      # RY/CNOT ansatz depth (QASA)
    qrwkv_qubits: int = 4
    max_seq_len: int = 20
    mlp_window: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.arch not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.arch!r}; choose from {ARCHITECTURES}")
        if self.vocab_size < 5:
            raise ValueError("vocabulary must cover the four reserved ids plus content")
        if self.d_model % self.n_heads != 0:
            raise ValueError(f"d_model={self.d_model} not divisible by n_heads={self.n_heads}")
        if self.d_model % 2 != 0:
            raise ValueError("d_model must be even for the positional encoding")
        if self.quantum_features < 1:
            raise ValueError("quantum_features must be at least 1")
        if self.head_dim < 2:
            raise ValueError("head width must be at least 2")
        if self.mlp_window < 1:
            raise ValueError("mlp_window must be at least 1")
        if self.max_seq_len < 3:
            raise ValueError("max_seq_len must fit at least one token plus markers")

    @property
    def head_dim(self) -> int:
        return self.d_model // self.n_heads

    @property
    def qasa_qubits(self) -> int:
        # smallest register whose amplitude count covers one head-width vector
        return max(2, math.ceil(math.log2(self.head_dim)))

    def with_overrides(self, **kwargs) -> "ModelConfig":
        return replace(self, **kwargs)


def default_config(arch: str, vocab_size: int, max_seq_len: int = 20, seed: int = 0, **overrides) -> ModelConfig:
    return ModelConfig(arch=arch, vocab_size=vocab_size, max_seq_len=max_seq_len, seed=seed).with_overrides(**overrides)
