"""Minimal dense tensor algebra with reverse-mode differentiation."""

from .tensor import (
    ACTIVATIONS,
    ComputationRecord,
    Tensor,
    activate,
    active_record,
    concat,
    cos,
    cross_entropy,
    embedding_lookup,
    exp,
    gelu,
    interleave_columns,
    layer_norm,
    log,
    masked_softmax_rows,
    matmul,
    record_op,
    relu,
    sigmoid,
    sin,
    stack_rows,
    transpose,
)
from .init import init_bias, init_circuit_params, init_weight
from .optim import Adam
from .rng import Rng, derive_seed, splitmix64

__all__ = [
    "ACTIVATIONS",
    "Adam",
    "ComputationRecord",
    "Rng",
    "Tensor",
    "activate",
    "active_record",
    "concat",
    "cos",
    "cross_entropy",
    "derive_seed",
    "embedding_lookup",
    "exp",
    "gelu",
    "init_bias",
    "init_circuit_params",
    "init_weight",
    "interleave_columns",
    "layer_norm",
    "log",
    "masked_softmax_rows",
    "matmul",
    "record_op",
    "relu",
    "sigmoid",
    "sin",
    "splitmix64",
    "stack_rows",
    "transpose",
]
