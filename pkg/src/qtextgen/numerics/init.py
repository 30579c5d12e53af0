"""Parameter initialization conventions shared by every model.

Dense weights draw from Uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)), biases
start at zero, and quantum rotation angles from Uniform(0, 2*pi).
"""

from __future__ import annotations

import math

import numpy as np

from .rng import Rng

__all__ = ["init_weight", "init_bias", "init_circuit_params"]


def init_weight(rng: Rng, fan_in: int, shape) -> np.ndarray:
    bound = 1.0 / math.sqrt(fan_in)
    return rng.uniform(-bound, bound, shape)


def init_bias(shape) -> np.ndarray:
    return np.zeros(shape)


def init_circuit_params(rng: Rng, count: int) -> np.ndarray:
    return rng.uniform(0.0, 2.0 * math.pi, (count,))
