"""Fixed-window MLP baseline: concatenate the last few token embeddings,
one GELU hidden layer, direct projection to logits.  Causal by construction."""

from __future__ import annotations

import numpy as np

from ..numerics import Tensor, concat, gelu, init_bias, init_weight, matmul
from .common import BaseModel


class MlpModel(BaseModel):
    arch = "mlp"

    def __init__(self, config):
        super().__init__(config)
        d, ff, w = config.d_model, config.d_ff, config.mlp_window
        self._build_embedding()
        self.w_1 = self._param("w_1", init_weight(self.rng, w * d, (w * d, ff)))
        self.b_1 = self._param("b_1", init_bias(ff))
        self.w_2 = self._param("w_2", init_weight(self.rng, ff, (ff, config.vocab_size)))
        self.b_2 = self._param("b_2", init_bias(config.vocab_size))

    def logits(self, token_ids) -> Tensor:
        m = len(token_ids)
        self.check_length(m)
        w, d = self.config.mlp_window, self.config.d_model
        emb = self.embed(token_ids)
        zero_row = Tensor(np.zeros((1, d)))
        rows = []
        for t in range(m):
            window = []
            for offset in range(w - 1, -1, -1):
                j = t - offset
                window.append(emb[j:j + 1, :] if j >= 0 else zero_row)
            rows.append(concat(window, axis=1))
        stacked = concat(rows, axis=0)
        hidden = gelu(matmul(stacked, self.w_1) + self.b_1)
        return matmul(hidden, self.w_2) + self.b_2
