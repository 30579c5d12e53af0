"""Generation-based evaluation of a trained model on a validation split."""

from __future__ import annotations

import math

from ..corpus import BOS_ID, EOS_ID, Dataset, Subset, tokenize
from ..metrics import MetricsReport, aggregate_report, perplexity, score_sample
from ..models import BaseModel, generate
from ..numerics import Rng

__all__ = ["evaluate_model", "prompt_tokens"]


def prompt_tokens(reference_words: list[str]) -> list[str]:
    """The leading quarter of the reference (at least one word)."""
    return reference_words[: max(1, math.ceil(len(reference_words) * 0.25))]


def evaluate_model(model: BaseModel, val_set: Subset, dataset: Dataset,
                   decode: str = "greedy", temperature: float = 1.0,
                   rng: Rng | None = None) -> MetricsReport:
    """Perplexity on the split plus prompted-generation scores per sample.

    Each validation sample contributes one generation: prompt it with its
    leading quarter, decode up to the dataset's maximum length, and score
    the output against the full reference.
    """
    ppl = perplexity(model, val_set.sequences)
    scored = []
    for text in val_set.texts:
        words = tokenize(text)
        prompt = prompt_tokens(words)
        prompt_ids = [BOS_ID, *val_set.vocab.encode_tokens(prompt)]
        max_new = max(0, dataset.max_words - len(prompt))
        out_ids = generate(model, prompt_ids, max_new=max_new, mode=decode,
                           temperature=temperature, rng=rng, eos_id=EOS_ID)
        out_words = val_set.vocab.decode_tokens(out_ids)
        scored.append(score_sample(prompt, words, out_words))
    return aggregate_report(model.display_name, dataset.name, ppl, scored)
