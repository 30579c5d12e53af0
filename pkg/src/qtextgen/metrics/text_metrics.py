"""Text-generation quality metrics over word-token lists.

BLEU follows the geometric-mean-of-clipped-precisions form with uniform
weights, no brevity penalty, and a hard zero when any precision is zero.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

__all__ = ["bleu_n", "distinct_n", "repetition_rate", "fluency_stats", "FluencyStats"]

_TERMINAL = {".", "!", "?"}


def _ngrams(tokens, n: int):
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def _clipped_precision(candidate, reference, k: int) -> float:
    grams = _ngrams(candidate, k)
    if not grams:
        return 0.0
    ref_counts = Counter(_ngrams(reference, k))
    matched = sum(min(count, ref_counts[g]) for g, count in Counter(grams).items())
    return matched / len(grams)


def bleu_n(candidate, reference, n: int) -> float:
    """Geometric mean of clipped k-gram precisions for k = 1..n.

    Returns 0.0 for an empty candidate (degenerate generation) or whenever
    any precision vanishes; a candidate shorter than k grams scores p_k = 0.
    """
    if n < 1:
        raise ValueError("bleu_n requires n >= 1")
    candidate, reference = list(candidate), list(reference)
    if not candidate:
        return 0.0
    precisions = [_clipped_precision(candidate, reference, k) for k in range(1, n + 1)]
    if any(p == 0.0 for p in precisions):
        return 0.0
    if n == 1:
        return precisions[0]
    return math.exp(math.fsum(math.log(p) for p in precisions) / n)


def distinct_n(tokens, n: int) -> float:
    """Unique-to-total n-gram ratio; 1.0 when there are no n-grams at all."""
    if n < 1:
        raise ValueError("distinct_n requires n >= 1")
    grams = _ngrams(list(tokens), n)
    if not grams:
        return 1.0
    return len(set(grams)) / len(grams)


def repetition_rate(tokens) -> float:
    """Fraction of adjacent equal token pairs; 0.0 for fewer than 2 tokens."""
    tokens = list(tokens)
    if len(tokens) < 2:
        return 0.0
    repeats = sum(1 for a, b in zip(tokens, tokens[1:]) if a == b)
    return repeats / (len(tokens) - 1)


@dataclass(frozen=True)
class FluencyStats:
    avg_sentence_length: float
    length_variation: float
    degenerate: bool = False


def _split_sentences(tokens):
    sentences, current = [], []
    for tok in tokens:
        if tok in _TERMINAL:
            if current:
                sentences.append(current)
                current = []
        else:
            current.append(tok)
    if current:
        sentences.append(current)
    return sentences


def fluency_stats(token_lists) -> FluencyStats:
    """Average sentence length and coefficient of variation over texts.

    Sentences split on terminal punctuation; a text with none counts as one
    sentence, and a punctuation-only text as one empty sentence (which can
    drive the mean to zero, reported with the degenerate flag).  The
    variation uses the population standard deviation.
    """
    lengths = []
    saw_text = False
    for tokens in token_lists:
        saw_text = True
        sentences = _split_sentences(list(tokens))
        if not sentences:
            sentences = [[]]
        for sentence in sentences:
            lengths.append(len(sentence))
    if not saw_text:
        raise ValueError("fluency_stats needs at least one text")
    mu = sum(lengths) / len(lengths)
    if mu == 0.0:
        return FluencyStats(0.0, 0.0, degenerate=True)
    var = sum((length - mu) ** 2 for length in lengths) / len(lengths)
    return FluencyStats(mu, math.sqrt(var) / mu)
