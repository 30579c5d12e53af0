"""Tokenization, vocabularies, and synthesis of the five micro-corpora."""

from .synth import (
    DATASET_NAMES,
    REFERENCE_SENTENCES,
    Dataset,
    Subset,
    SynthesisError,
    load_dataset,
    save_dataset,
    synthesize_datasets,
    train_val_split,
)
from .text import BOS_ID, EOS_ID, PAD_ID, UNK_ID, Vocabulary, tokenize

__all__ = [
    "BOS_ID",
    "DATASET_NAMES",
    "Dataset",
    "EOS_ID",
    "PAD_ID",
    "REFERENCE_SENTENCES",
    "Subset",
    "SynthesisError",
    "UNK_ID",
    "Vocabulary",
    "load_dataset",
    "save_dataset",
    "synthesize_datasets",
    "tokenize",
    "train_val_split",
]
