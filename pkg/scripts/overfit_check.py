#!/usr/bin/env python3
"""Memorization sanity check: train each architecture on five sentences.

Every model should push validation perplexity on its own training subset
under 2.0 and regenerate each sentence verbatim under greedy decoding.

    python scripts/overfit_check.py --epochs 200
"""

import argparse
import sys
import time

from qtextgen.corpus import BOS_ID, EOS_ID, synthesize_datasets, tokenize
from qtextgen.harness import RunConfig, fit, model_config_for
from qtextgen.harness.evaluate import prompt_tokens
from qtextgen.metrics import bleu_n, perplexity
from qtextgen.models import ARCHITECTURES, build_model, generate
from qtextgen.numerics import Rng, derive_seed


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--epochs", type=int, default=200)
    parser.add_argument("--samples", type=int, default=5)
    args = parser.parse_args()

    dataset = synthesize_datasets(42)["simple_sentences"]
    texts = dataset.texts[: args.samples]
    seqs = list(dataset.sequences[: args.samples])
    cfg = RunConfig(epochs=args.epochs, patience=args.epochs, batch_size=8)

    print(f"{'model':12s} {'ppl':>7s} {'overlap':>8s} {'seconds':>8s}")
    ok = True
    for arch in ARCHITECTURES:
        started = time.time()
        model = build_model(model_config_for(arch, dataset, cfg, seed=args.seed))
        fit(model, seqs, seqs, cfg, Rng(derive_seed(args.seed, "overfit", arch)))
        ppl = perplexity(model, seqs)
        overlaps = []
        for text in texts:
            words = tokenize(text)
            prompt = prompt_tokens(words)
            ids = [BOS_ID, *dataset.vocab.encode_tokens(prompt)]
            out = generate(model, ids, max_new=dataset.max_words - len(prompt), eos_id=EOS_ID)
            overlaps.append(bleu_n(dataset.vocab.decode_tokens(out), words, 1))
        overlap = min(overlaps)
        ok = ok and ppl < 2.0 and overlap >= 0.6
        print(f"{arch:12s} {ppl:7.3f} {overlap:8.2f} {time.time() - started:8.1f}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
