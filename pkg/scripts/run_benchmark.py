#!/usr/bin/env python3
"""Run the full model x dataset benchmark and print the overall table.

Equivalent to `qtextgen benchmark`, kept as a script for quick experiments:

    python scripts/run_benchmark.py --seed 42 --out out/
"""

import argparse
import sys
import time
from pathlib import Path

from qtextgen.harness import RunConfig, benchmark_matrix


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--out", type=str, default="out")
    parser.add_argument("--epochs", type=int, default=50)
    parser.add_argument("--decode", choices=("greedy", "sample"), default="greedy")
    parser.add_argument("--temp", type=float, default=1.0)
    args = parser.parse_args()

    cfg = RunConfig(seed=args.seed, out_dir=args.out, epochs=args.epochs,
                    decode=args.decode, temperature=args.temp)
    started = time.time()
    result = benchmark_matrix(cfg, progress=lambda msg: print(msg, file=sys.stderr))
    print(f"\nfinished {len(result.reports)} cells in {time.time() - started:.0f}s", file=sys.stderr)
    if result.errors:
        for (dataset, arch), msg in sorted(result.errors.items()):
            print(f"FAILED {arch} on {dataset}: {msg}", file=sys.stderr)
    print((Path(cfg.out_dir) / "results_overall.csv").read_text(), end="")
    return 2 if result.errors else 0


if __name__ == "__main__":
    sys.exit(main())
