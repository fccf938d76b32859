#!/usr/bin/env python3
"""Generate synthetic databases of growing size and benchmark both strategies.

Mirrors the toolkit's default generator settings, scaling only the sequence
count, and mines each dataset at a few relative thresholds.
"""

import argparse
import io
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from seqmine import generate, run_suite
from seqmine.bench import summarize
from seqmine.datagen import GenParams

SIZES = [100, 250, 500, 1000]
THRESHOLDS = [0.20, 0.10, 0.05]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", default=",".join(str(s) for s in SIZES),
                    help="comma separated sequence counts")
    ap.add_argument("--mode", default="frequent")
    ap.add_argument("--maxlen", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--timeout", type=float, default=120.0, help="per-cell seconds")
    ap.add_argument("--output", default=None, help="JSONL records path")
    args = ap.parse_args()

    datasets = []
    for size in [int(tok) for tok in args.sizes.split(",") if tok.strip()]:
        db, _ = generate(GenParams(num_sequences=size, seed=args.seed))
        datasets.append((f"synth-{size}", db))
        print(f"generated synth-{size}: {sum(len(s) for s in db.sequences)} items", file=sys.stderr)

    records = []
    sink = io.open(args.output, "w", encoding="utf-8") if args.output else None
    for record in run_suite(
        datasets, THRESHOLDS, ["skip", "fill"], [args.mode],
        maxlen=args.maxlen, timeout=args.timeout,
    ):
        records.append(record)
        if sink:
            sink.write(record.to_json() + "\n")
            sink.flush()
    if sink:
        sink.close()

    print(summarize(records))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
