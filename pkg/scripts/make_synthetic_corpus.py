"""Generate a synthetic labeled comment corpus as train/dev CSV files.

The corpus plants each class's signal in emoticons/emoji for a fraction of
documents, so it exercises the normalizer's emotive handling end to end:

    python3 scripts/make_synthetic_corpus.py --out data/synth
    viemo run --train data/synth/train.csv --dev data/synth/dev.csv \
        --techniques 1,3,5 --out runs/synth
"""

from __future__ import annotations

import argparse
from pathlib import Path

from viemo.corpus import save_corpus
from viemo.synth import make_emotive_corpus, split_per_class


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="directory for train.csv and dev.csv")
    parser.add_argument("--per-class", type=int, default=100, help="comments per class")
    parser.add_argument("--emotive-fraction", type=float, default=0.3,
                        help="fraction of each class whose signal is only an emotive")
    parser.add_argument("--train-fraction", type=float, default=0.8)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    comments = make_emotive_corpus(args.per_class, args.emotive_fraction, args.seed)
    train, dev = split_per_class(comments, args.train_fraction)
    out = Path(args.out)
    save_corpus(train, out / "train.csv")
    save_corpus(dev, out / "dev.csv")
    print(f"wrote {len(train)} train and {len(dev)} dev comments under {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
