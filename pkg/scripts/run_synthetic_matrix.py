"""Run the normalization-technique matrix on a generated synthetic corpus.

Generates an emotive-signal corpus, then trains and evaluates one model per
technique combination, writing per-run artifacts and a comparison table:

    python3 scripts/run_synthetic_matrix.py --out runs/synth-matrix
"""

from __future__ import annotations

import argparse
from pathlib import Path

from viemo.corpus import save_corpus
from viemo.pipeline import CorpusConfig, PipelineConfig, format_matrix_table, run_matrix
from viemo.synth import make_emotive_corpus, split_per_class

TECHNIQUE_SETS: list[tuple[int, ...]] = [
    (),
    (1,),
    (2,),
    (1, 2),
    (1, 3),
    (1, 3, 5),
    (1, 4, 5),
    (1, 3, 5, 6),
    (1, 4, 5, 6),
]


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", required=True, help="output directory for runs and data")
    parser.add_argument("--per-class", type=int, default=100)
    parser.add_argument("--emotive-fraction", type=float, default=0.3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    out = Path(args.out)
    comments = make_emotive_corpus(args.per_class, args.emotive_fraction, args.seed)
    train, dev = split_per_class(comments)
    train_path = out / "data" / "train.csv"
    dev_path = out / "data" / "dev.csv"
    save_corpus(train, train_path)
    save_corpus(dev, dev_path)

    corpus = CorpusConfig(train=str(train_path), dev=str(dev_path))
    configs = [
        PipelineConfig(
            label="raw" if not techniques else "t" + "".join(map(str, techniques)),
            techniques=techniques,
            corpus=corpus,
        )
        for techniques in TECHNIQUE_SETS
    ]
    rows = run_matrix(configs, out / "runs")
    print(format_matrix_table(rows))
    print(f"artifacts under {out / 'runs'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
