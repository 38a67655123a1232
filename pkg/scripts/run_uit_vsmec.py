"""Full experiment matrix on the UIT-VSMEC emotion corpus.

Expects a directory with train.csv, valid.csv, and test.csv, each with
Sentence and Emotion columns (see README for how to export them). Runs the
reference classifier (TF-IDF, 1-3 grams, 25k features, C=4.5, balanced)
under a matrix of normalization settings, plus optional stopword discovery
and key-clause routing on top of the strongest normalization:

    python3 scripts/run_uit_vsmec.py --data-dir ~/uit-vsmec --out runs/vsmec
"""

from __future__ import annotations

import argparse
import os
from pathlib import Path

from viemo.mlr import MlrConfig
from viemo.pipeline import (
    CorpusConfig,
    KeyClauseConfig,
    PipelineConfig,
    StopwordConfig,
    discover_stopwords,
    format_matrix_table,
    run_matrix,
)
from viemo.vectorize import VectorizerConfig

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
BEST_TECHNIQUES = (1, 3, 5, 6)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", default=os.environ.get("UIT_VSMEC_DIR"),
                        help="directory with train.csv/valid.csv/test.csv "
                             "(default: $UIT_VSMEC_DIR)")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--eval-split", choices=("dev", "test"), default="test")
    parser.add_argument("--discover-stopwords", action="store_true",
                        help="run the ablation search on train/valid and add a "
                             "run that filters the discovered words")
    args = parser.parse_args(argv)
    if not args.data_dir:
        parser.error("--data-dir or UIT_VSMEC_DIR is required")

    data_dir = Path(args.data_dir)
    out = Path(args.out)
    corpus = CorpusConfig(
        train=str(data_dir / "train.csv"),
        dev=str(data_dir / "valid.csv"),
        test=str(data_dir / "test.csv"),
    )
    vectorizer = VectorizerConfig(weighting="tfidf", ngram_range=(1, 3), n_features=25000)
    classifier = MlrConfig(C=4.5, class_weight="balanced")

    def config(label: str, techniques: tuple[int, ...], **extra) -> PipelineConfig:
        return PipelineConfig(
            label=label,
            techniques=techniques,
            eval_split=args.eval_split,
            corpus=corpus,
            vectorizer=vectorizer,
            classifier=classifier,
            **extra,
        )

    configs = [
        config("raw" if not ts else "t" + "".join(map(str, ts)), ts)
        for ts in TECHNIQUE_SETS
    ]
    configs.append(config("best+keyclause", BEST_TECHNIQUES,
                          keyclause=KeyClauseConfig(enabled=True)))

    if args.discover_stopwords:
        search_dir = out / "stopwords"
        result = discover_stopwords(config("discovery", BEST_TECHNIQUES), search_dir)
        print(f"stopword search removed {len(result.final_filter_list)} words "
              f"({result.termination}); list at {search_dir / 'stopwords.txt'}")
        removal = StopwordConfig(removal_file=str(search_dir / "stopwords.txt"))
        configs.append(config("best+stop", BEST_TECHNIQUES + (7,), stopwords=removal))
        configs.append(config("best+stop+keyclause", BEST_TECHNIQUES + (7,),
                              stopwords=removal, keyclause=KeyClauseConfig(enabled=True)))

    rows = run_matrix(configs, out / "runs")
    print(format_matrix_table(rows))
    print(f"artifacts under {out / 'runs'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
