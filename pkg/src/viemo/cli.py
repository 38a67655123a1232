"""Command-line interface.

Subcommands mirror the library layers: normalize, train, predict, evaluate,
discover-stopwords, extract-clauses, run (one experiment) and matrix (several).
Exit codes: 0 success, 1 usage/config error, 2 data error, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from . import keyclause, mlr, pipeline
from .corpus import (
    DEFAULT_LABEL_COLUMN,
    DEFAULT_TEXT_COLUMN,
    load_corpus,
    save_corpus,
    texts as corpus_texts,
    labels as corpus_labels,
)
from .errors import ConfigError, DataError, ViemoError
from .evaluate import evaluate, format_table
from .lexicons import load_lexicons
from .normalize import NormalizeReport, NormalizerConfig, normalize, normalize_corpus
from .vectorize import transform

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


def _parse_techniques(raw: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in raw.replace(" ", "").split(",") if part)
    except ValueError:
        raise ConfigError(f"techniques must be comma-separated integers, got {raw!r}") from None


def _parse_ngram_range(raw: str) -> tuple[int, int]:
    parts = raw.replace(",", ":").split(":")
    if len(parts) != 2:
        raise ConfigError(f"ngram range must look like '1:3', got {raw!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigError(f"ngram range must look like '1:3', got {raw!r}") from None


def _load_config(args: argparse.Namespace) -> pipeline.PipelineConfig:
    """Config file plus flag overrides; flags win."""
    if getattr(args, "config", None):
        config = pipeline.config_from_toml(args.config)
    else:
        config = pipeline.PipelineConfig()
    if getattr(args, "label", None) is not None:
        config = replace(config, label=args.label)
    if getattr(args, "techniques", None) is not None:
        config = replace(config, techniques=_parse_techniques(args.techniques))
    if getattr(args, "eval_split", None) is not None:
        config = replace(config, eval_split=args.eval_split)
    if getattr(args, "lexicons", None) is not None:
        config = replace(config, lexicon_dir=args.lexicons)
    corpus_overrides = {}
    for field_name, flag in (("train", "train"), ("dev", "dev"), ("test", "test"),
                             ("format", "format"), ("text_column", "text_column"),
                             ("label_column", "label_column")):
        value = getattr(args, flag, None)
        if value is not None:
            corpus_overrides[field_name] = value
    if corpus_overrides:
        config = replace(config, corpus=replace(config.corpus, **corpus_overrides))
    vec_overrides = {}
    if getattr(args, "weighting", None) is not None:
        vec_overrides["weighting"] = args.weighting
    if getattr(args, "ngram_range", None) is not None:
        vec_overrides["ngram_range"] = _parse_ngram_range(args.ngram_range)
    if getattr(args, "n_features", None) is not None:
        vec_overrides["n_features"] = args.n_features
    if vec_overrides:
        config = replace(config, vectorizer=replace(config.vectorizer, **vec_overrides))
    clf_overrides = {}
    for field_name in ("C", "class_weight", "max_iterations", "tolerance"):
        value = getattr(args, field_name, None)
        if value is not None:
            clf_overrides[field_name] = value
    if clf_overrides:
        config = replace(config, classifier=replace(config.classifier, **clf_overrides))
    sw_overrides = {}
    if getattr(args, "removal_file", None) is not None:
        sw_overrides["removal_file"] = args.removal_file
    if getattr(args, "epsilon", None) is not None:
        sw_overrides["epsilon"] = args.epsilon
    if sw_overrides:
        config = replace(config, stopwords=replace(config.stopwords, **sw_overrides))
    kc_overrides = {}
    if getattr(args, "keyclause", False):
        kc_overrides["enabled"] = True
    if getattr(args, "important_words", None) is not None:
        kc_overrides["important_words_file"] = args.important_words
    if getattr(args, "conjunctions", None) is not None:
        kc_overrides["conjunctions_file"] = args.conjunctions
    if kc_overrides:
        config = replace(config, keyclause=replace(config.keyclause, **kc_overrides))
    if getattr(args, "seed", None) is not None:
        config = replace(config, seed=args.seed)
    return config


def _add_corpus_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("csv", "tsv"), help="corpus file format")
    parser.add_argument("--text-column", dest="text_column", help="text column name")
    parser.add_argument("--label-column", dest="label_column", help="label column name")


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="TOML experiment config")
    parser.add_argument("--label", help="experiment label (output subdirectory name)")
    parser.add_argument("--train", help="training corpus path")
    parser.add_argument("--dev", help="dev corpus path")
    parser.add_argument("--test", help="test corpus path")
    parser.add_argument("--eval-split", dest="eval_split", choices=("dev", "test"))
    parser.add_argument("--techniques", help="comma-separated technique ids, e.g. 1,3,5,6")
    parser.add_argument("--lexicons", help="lexicon directory (default: packaged)")
    parser.add_argument("--weighting", choices=("count", "tfidf"))
    parser.add_argument("--ngram-range", dest="ngram_range", help="e.g. 1:3")
    parser.add_argument("--n-features", dest="n_features", type=int)
    parser.add_argument("--C", dest="C", type=float, help="loss scale on the data term")
    parser.add_argument("--class-weight", dest="class_weight", choices=("balanced", "uniform"))
    parser.add_argument("--max-iterations", dest="max_iterations", type=int)
    parser.add_argument("--tolerance", dest="tolerance", type=float)
    parser.add_argument("--removal-file", dest="removal_file", help="stopword list to filter at eval time")
    parser.add_argument("--epsilon", type=float, help="stopword verdict band in F1 points")
    parser.add_argument("--keyclause", action="store_true", help="classify the key clause instead of the full comment")
    parser.add_argument("--important-words", dest="important_words", help="important word list file")
    parser.add_argument("--conjunctions", dest="conjunctions", help="conjunction list file")
    _add_corpus_flags(parser)


def cmd_normalize(args: argparse.Namespace) -> int:
    lexicons = load_lexicons(args.lexicons)
    techniques = frozenset(_parse_techniques(args.techniques))
    config = NormalizerConfig(techniques, lexicons)
    if args.text is not None:
        report = NormalizeReport()
        print(normalize(args.text, config, report))
        if args.report:
            print(json.dumps(report.to_dict(), ensure_ascii=False, indent=1), file=sys.stderr)
        return EXIT_OK
    if not args.input or not args.output:
        raise ConfigError("normalize needs --text, or both --input and --output")
    comments = load_corpus(
        args.input,
        fmt=args.format or "csv",
        text_column=args.text_column or DEFAULT_TEXT_COLUMN,
        label_column=args.label_column or DEFAULT_LABEL_COLUMN,
    )
    normalized, report = normalize_corpus(comments, config)
    save_corpus(normalized, args.output, fmt=args.format or "csv")
    print(json.dumps(report.to_dict(), ensure_ascii=False, indent=1))
    return EXIT_OK


def cmd_train(args: argparse.Namespace) -> int:
    config = _load_config(args)
    manifest = pipeline.run_experiment(config, Path(args.out) / config.label)
    print(json.dumps(manifest["metrics"], indent=1))
    return EXIT_OK


def _read_prediction_input(args: argparse.Namespace) -> tuple[list[str], list[str], list[str]]:
    """Read (ids, texts, gold labels or '') from a corpus file for predict."""
    path = Path(args.input)
    fmt = args.format or "csv"
    text_column = args.text_column or DEFAULT_TEXT_COLUMN
    label_column = args.label_column or DEFAULT_LABEL_COLUMN
    try:
        handle = path.open(encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    with handle:
        reader = csv.DictReader(handle, delimiter="\t" if fmt == "tsv" else ",")
        if reader.fieldnames is None or text_column not in reader.fieldnames:
            raise DataError(f"{path}: missing text column {text_column!r}")
        id_col = next((c for c in reader.fieldnames if c.lower() in ("id", "index")), None)
        has_label = label_column in reader.fieldnames
        ids, texts, gold = [], [], []
        for i, row in enumerate(reader):
            text = row[text_column]
            if text is None or not text.strip():
                continue
            ids.append(row[id_col] if id_col else str(i))
            texts.append(text)
            gold.append(row[label_column] if has_label else "")
    return ids, texts, gold


def _predict_texts(saved: mlr.SavedModel, texts: list[str], lexicon_dir: str | None,
                   use_keyclause: bool, important_file: str | None,
                   conjunctions_file: str | None) -> list[str]:
    lexicons = load_lexicons(lexicon_dir)
    norm_config = NormalizerConfig(frozenset(saved.normalizer_techniques), lexicons)
    normalized = [normalize(t, norm_config) for t in texts]
    if use_keyclause:
        important = keyclause.load_word_list(
            important_file or keyclause.default_important_words_path()
        )
        conjunctions = keyclause.load_word_list(
            conjunctions_file or keyclause.default_conjunctions_path()
        )
        normalized = [
            keyclause.extract_key_clause(t, important, conjunctions) for t in normalized
        ]
    matrix = transform(
        normalized, saved.vocabulary, saved.vectorizer_config.weighting, saved.removal_list
    )
    return mlr.predict(saved.model, matrix)


def cmd_predict(args: argparse.Namespace) -> int:
    saved = mlr.load_model(args.model)
    if args.text is not None:
        predicted = _predict_texts(saved, [args.text], args.lexicons, args.keyclause,
                                   args.important_words, args.conjunctions)
        print(predicted[0])
        return EXIT_OK
    if not args.input:
        raise ConfigError("predict needs --text or --input")
    ids, texts, gold = _read_prediction_input(args)
    predicted = _predict_texts(saved, texts, args.lexicons, args.keyclause,
                               args.important_words, args.conjunctions)
    rows = zip(ids, predicted, gold)
    if args.output:
        with Path(args.output).open("w", encoding="utf-8", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["Id", "Predicted", "Gold"])
            writer.writerows(rows)
    else:
        for cid, pred, g in rows:
            print(f"{cid}\t{pred}" + (f"\t{g}" if g else ""))
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    gold_comments = load_corpus(
        args.gold,
        fmt=args.format or "csv",
        text_column=args.text_column or DEFAULT_TEXT_COLUMN,
        label_column=args.label_column or DEFAULT_LABEL_COLUMN,
        id_prefix="gold:",
    )
    gold = corpus_labels(gold_comments)
    if args.predictions:
        with Path(args.predictions).open(encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or "Predicted" not in reader.fieldnames:
                raise DataError(f"{args.predictions}: missing 'Predicted' column")
            predicted = [row["Predicted"] for row in reader]
    elif args.model:
        saved = mlr.load_model(args.model)
        predicted = _predict_texts(saved, corpus_texts(gold_comments), args.lexicons,
                                   args.keyclause, args.important_words, args.conjunctions)
    else:
        raise ConfigError("evaluate needs --predictions or --model")
    report = evaluate(gold, predicted)
    print(format_table(report))
    if args.json:
        Path(args.json).write_text(
            json.dumps(report.to_dict(), ensure_ascii=False, indent=1), encoding="utf-8"
        )
    return EXIT_OK


def cmd_discover_stopwords(args: argparse.Namespace) -> int:
    config = _load_config(args)
    result = pipeline.discover_stopwords(config, args.out)
    print(f"termination: {result.termination}")
    print(f"stopwords ({len(result.final_filter_list)}):")
    for word in result.final_filter_list:
        print(f"  {word}")
    return EXIT_OK


def cmd_extract_clauses(args: argparse.Namespace) -> int:
    conjunctions = keyclause.load_word_list(
        args.conjunctions or keyclause.default_conjunctions_path()
    )
    important = keyclause.load_word_list(
        args.important_words or keyclause.default_important_words_path()
    )
    if args.text is not None:
        split = keyclause.split_clauses(args.text, conjunctions)
        for i, clause in enumerate(split.clauses, start=1):
            print(f"clause {i}: {clause}")
        print(f"key clause: {keyclause.extract_key_clause(args.text, important, conjunctions)}")
        return EXIT_OK
    if not args.input or not args.output:
        raise ConfigError("extract-clauses needs --text, or both --input and --output")
    comments = load_corpus(
        args.input,
        fmt=args.format or "csv",
        text_column=args.text_column or DEFAULT_TEXT_COLUMN,
        label_column=args.label_column or DEFAULT_LABEL_COLUMN,
    )
    affected = 0
    out = []
    for comment in comments:
        extracted = keyclause.extract_key_clause(comment.text, important, conjunctions)
        if extracted != comment.text:
            affected += 1
        out.append(replace(comment, text=extracted))
    save_corpus(out, args.output, fmt=args.format or "csv")
    print(f"extracted key clause for {affected} of {len(out)} comments")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    config = _load_config(args)
    manifest = pipeline.run_experiment(config, Path(args.out) / config.label)
    metrics = manifest["metrics"]
    print(f"label        {config.label}")
    print(f"accuracy     {metrics['accuracy'] * 100:.2f}")
    print(f"weighted F1  {metrics['weighted_f1'] * 100:.2f}")
    print(f"macro F1     {metrics['macro_f1'] * 100:.2f}")
    return EXIT_OK


def cmd_matrix(args: argparse.Namespace) -> int:
    configs = [pipeline.config_from_toml(path) for path in args.configs]
    rows = pipeline.run_matrix(configs, args.out)
    print(pipeline.format_matrix_table(rows))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="viemo",
        description="Vietnamese social-media emotion classification toolkit",
    )
    parser.add_argument("--seed", type=int, default=None, help="seed recorded in manifests")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="apply normalization techniques to text or a corpus")
    p.add_argument("--text", help="normalize a single string and print it")
    p.add_argument("--input", help="input corpus")
    p.add_argument("--output", help="output corpus")
    p.add_argument("--techniques", required=True, help="e.g. 1,3,5,6")
    p.add_argument("--lexicons", help="lexicon directory (default: packaged)")
    p.add_argument("--report", action="store_true", help="print edit counts to stderr")
    _add_corpus_flags(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("train", help="train a classifier and write artifacts")
    _add_experiment_flags(p)
    p.add_argument("--out", required=True, help="output root directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict labels with a saved model")
    p.add_argument("--model", required=True, help="model.json from train/run")
    p.add_argument("--text", help="classify a single string")
    p.add_argument("--input", help="corpus to classify")
    p.add_argument("--output", help="write predictions CSV here")
    p.add_argument("--lexicons", help="lexicon directory (default: packaged)")
    p.add_argument("--keyclause", action="store_true")
    p.add_argument("--important-words", dest="important_words")
    p.add_argument("--conjunctions", dest="conjunctions")
    _add_corpus_flags(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score predictions against a gold corpus")
    p.add_argument("--gold", required=True, help="gold corpus")
    p.add_argument("--predictions", help="CSV with a Predicted column")
    p.add_argument("--model", help="model.json; predicts then scores")
    p.add_argument("--lexicons", help="lexicon directory (default: packaged)")
    p.add_argument("--keyclause", action="store_true")
    p.add_argument("--important-words", dest="important_words")
    p.add_argument("--conjunctions", dest="conjunctions")
    p.add_argument("--json", help="also write the full report as JSON here")
    _add_corpus_flags(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("discover-stopwords", help="ablation search for a stopword list")
    _add_experiment_flags(p)
    p.add_argument("--out", required=True, help="output directory for stopwords.txt + audit.json")
    p.set_defaults(func=cmd_discover_stopwords)

    p = sub.add_parser("extract-clauses", help="split comments and extract key clauses")
    p.add_argument("--text", help="process a single string")
    p.add_argument("--input", help="input corpus")
    p.add_argument("--output", help="output corpus with key clauses")
    p.add_argument("--important-words", dest="important_words")
    p.add_argument("--conjunctions", dest="conjunctions")
    _add_corpus_flags(p)
    p.set_defaults(func=cmd_extract_clauses)

    p = sub.add_parser("run", help="run one configured experiment end to end")
    _add_experiment_flags(p)
    p.add_argument("--out", required=True, help="output root directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("matrix", help="run several experiment configs and tabulate")
    p.add_argument("--configs", nargs="+", required=True, help="TOML config files")
    p.add_argument("--out", required=True, help="output root directory")
    p.set_defaults(func=cmd_matrix)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ViemoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        logger.exception("unexpected failure")
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
