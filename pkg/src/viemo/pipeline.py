"""End-to-end experiment orchestration, configured from TOML.

An experiment is: load corpora, normalize, fit the vectorizer on train, train
the classifier, vectorize the eval split (optionally dropping stopwords and
reducing comments to their key clause), and score. Artifacts land under an
output directory: model.json, vocabulary.tsv, normalized corpora, report.json,
errors.json and manifest.json. Manifests are canonical JSON with content
hashes and no timestamps, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Sequence

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import keyclause, mlr, stopwords
from .corpus import (
    DEFAULT_LABEL_COLUMN,
    DEFAULT_TEXT_COLUMN,
    EMOTION_LABELS,
    LabeledComment,
    labels as corpus_labels,
    load_corpus,
    save_corpus,
    texts as corpus_texts,
)
from .errors import ConfigError, DataError
from .evaluate import error_report, evaluate
from .lexicons import LexiconSet, load_lexicons, load_removal_list
from .normalize import NormalizerConfig, normalize_corpus
from .vectorize import (
    FeatureMatrix,
    VectorizerConfig,
    Vocabulary,
    fit_vocabulary,
    save_vocabulary,
    transform,
)


@dataclass(frozen=True)
class CorpusConfig:
    train: str | None = None
    dev: str | None = None
    test: str | None = None
    format: str = "csv"
    text_column: str = DEFAULT_TEXT_COLUMN
    label_column: str = DEFAULT_LABEL_COLUMN


@dataclass(frozen=True)
class StopwordConfig:
    removal_file: str | None = None
    epsilon: float = 0.1
    min_total_count: int = 15
    min_per_label_count: int = 5
    per_label_mode: str = "all"
    exclusions_file: str | None = None


@dataclass(frozen=True)
class KeyClauseConfig:
    enabled: bool = False
    important_words_file: str | None = None
    conjunctions_file: str | None = None


@dataclass(frozen=True)
class PipelineConfig:
    label: str = "run"
    techniques: tuple[int, ...] = ()
    eval_split: str = "dev"
    seed: int = 0
    lexicon_dir: str | None = None
    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    vectorizer: VectorizerConfig = field(default_factory=VectorizerConfig)
    classifier: mlr.MlrConfig = field(default_factory=mlr.MlrConfig)
    stopwords: StopwordConfig = field(default_factory=StopwordConfig)
    keyclause: KeyClauseConfig = field(default_factory=KeyClauseConfig)

    def __post_init__(self) -> None:
        object.__setattr__(self, "techniques", tuple(self.techniques))
        bad = [t for t in self.techniques if t not in range(1, 8)]
        if bad:
            raise ConfigError(f"unknown techniques {bad}; valid ids are 1..7")
        exclusive = set(self.techniques) & {2, 3, 4}
        if len(exclusive) > 1:
            raise ConfigError(f"techniques {sorted(exclusive)} are mutually exclusive")
        if 5 in self.techniques and not set(self.techniques) & {3, 4}:
            raise ConfigError("technique 5 requires technique 3 or 4")
        if self.eval_split not in ("dev", "test"):
            raise ConfigError(f"eval_split must be 'dev' or 'test', got {self.eval_split!r}")

    @property
    def normalizer_techniques(self) -> frozenset[int]:
        return frozenset(t for t in self.techniques if t <= 6)

    @property
    def stopword_removal_enabled(self) -> bool:
        return 7 in self.techniques or bool(self.stopwords.removal_file)


_SECTION_TYPES = {
    "corpus": CorpusConfig,
    "stopwords": StopwordConfig,
    "keyclause": KeyClauseConfig,
}
_ROOT_KEYS = {"label", "techniques", "eval_split", "seed", "lexicon_dir"}


def _none_to_empty(value):
    return "" if value is None else value


def _empty_to_none(value):
    return None if value == "" else value


def config_to_dict(config: PipelineConfig) -> dict:
    """Plain-dict form of a config (None encoded as empty string)."""
    return {
        "label": config.label,
        "techniques": list(config.techniques),
        "eval_split": config.eval_split,
        "seed": config.seed,
        "lexicon_dir": _none_to_empty(config.lexicon_dir),
        "corpus": {k: _none_to_empty(v) for k, v in asdict(config.corpus).items()},
        "vectorizer": {
            "weighting": config.vectorizer.weighting,
            "ngram_range": list(config.vectorizer.ngram_range),
            "n_features": config.vectorizer.n_features,
        },
        "classifier": asdict(config.classifier),
        "stopwords": {k: _none_to_empty(v) for k, v in asdict(config.stopwords).items()},
        "keyclause": {k: _none_to_empty(v) for k, v in asdict(config.keyclause).items()},
    }


def config_from_dict(data: dict) -> PipelineConfig:
    """Inverse of config_to_dict; unknown keys raise ConfigError."""
    data = dict(data)
    known = _ROOT_KEYS | set(_SECTION_TYPES) | {"vectorizer", "classifier"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    def section(name: str, cls):
        raw = dict(data.get(name, {}))
        fields = cls.__dataclass_fields__
        extra = set(raw) - set(fields)
        if extra:
            raise ConfigError(f"unknown keys in [{name}]: {sorted(extra)}")
        for key, fld in fields.items():
            if key in raw and "None" in str(fld.type):
                raw[key] = _empty_to_none(raw[key])
        return cls(**raw)

    vec_raw = dict(data.get("vectorizer", {}))
    extra = set(vec_raw) - {"weighting", "ngram_range", "n_features"}
    if extra:
        raise ConfigError(f"unknown keys in [vectorizer]: {sorted(extra)}")
    if "ngram_range" in vec_raw:
        vec_raw["ngram_range"] = tuple(vec_raw["ngram_range"])
    try:
        return PipelineConfig(
            label=data.get("label", "run"),
            techniques=tuple(data.get("techniques", ())),
            eval_split=data.get("eval_split", "dev"),
            seed=data.get("seed", 0),
            lexicon_dir=_empty_to_none(data.get("lexicon_dir", "")),
            corpus=section("corpus", CorpusConfig),
            vectorizer=VectorizerConfig(**vec_raw),
            classifier=section("classifier", mlr.MlrConfig),
            stopwords=section("stopwords", StopwordConfig),
            keyclause=section("keyclause", KeyClauseConfig),
        )
    except TypeError as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def config_from_toml(path: str | Path) -> PipelineConfig:
    path = Path(path)
    try:
        with path.open("rb") as handle:
            data = tomllib.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config {path} is not valid TOML: {exc}") from exc
    return config_from_dict(data)


def _toml_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_value(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize {value!r} to TOML")


def config_to_toml(config: PipelineConfig) -> str:
    """Serialize a config to TOML text that config_from_toml round-trips."""
    data = config_to_dict(config)
    lines = []
    for key in ("label", "techniques", "eval_split", "seed", "lexicon_dir"):
        lines.append(f"{key} = {_toml_value(data[key])}")
    for section in ("corpus", "vectorizer", "classifier", "stopwords", "keyclause"):
        lines.append("")
        lines.append(f"[{section}]")
        for key, value in data[section].items():
            lines.append(f"{key} = {_toml_value(value)}")
    return "\n".join(lines) + "\n"


def config_hash(config: PipelineConfig) -> str:
    canonical = json.dumps(config_to_dict(config), sort_keys=True, ensure_ascii=False)
    return hashlib.sha256(canonical.encode()).hexdigest()


def _file_sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for block in iter(lambda: handle.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def _canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=1)


def make_classifier(
    model: mlr.MlrModel,
    vocabulary: Vocabulary,
    weighting: str,
    removal: frozenset[str] = frozenset(),
):
    """Text -> label closure reproducing the eval-time feature transform."""

    def classify(text: str) -> str:
        matrix = transform([text], vocabulary, weighting, removal)
        return mlr.predict(model, matrix)[0]

    return classify


def _load_required_corpus(config: PipelineConfig, which: str) -> list[LabeledComment]:
    path = getattr(config.corpus, which)
    if not path:
        raise ConfigError(f"config needs corpus.{which} for this command")
    return load_corpus(
        path,
        fmt=config.corpus.format,
        text_column=config.corpus.text_column,
        label_column=config.corpus.label_column,
        id_prefix=f"{which}:",
    )


def _resolve_removal(config: PipelineConfig, lexicons: LexiconSet) -> frozenset[str]:
    if not config.stopword_removal_enabled:
        return frozenset()
    if config.stopwords.removal_file:
        return load_removal_list(config.stopwords.removal_file)
    return lexicons.removal_list


def _keyclause_lists(config: KeyClauseConfig) -> tuple[tuple[str, ...], tuple[str, ...]]:
    important_path = config.important_words_file or keyclause.default_important_words_path()
    conjunction_path = config.conjunctions_file or keyclause.default_conjunctions_path()
    return keyclause.load_word_list(important_path), keyclause.load_word_list(conjunction_path)


def run_experiment(config: PipelineConfig, out_dir: str | Path) -> dict:
    """Run one experiment and write artifacts; returns the manifest dict."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    lexicons = load_lexicons(config.lexicon_dir)
    train = _load_required_corpus(config, "train")
    eval_name = config.eval_split
    eval_split = _load_required_corpus(config, eval_name)

    norm_config = NormalizerConfig(config.normalizer_techniques, lexicons)
    train_norm, train_report = normalize_corpus(train, norm_config)
    eval_norm, eval_report = normalize_corpus(eval_split, norm_config)
    save_corpus(train_norm, out_dir / "normalized" / "train.csv")
    save_corpus(eval_norm, out_dir / "normalized" / f"{eval_name}.csv")

    vocabulary = fit_vocabulary(corpus_texts(train_norm), config.vectorizer)
    train_matrix = transform(corpus_texts(train_norm), vocabulary, config.vectorizer.weighting)
    label_order = tuple(l for l in EMOTION_LABELS if l in set(corpus_labels(train_norm)))
    model = mlr.train(train_matrix, corpus_labels(train_norm), config.classifier, label_order)

    removal = _resolve_removal(config, lexicons)
    keyclause_affected = 0
    if config.keyclause.enabled:
        important, conjunctions = _keyclause_lists(config.keyclause)
        eval_texts = []
        for comment in eval_norm:
            extracted = keyclause.extract_key_clause(comment.text, important, conjunctions)
            if extracted != comment.text:
                keyclause_affected += 1
            eval_texts.append(extracted)
    else:
        eval_texts = corpus_texts(eval_norm)
    eval_matrix = transform(eval_texts, vocabulary, config.vectorizer.weighting, removal)
    predicted = mlr.predict(model, eval_matrix)
    report = evaluate(corpus_labels(eval_norm), predicted)
    errors = error_report(eval_norm, predicted, eval_matrix, model)

    mlr.save_model(
        model,
        vocabulary,
        config.vectorizer,
        out_dir / "model.json",
        normalizer_techniques=sorted(config.normalizer_techniques),
        removal_list=removal,
    )
    save_vocabulary(vocabulary, out_dir / "vocabulary.tsv")
    report_payload = {
        "eval_split": eval_name,
        "metrics": report.to_dict(),
        "normalize": {"train": train_report.to_dict(), eval_name: eval_report.to_dict()},
        "keyclause_affected": keyclause_affected,
        "n_train": len(train_norm),
        "n_eval": len(eval_norm),
    }
    (out_dir / "report.json").write_text(_canonical_json(report_payload), encoding="utf-8")
    (out_dir / "errors.json").write_text(_canonical_json(errors), encoding="utf-8")

    input_hashes = {
        "train": _file_sha256(Path(config.corpus.train)),
        eval_name: _file_sha256(Path(getattr(config.corpus, eval_name))),
    }
    lexicon_dir = Path(config.lexicon_dir) if config.lexicon_dir else None
    from .lexicons import default_lexicon_dir

    for lex_file in sorted((lexicon_dir or default_lexicon_dir()).iterdir()):
        if lex_file.is_file():
            input_hashes[f"lexicons/{lex_file.name}"] = _file_sha256(lex_file)
    manifest = {
        "label": config.label,
        "config": config_to_dict(config),
        "config_hash": config_hash(config),
        "inputs": input_hashes,
        "metrics": {
            "accuracy": report.accuracy,
            "weighted_f1": report.weighted_f1,
            "macro_f1": report.macro_f1,
        },
        "model": {
            "converged": model.converged,
            "n_iter": model.n_iter,
            "labels": list(model.labels),
            "vocab_size": len(vocabulary),
            "vocab_fingerprint": model.vocab_fingerprint,
        },
        "keyclause_affected": keyclause_affected,
        "removal_list_size": len(removal),
        "artifacts": sorted(
            str(p.relative_to(out_dir)) for p in out_dir.rglob("*")
            if p.is_file() and p.name != "manifest.json"
        ),
    }
    (out_dir / "manifest.json").write_text(_canonical_json(manifest), encoding="utf-8")
    return manifest


def run_matrix(configs: Sequence[PipelineConfig], out_root: str | Path) -> list[dict]:
    """Run several experiments; one row of headline metrics per config."""
    out_root = Path(out_root)
    labels_seen = set()
    rows = []
    for config in configs:
        if config.label in labels_seen:
            raise ConfigError(f"duplicate experiment label {config.label!r} in matrix")
        labels_seen.add(config.label)
        try:
            manifest = run_experiment(config, out_root / config.label)
            rows.append({"label": config.label, **manifest["metrics"]})
        except Exception as exc:  # noqa: BLE001 - a failed cell must not kill the matrix
            rows.append({"label": config.label, "error": f"{type(exc).__name__}: {exc}"})
    (out_root / "matrix.json").write_text(_canonical_json(rows), encoding="utf-8")
    (out_root / "matrix.txt").write_text(format_matrix_table(rows) + "\n", encoding="utf-8")
    return rows


def format_matrix_table(rows: Sequence[dict]) -> str:
    width = max([len(r["label"]) for r in rows] + [5])
    header = f"{'label':<{width}}  {'accuracy':>8}  {'weighted_f1':>11}  {'macro_f1':>8}"
    lines = [header, "-" * len(header)]
    for row in rows:
        if "error" in row:
            lines.append(f"{row['label']:<{width}}  ERROR: {row['error']}")
        else:
            lines.append(
                f"{row['label']:<{width}}  {row['accuracy'] * 100:>8.2f}  "
                f"{row['weighted_f1'] * 100:>11.2f}  {row['macro_f1'] * 100:>8.2f}"
            )
    return "\n".join(lines)


def discover_stopwords(config: PipelineConfig, out_dir: str | Path) -> stopwords.SearchResult:
    """Run the stopword ablation search on the configured train/dev corpora."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lexicons = load_lexicons(config.lexicon_dir)
    train = _load_required_corpus(config, "train")
    dev = _load_required_corpus(config, "dev")
    norm_config = NormalizerConfig(config.normalizer_techniques, lexicons)
    train_norm, _ = normalize_corpus(train, norm_config)
    dev_norm, _ = normalize_corpus(dev, norm_config)

    exclusions = frozenset()
    if config.stopwords.exclusions_file:
        exclusions = frozenset(keyclause.load_word_list(config.stopwords.exclusions_file))
    criteria = stopwords.CandidateCriteria(
        min_total_count=config.stopwords.min_total_count,
        min_per_label_count=config.stopwords.min_per_label_count,
        per_label_mode=config.stopwords.per_label_mode,
        exclusions=exclusions,
    )
    label_order = tuple(l for l in EMOTION_LABELS if l in set(corpus_labels(train_norm)))
    stats = stopwords.word_statistics(
        corpus_texts(train_norm), corpus_labels(train_norm), label_order
    )
    candidates = stopwords.build_candidates(stats, criteria)
    trainer, _ = stopwords.make_dev_trainer(
        corpus_texts(train_norm),
        corpus_labels(train_norm),
        corpus_texts(dev_norm),
        corpus_labels(dev_norm),
        config.vectorizer,
        config.classifier,
        label_order,
    )
    result = stopwords.run_search(candidates, trainer, config.stopwords.epsilon)

    (out_dir / "stopwords.txt").write_text(
        "".join(f"{w}\n" for w in result.final_filter_list), encoding="utf-8"
    )
    audit_payload = {
        "candidates": list(candidates),
        "criteria": {
            "min_total_count": criteria.min_total_count,
            "min_per_label_count": criteria.min_per_label_count,
            "per_label_mode": criteria.per_label_mode,
            "exclusions": sorted(criteria.exclusions),
        },
        "epsilon": config.stopwords.epsilon,
        "rounds": list(result.audit),
        "termination": result.termination,
        "final_filter_list": list(result.final_filter_list),
        "remaining_test_list": list(result.remaining_test_list),
    }
    (out_dir / "audit.json").write_text(_canonical_json(audit_payload), encoding="utf-8")
    return result
