"""Experiment orchestration: config round-trips, artifacts, reproducibility."""

import json
from dataclasses import replace
from importlib import resources
from pathlib import Path

import pytest

from viemo.corpus import EMOTION_LABELS
from viemo.errors import ConfigError
from viemo.mlr import MlrConfig, load_model
from viemo.pipeline import (
    CorpusConfig,
    KeyClauseConfig,
    PipelineConfig,
    StopwordConfig,
    config_from_dict,
    config_from_toml,
    config_hash,
    config_to_dict,
    config_to_toml,
    discover_stopwords,
    format_matrix_table,
    make_classifier,
    run_experiment,
    run_matrix,
)
from viemo.vectorize import VectorizerConfig

DEMO_DIR = Path(str(resources.files("viemo").joinpath("data/demo")))


def demo_config(**overrides) -> PipelineConfig:
    base = dict(
        label="demo",
        techniques=(1, 3, 5, 6),
        corpus=CorpusConfig(
            train=str(DEMO_DIR / "train.csv"),
            dev=str(DEMO_DIR / "dev.csv"),
            test=str(DEMO_DIR / "test.csv"),
        ),
        vectorizer=VectorizerConfig(ngram_range=(1, 2), n_features=2000),
        classifier=MlrConfig(max_iterations=200),
    )
    base.update(overrides)
    return PipelineConfig(**base)


# ---------------------------------------------------------------------------
# config plumbing


def test_technique_validation():
    with pytest.raises(ConfigError):
        PipelineConfig(techniques=(8,))
    with pytest.raises(ConfigError):
        PipelineConfig(techniques=(2, 3))
    with pytest.raises(ConfigError):
        PipelineConfig(techniques=(5,))
    with pytest.raises(ConfigError):
        PipelineConfig(eval_split="validation")
    # 7 is a vectorization-time step: accepted here, excluded from the
    # normalizer technique set
    config = PipelineConfig(techniques=(1, 4, 5, 7))
    assert config.normalizer_techniques == frozenset({1, 4, 5})
    assert config.stopword_removal_enabled


def test_removal_file_alone_enables_stopword_removal():
    config = PipelineConfig(stopwords=StopwordConfig(removal_file="x.txt"))
    assert config.stopword_removal_enabled
    assert not PipelineConfig().stopword_removal_enabled


def test_config_dict_round_trip():
    config = demo_config(
        label="thử nghiệm",
        lexicon_dir=None,
        stopwords=StopwordConfig(removal_file=None, epsilon=0.2),
        keyclause=KeyClauseConfig(enabled=True, important_words_file="từ.txt"),
    )
    data = config_to_dict(config)
    assert data["lexicon_dir"] == ""  # None encodes as empty string
    assert data["stopwords"]["removal_file"] == ""
    assert config_from_dict(data) == config


def test_config_toml_round_trip(tmp_path):
    config = demo_config(label="đánh giá", eval_split="test")
    path = tmp_path / "config.toml"
    path.write_text(config_to_toml(config), encoding="utf-8")
    assert config_from_toml(path) == config


def test_config_from_dict_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        config_from_dict({"mystery": 1})
    with pytest.raises(ConfigError):
        config_from_dict({"corpus": {"train": "x", "mystery": 1}})
    with pytest.raises(ConfigError):
        config_from_dict({"vectorizer": {"mystery": 1}})
    with pytest.raises(ConfigError):
        config_from_dict({"classifier": {"C": "not-a-number"}})


def test_config_from_toml_error_paths(tmp_path):
    with pytest.raises(ConfigError):
        config_from_toml(tmp_path / "absent.toml")
    bad = tmp_path / "bad.toml"
    bad.write_text("label = ", encoding="utf-8")
    with pytest.raises(ConfigError):
        config_from_toml(bad)


def test_config_hash_tracks_content():
    a, b = demo_config(), demo_config()
    assert config_hash(a) == config_hash(b)
    assert config_hash(a) != config_hash(replace(a, seed=1))
    assert config_hash(a) != config_hash(replace(a, techniques=(1, 4, 5, 6)))


# ---------------------------------------------------------------------------
# experiments


def test_run_experiment_writes_all_artifacts(tmp_path):
    manifest = run_experiment(demo_config(), tmp_path / "out")
    out = tmp_path / "out"
    for name in ("model.json", "vocabulary.tsv", "report.json", "errors.json",
                 "manifest.json", "normalized/train.csv", "normalized/dev.csv"):
        assert (out / name).is_file(), name
    assert set(manifest["artifacts"]) == {
        "model.json", "vocabulary.tsv", "report.json", "errors.json",
        "normalized/train.csv", "normalized/dev.csv",
    }
    assert 0.0 <= manifest["metrics"]["weighted_f1"] <= 1.0
    assert manifest["model"]["labels"] == list(EMOTION_LABELS)
    assert manifest["model"]["converged"]
    assert manifest["config_hash"] == config_hash(demo_config())
    report = json.loads((out / "report.json").read_text(encoding="utf-8"))
    assert report["n_train"] == 56 and report["n_eval"] == 14
    assert report["normalize"]["train"]["emotives_transformed"] > 0

    saved = load_model(out / "model.json")
    assert saved.normalizer_techniques == (1, 3, 5, 6)
    assert saved.model.labels == EMOTION_LABELS


def test_run_experiment_is_byte_reproducible(tmp_path):
    config = demo_config()
    run_experiment(config, tmp_path / "a")
    run_experiment(config, tmp_path / "b")
    for name in ("manifest.json", "model.json", "report.json", "vocabulary.tsv"):
        assert (tmp_path / "a" / name).read_bytes() == \
            (tmp_path / "b" / name).read_bytes(), name


def test_run_experiment_on_test_split(tmp_path):
    manifest = run_experiment(demo_config(eval_split="test"), tmp_path)
    assert "test" in manifest["inputs"]
    assert (tmp_path / "normalized" / "test.csv").is_file()


def test_run_experiment_applies_removal_file(tmp_path):
    removal = tmp_path / "remove.txt"
    removal.write_text("vui\nbuồn\n", encoding="utf-8")
    config = demo_config(
        techniques=(1, 3, 5, 6, 7),
        stopwords=StopwordConfig(removal_file=str(removal)),
    )
    manifest = run_experiment(config, tmp_path / "out")
    assert manifest["removal_list_size"] == 2
    saved = load_model(tmp_path / "out" / "model.json")
    assert saved.removal_list == frozenset({"vui", "buồn"})


def test_run_experiment_keyclause_counts_affected(tmp_path):
    manifest = run_experiment(
        demo_config(keyclause=KeyClauseConfig(enabled=True)), tmp_path)
    assert manifest["keyclause_affected"] >= 0
    report = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    assert report["keyclause_affected"] == manifest["keyclause_affected"]


def test_run_experiment_requires_corpus_paths(tmp_path):
    with pytest.raises(ConfigError):
        run_experiment(PipelineConfig(), tmp_path)


def test_make_classifier_matches_training_labels(tmp_path):
    run_experiment(demo_config(), tmp_path)
    saved = load_model(tmp_path / "model.json")
    classify = make_classifier(saved.model, saved.vocabulary,
                               saved.vectorizer_config.weighting)
    assert classify("vui quá đi") in EMOTION_LABELS


# ---------------------------------------------------------------------------
# matrices


def test_run_matrix_writes_summary_and_survives_bad_cells(tmp_path):
    good = demo_config(label="baseline")
    broken = demo_config(
        label="broken",
        corpus=CorpusConfig(train=str(tmp_path / "missing.csv"),
                            dev=str(DEMO_DIR / "dev.csv")),
    )
    rows = run_matrix([good, broken], tmp_path / "matrix")
    assert rows[0]["label"] == "baseline" and "weighted_f1" in rows[0]
    assert rows[1]["label"] == "broken" and "error" in rows[1]
    assert (tmp_path / "matrix" / "baseline" / "manifest.json").is_file()
    assert (tmp_path / "matrix" / "matrix.json").is_file()
    table = (tmp_path / "matrix" / "matrix.txt").read_text(encoding="utf-8")
    assert "baseline" in table and "ERROR" in table


def test_run_matrix_rejects_duplicate_labels(tmp_path):
    with pytest.raises(ConfigError):
        run_matrix([demo_config(), demo_config()], tmp_path)


def test_format_matrix_table_alignment():
    rows = [{"label": "a", "accuracy": 0.5, "weighted_f1": 0.25, "macro_f1": 0.125}]
    table = format_matrix_table(rows)
    assert "50.00" in table and "25.00" in table and "12.50" in table


# ---------------------------------------------------------------------------
# stopword discovery


def test_discover_stopwords_writes_audit(tmp_path):
    config = demo_config(
        stopwords=StopwordConfig(min_total_count=4, min_per_label_count=0),
    )
    result = discover_stopwords(config, tmp_path)
    audit = json.loads((tmp_path / "audit.json").read_text(encoding="utf-8"))
    assert audit["termination"] == result.termination
    assert audit["final_filter_list"] == list(result.final_filter_list)
    assert audit["criteria"]["min_total_count"] == 4
    assert len(audit["rounds"]) == len(result.audit)
    listed = (tmp_path / "stopwords.txt").read_text(encoding="utf-8").split()
    assert listed == list(result.final_filter_list)


def test_discover_stopwords_with_no_candidates_exhausts(tmp_path):
    # default thresholds are far above anything in the 56-comment corpus
    result = discover_stopwords(demo_config(), tmp_path)
    assert result.termination == "exhausted"
    assert result.final_filter_list == ()
    assert result.audit == ()
