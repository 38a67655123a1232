"""Multinomial logistic regression with class-weighted loss.

The objective over K classes and V features is

    J(W, b) = 0.5 * ||W||_F^2  +  C * sum_i s_{y_i} * (-log p_{y_i}(x_i))

with softmax probabilities p(x) from scores W x + b. Biases are not
regularized. "balanced" class weights are s_c = N / (K * n_c). The loss and
gradient are written out by hand below; optimization is delegated to
scipy's L-BFGS-B, started from zeros, so training is deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.optimize
import scipy.sparse

from .errors import ConfigError, DataError
from .vectorize import FeatureMatrix, VectorizerConfig, Vocabulary

MODEL_FORMAT = "viemo-mlr-1"


@dataclass(frozen=True)
class MlrConfig:
    C: float = 4.5
    class_weight: str = "balanced"
    max_iterations: int = 1000
    tolerance: float = 1e-6

    def __post_init__(self) -> None:
        if self.C <= 0:
            raise ConfigError(f"C must be positive, got {self.C}")
        if self.class_weight not in ("balanced", "uniform"):
            raise ConfigError(
                f"class_weight must be 'balanced' or 'uniform', got {self.class_weight!r}"
            )
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.tolerance <= 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")


@dataclass
class MlrModel:
    """Trained weights plus everything needed to audit the fit."""

    weights: np.ndarray
    biases: np.ndarray
    labels: tuple[str, ...]
    vocab_fingerprint: str
    config: MlrConfig
    converged: bool
    n_iter: int
    loss_history: list[float] = field(default_factory=list, repr=False)


def compute_class_weights(y: Sequence[int], n_classes: int, mode: str) -> np.ndarray:
    """Per-class weights: N/(K*n_c) when balanced, all ones when uniform."""
    if mode == "uniform":
        return np.ones(n_classes)
    counts = np.bincount(np.asarray(y, dtype=int), minlength=n_classes).astype(float)
    if (counts == 0).any():
        missing = [int(c) for c in np.flatnonzero(counts == 0)]
        raise DataError(f"balanced class weights need every class in y; missing class indices {missing}")
    return len(y) / (n_classes * counts)


def softmax(scores: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction for numerical stability."""
    shifted = scores - scores.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _log_softmax(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=1, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))


def loss_and_gradient(
    W: np.ndarray,
    b: np.ndarray,
    X: scipy.sparse.csr_matrix,
    y: np.ndarray,
    sample_weights: np.ndarray,
    C: float,
) -> tuple[float, tuple[np.ndarray, np.ndarray]]:
    """Objective value and exact gradient at (W, b).

    ``sample_weights`` holds s_{y_i} per sample. With zero samples the result
    is the regularizer alone: J = 0.5*||W||^2, dJ/dW = W, dJ/db = 0.
    """
    n = X.shape[0]
    reg = 0.5 * float((W * W).sum())
    if n == 0:
        return reg, (W.copy(), np.zeros_like(b))
    scores = X @ W.T + b
    log_probs = _log_softmax(scores)
    rows = np.arange(n)
    data_term = -float((sample_weights * log_probs[rows, y]).sum())
    loss = reg + C * data_term

    G = np.exp(log_probs)
    G[rows, y] -= 1.0
    G *= (C * sample_weights)[:, None]
    grad_W = (X.T @ G).T + W
    grad_b = G.sum(axis=0)
    return loss, (grad_W, grad_b)


def to_csr(matrix: FeatureMatrix) -> scipy.sparse.csr_matrix:
    """Convert a FeatureMatrix to scipy CSR with shape (n_docs, |vocab|)."""
    data, indices, indptr = [], [], [0]
    for row in matrix.rows:
        for j, value in row:
            indices.append(j)
            data.append(value)
        indptr.append(len(indices))
    return scipy.sparse.csr_matrix(
        (np.asarray(data, dtype=float), np.asarray(indices, dtype=np.int32),
         np.asarray(indptr, dtype=np.int32)),
        shape=(matrix.n_docs, len(matrix.vocabulary)),
    )


def train(
    matrix: FeatureMatrix,
    y_labels: Sequence[str],
    config: MlrConfig,
    label_order: Sequence[str] | None = None,
) -> MlrModel:
    """Fit the classifier on a feature matrix.

    Starts from all-zero parameters and runs L-BFGS-B on the hand-written
    loss/gradient until the projected gradient infinity norm drops below
    ``config.tolerance`` or ``config.max_iterations`` is hit. The recorded
    loss history must be non-increasing; a violation raises RuntimeError.
    """
    if matrix.n_docs == 0:
        raise DataError("cannot train on an empty feature matrix")
    if matrix.n_docs != len(y_labels):
        raise DataError(
            f"feature matrix has {matrix.n_docs} rows but {len(y_labels)} labels given"
        )
    labels = tuple(label_order) if label_order is not None else tuple(sorted(set(y_labels)))
    label_index = {lab: i for i, lab in enumerate(labels)}
    try:
        y = np.array([label_index[lab] for lab in y_labels], dtype=int)
    except KeyError as exc:
        raise DataError(f"training label {exc.args[0]!r} not in label order {labels}") from None

    K, V = len(labels), len(matrix.vocabulary)
    X = to_csr(matrix)
    class_weights = compute_class_weights(y, K, config.class_weight)
    sample_weights = class_weights[y]

    def objective(params: np.ndarray) -> tuple[float, np.ndarray]:
        W = params[: K * V].reshape(K, V)
        b = params[K * V:]
        loss, (grad_W, grad_b) = loss_and_gradient(W, b, X, y, sample_weights, config.C)
        return loss, np.concatenate([grad_W.ravel(), grad_b])

    history: list[float] = []

    def record(params: np.ndarray) -> None:
        loss = objective(params)[0]
        if history and loss > history[-1] + 1e-9 * max(1.0, abs(history[-1])):
            raise RuntimeError(
                f"loss increased between iterations: {history[-1]} -> {loss}"
            )
        history.append(loss)

    x0 = np.zeros(K * (V + 1))
    record(x0)
    result = scipy.optimize.minimize(
        objective,
        x0,
        jac=True,
        method="L-BFGS-B",
        callback=record,
        options={
            "maxiter": config.max_iterations,
            "gtol": config.tolerance,
            "ftol": 1e-12,
        },
    )
    params = result.x
    W = params[: K * V].reshape(K, V)
    b = params[K * V:]
    final_grad = objective(params)[1]
    converged = bool(np.abs(final_grad).max() <= config.tolerance) or bool(result.success)
    return MlrModel(
        weights=W,
        biases=b,
        labels=labels,
        vocab_fingerprint=matrix.vocabulary.fingerprint(),
        config=config,
        converged=converged,
        n_iter=int(result.nit),
        loss_history=history,
    )


def _check_binding(model: MlrModel, matrix: FeatureMatrix) -> None:
    if matrix.vocabulary.fingerprint() != model.vocab_fingerprint:
        raise DataError(
            "feature matrix was built with a different vocabulary than the model "
            "(fingerprint mismatch)"
        )


def decision_scores(model: MlrModel, matrix: FeatureMatrix) -> np.ndarray:
    _check_binding(model, matrix)
    X = to_csr(matrix)
    return X @ model.weights.T + model.biases


def predict_proba(model: MlrModel, matrix: FeatureMatrix) -> np.ndarray:
    """Class probabilities, rows summing to 1."""
    return softmax(decision_scores(model, matrix))


def predict(model: MlrModel, matrix: FeatureMatrix) -> list[str]:
    """Most probable label per row; score ties go to the lowest label index."""
    scores = decision_scores(model, matrix)
    return [model.labels[i] for i in scores.argmax(axis=1)]


@dataclass(frozen=True)
class SavedModel:
    """A model together with the preprocessing state it was trained with."""

    model: MlrModel
    vocabulary: Vocabulary
    vectorizer_config: VectorizerConfig
    normalizer_techniques: tuple[int, ...]
    removal_list: frozenset[str]


def save_model(
    model: MlrModel,
    vocabulary: Vocabulary,
    vectorizer_config: VectorizerConfig,
    path: str | Path,
    normalizer_techniques: Sequence[int] = (),
    removal_list: frozenset[str] = frozenset(),
) -> None:
    """Serialize model + vocabulary + preprocessing settings as canonical JSON.

    The output is byte-identical for identical inputs: keys are sorted and no
    timestamps or environment details are recorded.
    """
    if vocabulary.fingerprint() != model.vocab_fingerprint:
        raise DataError("vocabulary does not match the model's fingerprint")
    payload = {
        "format": MODEL_FORMAT,
        "labels": list(model.labels),
        "weights": model.weights.tolist(),
        "biases": model.biases.tolist(),
        "vocab_fingerprint": model.vocab_fingerprint,
        "mlr_config": {
            "C": model.config.C,
            "class_weight": model.config.class_weight,
            "max_iterations": model.config.max_iterations,
            "tolerance": model.config.tolerance,
        },
        "vectorizer_config": {
            "weighting": vectorizer_config.weighting,
            "ngram_range": list(vectorizer_config.ngram_range),
            "n_features": vectorizer_config.n_features,
        },
        "vocabulary": {
            "features": list(vocabulary.features),
            "df": list(vocabulary.df),
            "tf_total": list(vocabulary.tf_total),
            "n_docs": vocabulary.n_docs,
            "ngram_range": list(vocabulary.ngram_range),
        },
        "normalizer_techniques": sorted(normalizer_techniques),
        "removal_list": sorted(removal_list),
        "converged": model.converged,
        "n_iter": model.n_iter,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=1),
                    encoding="utf-8")


def load_model(path: str | Path) -> SavedModel:
    """Load a saved model, re-verifying the vocabulary fingerprint."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read model {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"model {path} is not valid JSON: {exc}") from exc
    if payload.get("format") != MODEL_FORMAT:
        raise DataError(f"model {path}: unknown format {payload.get('format')!r}")
    try:
        vocab_data = payload["vocabulary"]
        vocabulary = Vocabulary(
            features=tuple(vocab_data["features"]),
            df=tuple(vocab_data["df"]),
            tf_total=tuple(vocab_data["tf_total"]),
            n_docs=vocab_data["n_docs"],
            ngram_range=tuple(vocab_data["ngram_range"]),
        )
        config = MlrConfig(**payload["mlr_config"])
        vec_data = payload["vectorizer_config"]
        vectorizer_config = VectorizerConfig(
            weighting=vec_data["weighting"],
            ngram_range=tuple(vec_data["ngram_range"]),
            n_features=vec_data["n_features"],
        )
        model = MlrModel(
            weights=np.array(payload["weights"], dtype=float),
            biases=np.array(payload["biases"], dtype=float),
            labels=tuple(payload["labels"]),
            vocab_fingerprint=payload["vocab_fingerprint"],
            config=config,
            converged=payload["converged"],
            n_iter=payload["n_iter"],
        )
        techniques = tuple(payload["normalizer_techniques"])
        removal_list = frozenset(payload["removal_list"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"model {path} is malformed: {exc}") from exc
    if vocabulary.fingerprint() != model.vocab_fingerprint:
        raise DataError(f"model {path}: vocabulary does not match its fingerprint")
    if model.weights.shape != (len(model.labels), len(vocabulary)):
        raise DataError(
            f"model {path}: weight matrix shape {model.weights.shape} does not match "
            f"{len(model.labels)} labels x {len(vocabulary)} features"
        )
    return SavedModel(
        model=model,
        vocabulary=vocabulary,
        vectorizer_config=vectorizer_config,
        normalizer_techniques=techniques,
        removal_list=removal_list,
    )
