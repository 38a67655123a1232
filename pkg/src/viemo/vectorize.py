"""Token n-gram features with count or TF-IDF weighting.

Tokens are maximal runs of word characters (letters, digits, underscore),
lowercased. N-grams are space-joined windows of consecutive tokens, emitted
in (position, length) order. The vocabulary keeps the ``n_features`` most
frequent n-grams by total term frequency, breaking ties toward the
lexicographically smaller string.
"""

from __future__ import annotations

import hashlib
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ConfigError, DataError

TOKEN_RE = re.compile(r"\w+")

MAX_NGRAM = 3


def tokenize(text: str) -> list[str]:
    """Lowercased word tokens; everything else is a separator."""
    return [t.lower() for t in TOKEN_RE.findall(text)]


def ngrams(tokens: Sequence[str], ngram_range: tuple[int, int]) -> list[str]:
    """Space-joined n-grams for n in [lo, hi], in (position, length) order."""
    lo, hi = ngram_range
    out = []
    for i in range(len(tokens)):
        for n in range(lo, hi + 1):
            if i + n > len(tokens):
                break
            out.append(" ".join(tokens[i:i + n]))
    return out


@dataclass(frozen=True)
class VectorizerConfig:
    weighting: str = "tfidf"
    ngram_range: tuple[int, int] = (1, 1)
    n_features: int = 25000

    def __post_init__(self) -> None:
        object.__setattr__(self, "ngram_range", tuple(self.ngram_range))
        if self.weighting not in ("count", "tfidf"):
            raise ConfigError(f"weighting must be 'count' or 'tfidf', got {self.weighting!r}")
        lo, hi = self.ngram_range
        if not (1 <= lo <= hi <= MAX_NGRAM):
            raise ConfigError(
                f"ngram_range must satisfy 1 <= lo <= hi <= {MAX_NGRAM}, got {self.ngram_range}"
            )
        if self.n_features < 1:
            raise ConfigError(f"n_features must be positive, got {self.n_features}")


@dataclass(frozen=True)
class Vocabulary:
    """Fitted feature set with the statistics needed for TF-IDF."""

    features: tuple[str, ...]
    df: tuple[int, ...]
    tf_total: tuple[int, ...]
    n_docs: int
    ngram_range: tuple[int, int]

    def __len__(self) -> int:
        return len(self.features)

    @cached_property
    def index(self) -> dict[str, int]:
        return {feature: i for i, feature in enumerate(self.features)}

    def idf(self, feature_index: int) -> float:
        """Smoothed inverse document frequency: ln((1+N)/(1+df)) + 1."""
        return math.log((1 + self.n_docs) / (1 + self.df[feature_index])) + 1.0

    def fingerprint(self) -> str:
        """SHA-256 over the full vocabulary contents, for model binding."""
        digest = hashlib.sha256()
        digest.update(f"n_docs={self.n_docs}\n".encode())
        digest.update(f"ngram_range={self.ngram_range[0]}:{self.ngram_range[1]}\n".encode())
        for feature, df, tf in zip(self.features, self.df, self.tf_total):
            digest.update(f"{feature}\t{df}\t{tf}\n".encode())
        return digest.hexdigest()


@dataclass(frozen=True)
class FeatureMatrix:
    """Sparse document-feature matrix: per-row (index, value) pairs."""

    rows: tuple[tuple[tuple[int, float], ...], ...]
    vocabulary: Vocabulary
    weighting: str

    @property
    def n_docs(self) -> int:
        return len(self.rows)

    def to_dense(self) -> list[list[float]]:
        width = len(self.vocabulary)
        dense = []
        for row in self.rows:
            values = [0.0] * width
            for j, value in row:
                values[j] = value
            dense.append(values)
        return dense


def _doc_ngrams(doc: str, ngram_range: tuple[int, int],
                removal: frozenset[str] = frozenset()) -> list[str]:
    tokens = tokenize(doc)
    if removal:
        tokens = [t for t in tokens if t not in removal]
    return ngrams(tokens, ngram_range)


def fit_vocabulary(docs: Sequence[str], config: VectorizerConfig) -> Vocabulary:
    """Count n-grams over ``docs`` and keep the top ``n_features``.

    Ranking is by descending total term frequency, ties broken toward the
    lexicographically smaller n-gram, so fits are deterministic and the
    vocabulary at a smaller n_features is a subset of the one at a larger.
    """
    tf_total: Counter[str] = Counter()
    df: Counter[str] = Counter()
    for doc in docs:
        grams = _doc_ngrams(doc, config.ngram_range)
        tf_total.update(grams)
        df.update(set(grams))
    ranked = sorted(tf_total, key=lambda g: (-tf_total[g], g))[: config.n_features]
    return Vocabulary(
        features=tuple(ranked),
        df=tuple(df[g] for g in ranked),
        tf_total=tuple(tf_total[g] for g in ranked),
        n_docs=len(docs),
        ngram_range=config.ngram_range,
    )


def transform(docs: Sequence[str], vocabulary: Vocabulary, weighting: str = "tfidf",
              removal: frozenset[str] = frozenset()) -> FeatureMatrix:
    """Vectorize documents against a fitted vocabulary.

    ``removal`` drops tokens before n-gram extraction (stopword filtering at
    feature-extraction time). Unknown n-grams are ignored. With "tfidf" each
    row is count * idf, L2-normalized; all-zero rows stay zero.
    """
    if weighting not in ("count", "tfidf"):
        raise ConfigError(f"weighting must be 'count' or 'tfidf', got {weighting!r}")
    index = vocabulary.index
    rows = []
    for doc in docs:
        counts: Counter[int] = Counter()
        for gram in _doc_ngrams(doc, vocabulary.ngram_range, removal):
            j = index.get(gram)
            if j is not None:
                counts[j] += 1
        if weighting == "count":
            row = tuple(sorted((j, float(c)) for j, c in counts.items()))
        else:
            weighted = [(j, c * vocabulary.idf(j)) for j, c in counts.items()]
            norm = math.sqrt(sum(v * v for _, v in weighted))
            if norm > 0.0:
                weighted = [(j, v / norm) for j, v in weighted]
            row = tuple(sorted(weighted))
        rows.append(row)
    return FeatureMatrix(rows=tuple(rows), vocabulary=vocabulary, weighting=weighting)


def save_vocabulary(vocabulary: Vocabulary, path: str | Path) -> None:
    """Write a vocabulary as TSV (feature, df, tf_total) with a small header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lo, hi = vocabulary.ngram_range
    with path.open("w", encoding="utf-8") as handle:
        handle.write("# viemo vocabulary v1\n")
        handle.write(f"# n_docs={vocabulary.n_docs}\n")
        handle.write(f"# ngram_range={lo}:{hi}\n")
        for feature, df, tf in zip(vocabulary.features, vocabulary.df, vocabulary.tf_total):
            handle.write(f"{feature}\t{df}\t{tf}\n")


def load_vocabulary(path: str | Path) -> Vocabulary:
    path = Path(path)
    n_docs = None
    ngram_range = None
    features: list[str] = []
    df: list[int] = []
    tf_total: list[int] = []
    try:
        handle = path.open(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read vocabulary {path}: {exc}") from exc
    with handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("n_docs="):
                    n_docs = int(body.removeprefix("n_docs="))
                elif body.startswith("ngram_range="):
                    lo, _, hi = body.removeprefix("ngram_range=").partition(":")
                    ngram_range = (int(lo), int(hi))
                continue
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataError(f"{path}:{line_no}: expected 3 columns, got {len(parts)}")
            features.append(parts[0])
            df.append(int(parts[1]))
            tf_total.append(int(parts[2]))
    if n_docs is None or ngram_range is None:
        raise DataError(f"{path}: missing n_docs / ngram_range header lines")
    return Vocabulary(
        features=tuple(features),
        df=tuple(df),
        tf_total=tuple(tf_total),
        n_docs=n_docs,
        ngram_range=ngram_range,
    )
