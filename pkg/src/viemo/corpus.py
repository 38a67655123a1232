"""Loading, validation and persistence of labeled comment corpora.

A corpus is a list of (id, text, label) records stored as CSV or TSV with a
header row. Labels use the seven canonical emotion names in EMOTION_LABELS;
parsing is case-insensitive but everything downstream sees canonical casing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError

EMOTION_LABELS = (
    "Enjoyment",
    "Sadness",
    "Anger",
    "Fear",
    "Disgust",
    "Surprise",
    "Other",
)

_CANONICAL = {name.lower(): name for name in EMOTION_LABELS}

DEFAULT_TEXT_COLUMN = "Sentence"
DEFAULT_LABEL_COLUMN = "Emotion"
_ID_COLUMN_NAMES = ("id", "index")


def parse_label(raw: str) -> str:
    """Return the canonical emotion name for ``raw`` (case-insensitive)."""
    name = _CANONICAL.get(raw.strip().lower())
    if name is None:
        raise DataError(
            f"unknown emotion label {raw!r}; expected one of {', '.join(EMOTION_LABELS)}"
        )
    return name


@dataclass(frozen=True)
class LabeledComment:
    """One comment with its gold emotion label."""

    id: str
    text: str
    label: str

    def __post_init__(self) -> None:
        if self.label not in EMOTION_LABELS:
            raise DataError(
                f"comment {self.id!r}: label {self.label!r} is not canonical"
            )


@dataclass(frozen=True)
class CorpusSplit:
    """Train/dev/test partition with globally unique comment ids."""

    train: tuple[LabeledComment, ...]
    dev: tuple[LabeledComment, ...]
    test: tuple[LabeledComment, ...]

    def __post_init__(self) -> None:
        seen: dict[str, str] = {}
        for part_name, part in (("train", self.train), ("dev", self.dev), ("test", self.test)):
            for comment in part:
                if comment.id in seen:
                    raise DataError(
                        f"duplicate comment id {comment.id!r} in {part_name} "
                        f"(already used in {seen[comment.id]})"
                    )
                seen[comment.id] = part_name


def _reader(handle, fmt: str):
    if fmt == "csv":
        return csv.reader(handle)
    if fmt == "tsv":
        return csv.reader(handle, delimiter="\t", quoting=csv.QUOTE_NONE)
    raise DataError(f"unknown corpus format {fmt!r}; expected 'csv' or 'tsv'")


def load_corpus(
    path: str | Path,
    fmt: str = "csv",
    text_column: str = DEFAULT_TEXT_COLUMN,
    label_column: str = DEFAULT_LABEL_COLUMN,
    id_prefix: str = "",
) -> list[LabeledComment]:
    """Read a labeled corpus file.

    The header must contain ``text_column`` and ``label_column``. An id column
    (named ``id`` or ``index``, any casing) is used when present; otherwise ids
    are synthesized as ``id_prefix`` + row ordinal, so callers loading several
    files should pass distinct prefixes to keep ids unique across splits.
    Rows with empty text or an unknown label raise DataError with the
    1-based data row number.
    """
    path = Path(path)
    try:
        handle = path.open(encoding="utf-8", newline="")
    except OSError as exc:
        raise DataError(f"cannot read corpus {path}: {exc}") from exc
    with handle:
        reader = _reader(handle, fmt)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file, expected a header row") from None
        columns = {name: i for i, name in enumerate(header)}
        if text_column not in columns:
            raise DataError(f"{path}: missing text column {text_column!r} in header {header}")
        if label_column not in columns:
            raise DataError(f"{path}: missing label column {label_column!r} in header {header}")
        text_idx = columns[text_column]
        label_idx = columns[label_column]
        id_idx = next(
            (i for name, i in columns.items() if name.lower() in _ID_COLUMN_NAMES), None
        )

        comments: list[LabeledComment] = []
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) <= max(text_idx, label_idx):
                raise DataError(f"{path}: row {row_no}: expected {len(header)} columns, got {len(row)}")
            text = row[text_idx]
            if not text.strip():
                raise DataError(f"{path}: row {row_no}: empty text")
            try:
                label = parse_label(row[label_idx])
            except DataError as exc:
                raise DataError(f"{path}: row {row_no}: {exc}") from None
            cid = row[id_idx] if id_idx is not None else f"{id_prefix}{row_no - 1}"
            comments.append(LabeledComment(id=cid, text=text, label=label))
    return comments


def save_corpus(
    comments: Iterable[LabeledComment],
    path: str | Path,
    fmt: str = "csv",
    text_column: str = DEFAULT_TEXT_COLUMN,
    label_column: str = DEFAULT_LABEL_COLUMN,
) -> None:
    """Write comments as CSV/TSV with columns id, label, text (in that order)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        if fmt == "csv":
            writer = csv.writer(handle)
        elif fmt == "tsv":
            writer = csv.writer(handle, delimiter="\t", quoting=csv.QUOTE_NONE)
        else:
            raise DataError(f"unknown corpus format {fmt!r}; expected 'csv' or 'tsv'")
        writer.writerow(["Id", label_column, text_column])
        for comment in comments:
            try:
                writer.writerow([comment.id, comment.label, comment.text])
            except csv.Error as exc:
                raise DataError(
                    f"cannot write comment {comment.id!r} as {fmt}: {exc}"
                ) from exc


def load_split(
    train_path: str | Path,
    dev_path: str | Path | None = None,
    test_path: str | Path | None = None,
    fmt: str = "csv",
    text_column: str = DEFAULT_TEXT_COLUMN,
    label_column: str = DEFAULT_LABEL_COLUMN,
) -> CorpusSplit:
    """Load up to three corpus files into a validated CorpusSplit."""
    def load(path, prefix):
        if path is None:
            return ()
        return tuple(
            load_corpus(path, fmt=fmt, text_column=text_column,
                        label_column=label_column, id_prefix=prefix)
        )

    return CorpusSplit(
        train=load(train_path, "train:"),
        dev=load(dev_path, "dev:"),
        test=load(test_path, "test:"),
    )


def texts(comments: Sequence[LabeledComment]) -> list[str]:
    return [c.text for c in comments]


def labels(comments: Sequence[LabeledComment]) -> list[str]:
    return [c.label for c in comments]
