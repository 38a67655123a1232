"""Synthetic corpus generators for tests, demos and benchmarks.

Three families:

 * separable: per-class disjoint vocabularies, for optimizer sanity checks
 * emotive: Vietnamese-flavored comments where part of the signal is carried
   only by emoticons/emoji, for comparing normalization strategies
 * stopword: a corpus with injected label-correlated noise tokens that the
   ablation search should discover and remove

All generators are deterministic given a seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .corpus import EMOTION_LABELS, LabeledComment

FILLER_WORDS = (
    "hôm", "nay", "mọi", "người", "cái", "này", "thật", "là", "rất", "quá",
)

# Per class: content words for word-signal docs, and an emotive whose shipped
# translation introduces class-unique tokens once demojized + translated.
EMOTION_WORDS = {
    "Enjoyment": ("vui", "thích"),
    "Sadness": ("buồn", "nhớ"),
    "Anger": ("tức", "bực"),
    "Fear": ("sợ", "run"),
    "Disgust": ("ghê", "gớm"),
    "Surprise": ("sốc", "ngờ"),
    "Other": ("hỏi", "giá"),
}
EMOTION_EMOTIVES = {
    "Enjoyment": "😂",
    "Sadness": "😢",
    "Anger": "😠",
    "Fear": "😱",
    "Disgust": "🤮",
    "Surprise": "😲",
    "Other": "👍",
}


def make_separable_corpus(
    n_train_per_class: int = 20,
    n_dev_per_class: int = 5,
    tokens_per_class: int = 8,
    doc_len: tuple[int, int] = (3, 6),
    seed: int = 0,
) -> tuple[list[LabeledComment], list[LabeledComment]]:
    """Seven classes with fully disjoint vocabularies: trivially separable."""
    rng = random.Random(seed)
    vocab = {
        label: [f"{label.lower()}{k}" for k in range(tokens_per_class)]
        for label in EMOTION_LABELS
    }

    def make_doc(label: str) -> str:
        n = rng.randint(*doc_len)
        return " ".join(rng.choice(vocab[label]) for _ in range(n))

    train, dev = [], []
    for label in EMOTION_LABELS:
        for i in range(n_train_per_class):
            train.append(LabeledComment(f"train:{label}:{i}", make_doc(label), label))
        for i in range(n_dev_per_class):
            dev.append(LabeledComment(f"dev:{label}:{i}", make_doc(label), label))
    return train, dev


def make_emotive_corpus(
    n_per_class: int = 100,
    emotive_fraction: float = 0.3,
    seed: int = 0,
) -> list[LabeledComment]:
    """Comments where ``emotive_fraction`` of each class carries its signal
    only in an emoticon/emoji; the rest use class content words.

    Emotives are taken from the packaged lexicons, so demojize + translate
    turns them into class-unique Vietnamese tokens, while deleting them (or
    leaving them raw, which the word tokenizer cannot see) loses the signal.
    """
    rng = random.Random(seed)
    comments = []
    n_emotive = round(n_per_class * emotive_fraction)
    for label in EMOTION_LABELS:
        for i in range(n_per_class):
            fillers = [rng.choice(FILLER_WORDS) for _ in range(rng.randint(3, 5))]
            if i < n_emotive:
                emotive = EMOTION_EMOTIVES[label]
                if rng.random() < 0.3:
                    emotive = emotive * 2
                position = rng.randrange(len(fillers) + 1)
                fillers.insert(position, emotive)
                text = " ".join(fillers)
            else:
                words = [rng.choice(EMOTION_WORDS[label])]
                if rng.random() < 0.5:
                    words.append(rng.choice(EMOTION_WORDS[label]))
                position = rng.randrange(len(fillers) + 1)
                fillers[position:position] = words
                text = " ".join(fillers)
            comments.append(LabeledComment(f"synth:{label}:{i}", text, label))
    return comments


def split_per_class(
    comments: list[LabeledComment], train_fraction: float = 0.8
) -> tuple[list[LabeledComment], list[LabeledComment]]:
    """Deterministic stratified split, interleaved within each class.

    Every k-th comment of a class goes to dev (k from train_fraction), so
    subpopulations laid out in blocks stay proportionally represented in
    both partitions.
    """
    k = max(2, round(1.0 / (1.0 - train_fraction)))
    by_label: dict[str, list[LabeledComment]] = {}
    for comment in comments:
        by_label.setdefault(comment.label, []).append(comment)
    train, dev = [], []
    for label in sorted(by_label):
        for i, comment in enumerate(by_label[label]):
            (dev if i % k == 0 else train).append(comment)
    return train, dev


@dataclass(frozen=True)
class StopwordScenario:
    """A corpus with planted noise for exercising the ablation search."""

    train_texts: tuple[str, ...]
    train_labels: tuple[str, ...]
    dev_texts: tuple[str, ...]
    dev_labels: tuple[str, ...]
    noise_tokens: tuple[str, ...]
    correlated_tokens: tuple[str, ...]


def make_stopword_corpus(
    n_train_per_class: int = 30,
    noise_reps_home: int = 3,
    noise_reps_dev: int = 4,
) -> StopwordScenario:
    """Build a corpus where exactly five noise tokens hurt dev classification.

    Ten planted tokens (5 noise + 5 class-correlated) each appear at least
    five times under every label, so the frequency criteria admit exactly
    them: per-class signal words never occur outside their own class. Noise
    tokens are concentrated in a home class at train time but attached to
    other classes' dev docs, so ablating one improves dev F1. Correlated
    tokens genuinely carry class signal: two of them are all some dev docs
    have to go on (ablation hurts), the other three never occur in dev
    (ablation is permanently neutral, which is what forces the search to end
    by stagnation rather than by exhausting its test list).
    """
    labels = EMOTION_LABELS
    noise = tuple(f"noise{j}" for j in range(5))
    correlated = tuple(f"tkep{j}" for j in range(5))
    correlated_home = {3: "tkep0", 4: "tkep1", 0: "tkep2", 1: "tkep3", 2: "tkep4"}
    dev_reliant = {3: "tkep0", 4: "tkep1"}
    signal = {label: f"sig{c}" for c, label in enumerate(labels)}

    train_texts: list[str] = []
    train_labels: list[str] = []
    for c, label in enumerate(labels):
        for i in range(n_train_per_class):
            words = [signal[label], signal[label]]
            for home, token in correlated_home.items():
                if c == home and i < 20:
                    words += [token] * 2
                elif c != home and 25 <= i < 30:
                    words.append(token)
            for j, noise_token in enumerate(noise):
                if c == j and i < 25:
                    words += [noise_token] * noise_reps_home
                elif c != j and 25 <= i < 30:
                    words.append(noise_token)
            train_texts.append(" ".join(words))
            train_labels.append(label)

    dev_texts: list[str] = []
    dev_labels: list[str] = []
    for c, label in enumerate(labels):
        for i in range(10):
            if i < 4 and c in dev_reliant:
                words = [dev_reliant[c]] * 2
            elif i < 7:
                words = [signal[label]] * 2
            else:
                j = (c + i - 6) % 5
                words = [signal[label]] + [noise[j]] * noise_reps_dev
            dev_texts.append(" ".join(words))
            dev_labels.append(label)

    return StopwordScenario(
        train_texts=tuple(train_texts),
        train_labels=tuple(train_labels),
        dev_texts=tuple(dev_texts),
        dev_labels=tuple(dev_labels),
        noise_tokens=noise,
        correlated_tokens=correlated,
    )


def make_fuzz_comments(n: int = 100, seed: int = 0) -> list[str]:
    """Random punctuated comments for clause-extraction fuzzing."""
    rng = random.Random(seed)
    words = list(FILLER_WORDS) + [w for pair in EMOTION_WORDS.values() for w in pair]
    connectors = ["nhưng", "mà", "và", "but", "and"]
    comments = []
    for _ in range(n):
        parts = []
        for _ in range(rng.randint(1, 4)):
            segment = " ".join(rng.choice(words) for _ in range(rng.randint(1, 6)))
            parts.append(segment)
        text = ""
        for i, segment in enumerate(parts):
            if i == 0:
                text = segment
            elif rng.random() < 0.5:
                text += rng.choice([", ", ". ", "; "]) + segment
            else:
                text += " " + rng.choice(connectors) + " " + segment
        comments.append(text)
    return comments
