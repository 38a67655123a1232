"""Clause segmentation and key-clause extraction.

Comments are split into clauses at commas, periods and semicolons, and before
coordinating conjunctions (the conjunction opens the next clause). Clauses
shorter than four word tokens are merged into a neighbor, preferring the one
on the left. The key clause is the last clause containing an important word;
if no clause matches, extraction abstains and the full comment is used.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .corpus import LabeledComment
from .vectorize import ngrams, tokenize

_SEPARATOR_RE = re.compile(r"([,.;]+)")

MIN_CLAUSE_TOKENS = 4


def default_conjunctions_path() -> Path:
    return Path(str(resources.files("viemo").joinpath("data/keyclause/conjunctions.txt")))


def default_important_words_path() -> Path:
    return Path(str(resources.files("viemo").joinpath("data/keyclause/important_words.txt")))


def load_word_list(path: str | Path) -> tuple[str, ...]:
    """Read a word/phrase list: one entry per line, '#' comments, lowercased."""
    entries = []
    with Path(path).open(encoding="utf-8") as handle:
        for line in handle:
            entry = " ".join(line.split()).lower()
            if entry and not entry.startswith("#"):
                entries.append(entry)
    return tuple(entries)


def save_word_list(words: Iterable[str], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{w}\n" for w in words), encoding="utf-8")


@dataclass(frozen=True)
class ClauseSplit:
    """Clauses of one comment plus the separators between them."""

    original: str
    clauses: tuple[str, ...]
    separators: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.clauses and len(self.separators) != len(self.clauses) - 1:
            raise ValueError("need exactly one separator between consecutive clauses")


def _conjunction_phrases(conjunctions: Sequence[str]) -> list[list[str]]:
    phrases = [c.split() for c in conjunctions if c.strip()]
    phrases.sort(key=len, reverse=True)
    return phrases


def _split_on_conjunctions(chunk: str, phrases: list[list[str]]) -> list[str]:
    """Split a punctuation-free chunk before each conjunction occurrence."""
    words = chunk.split()
    out: list[str] = []
    current: list[str] = []
    i = 0
    while i < len(words):
        matched = None
        if current:
            for phrase in phrases:
                candidate = [w.lower() for w in words[i:i + len(phrase)]]
                if candidate == phrase:
                    matched = phrase
                    break
        if matched:
            out.append(" ".join(current))
            current = list(words[i:i + len(matched)])
            i += len(matched)
        else:
            current.append(words[i])
            i += 1
    if current:
        out.append(" ".join(current))
    return out


def _clause_length(clause: str) -> int:
    return len(tokenize(clause))


def split_clauses(text: str, conjunctions: Sequence[str] = ()) -> ClauseSplit:
    """Segment ``text`` into clauses of at least MIN_CLAUSE_TOKENS tokens.

    Too-short clauses are merged repeatedly (scanning left to right, merging
    into the left neighbor when one exists, else the right) until every
    clause is long enough or only one clause remains.
    """
    phrases = _conjunction_phrases(conjunctions)
    clauses: list[str] = []
    separators: list[str] = []
    pending_sep = ""
    for i, part in enumerate(_SEPARATOR_RE.split(text)):
        if i % 2 == 1:
            pending_sep += part
            continue
        for sub in _split_on_conjunctions(part, phrases):
            if clauses:
                separators.append(pending_sep)
            clauses.append(sub)
            pending_sep = ""

    while len(clauses) > 1:
        short = next(
            (i for i, c in enumerate(clauses) if _clause_length(c) < MIN_CLAUSE_TOKENS),
            None,
        )
        if short is None:
            break
        if short > 0:
            clauses[short - 1] = f"{clauses[short - 1]} {clauses[short]}"
            del clauses[short]
            del separators[short - 1]
        else:
            clauses[1] = f"{clauses[0]} {clauses[1]}"
            del clauses[0]
            del separators[0]

    return ClauseSplit(original=text, clauses=tuple(clauses), separators=tuple(separators))


def _contains_phrase(clause_tokens: list[str], phrase_tokens: list[str]) -> bool:
    if not phrase_tokens or len(phrase_tokens) > len(clause_tokens):
        return False
    span = len(phrase_tokens)
    return any(
        clause_tokens[i:i + span] == phrase_tokens
        for i in range(len(clause_tokens) - span + 1)
    )


def contains_important_word(clause: str, important_words: Sequence[str]) -> bool:
    """True if any important word/phrase occurs as consecutive tokens."""
    clause_tokens = tokenize(clause)
    return any(
        _contains_phrase(clause_tokens, tokenize(word)) for word in important_words
    )


def extract_key_clause(
    text: str,
    important_words: Sequence[str],
    conjunctions: Sequence[str] = (),
) -> str:
    """The last clause containing an important word, or ``text`` unchanged.

    A comment that segments into a single clause is reduced to that clause
    without consulting the important-word list.
    """
    split = split_clauses(text, conjunctions)
    if len(split.clauses) == 1:
        return split.clauses[0]
    matching = [c for c in split.clauses if contains_important_word(c, important_words)]
    if matching:
        return matching[-1]
    return text


def mine_important_words(
    comments: Sequence[LabeledComment],
    classify: Callable[[str], str],
    conjunctions: Sequence[str] = (),
    min_count: int = 5,
    min_lift: float = 1.5,
    ngram_range: tuple[int, int] = (1, 3),
) -> tuple[str, ...]:
    """Mine words/phrases that mark correctly classified clauses.

    Each clause is classified on its own; an n-gram is important when it
    occurs in at least ``min_count`` correctly classified clauses and its
    rate there exceeds ``min_lift`` times its rate in misclassified clauses.
    Results are ordered by descending correct-clause count, ties alphabetical.
    """
    correct_counts: Counter[str] = Counter()
    wrong_counts: Counter[str] = Counter()
    n_correct = 0
    n_wrong = 0
    for comment in comments:
        for clause in split_clauses(comment.text, conjunctions).clauses:
            grams = set(ngrams(tokenize(clause), ngram_range))
            if classify(clause) == comment.label:
                n_correct += 1
                correct_counts.update(grams)
            else:
                n_wrong += 1
                wrong_counts.update(grams)

    def lift(gram: str) -> float:
        correct_rate = correct_counts[gram] / n_correct
        wrong = wrong_counts.get(gram, 0)
        if n_wrong == 0 or wrong == 0:
            return float("inf")
        return correct_rate / (wrong / n_wrong)

    mined = [
        gram
        for gram, count in correct_counts.items()
        if count >= min_count and lift(gram) >= min_lift
    ]
    mined.sort(key=lambda g: (-correct_counts[g], g))
    return tuple(mined)
