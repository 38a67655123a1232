"""Microtext normalization for Vietnamese social-media comments.

Six numbered techniques, applied in ascending order:

    1  collapse runs of a repeated character ("hicc" -> "hic", ":))))" -> ":)")
    2  remove emoticons and emoji
    3  replace emoticons and emoji by their word forms (":)" -> ":slightly_smiling_face:")
    4  like 3, but keep only the first occurrence of each word form
    5  translate word forms to Vietnamese (":crying_face:" -> "khóc")
    6  correct misspellings and acronyms token by token ("pk" -> "biết")

2, 3 and 4 are mutually exclusive; 5 needs 3 or 4 before it. Stopword removal
(technique 7 in experiment configurations) is not a text transform: it filters
tokens at feature-extraction time and lives in the vectorizer/pipeline layer.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .corpus import LabeledComment
from .errors import ConfigError
from .lexicons import WORD_FORM_RE, LexiconSet

TECHNIQUE_NAMES = {
    1: "collapse_runs",
    2: "strip_emotives",
    3: "demojize",
    4: "demojize_dedup",
    5: "translate_word_forms",
    6: "correct_spelling",
}

_RUN_RE = re.compile(r"(.)\1+", re.DOTALL)
_MULTISPACE_RE = re.compile(r" {2,}")


@dataclass
class NormalizeReport:
    """Counts of edits made while normalizing one text or a whole corpus."""

    runs_collapsed: int = 0
    emotives_removed: int = 0
    emotives_transformed: int = 0
    emotive_duplicates_dropped: int = 0
    word_forms_translated: int = 0
    tokens_corrected: int = 0
    unmapped_word_forms: Counter = field(default_factory=Counter)

    def to_dict(self) -> dict:
        return {
            "runs_collapsed": self.runs_collapsed,
            "emotives_removed": self.emotives_removed,
            "emotives_transformed": self.emotives_transformed,
            "emotive_duplicates_dropped": self.emotive_duplicates_dropped,
            "word_forms_translated": self.word_forms_translated,
            "tokens_corrected": self.tokens_corrected,
            "unmapped_word_forms": dict(sorted(self.unmapped_word_forms.items())),
        }


@dataclass(frozen=True)
class NormalizerConfig:
    """Which techniques to apply, plus the lexicons they draw on."""

    techniques: frozenset[int]
    lexicons: LexiconSet

    def __post_init__(self) -> None:
        techniques = frozenset(self.techniques)
        object.__setattr__(self, "techniques", techniques)
        if 7 in techniques:
            raise ConfigError(
                "technique 7 (stopword removal) is applied at feature-extraction "
                "time, not during text normalization"
            )
        unknown = techniques - set(TECHNIQUE_NAMES)
        if unknown:
            raise ConfigError(f"unknown normalization techniques: {sorted(unknown)}")
        exclusive = techniques & {2, 3, 4}
        if len(exclusive) > 1:
            raise ConfigError(
                f"techniques {sorted(exclusive)} are mutually exclusive ways of "
                "handling emotives; pick one"
            )
        if 5 in techniques and not techniques & {3, 4}:
            raise ConfigError(
                "technique 5 (word-form translation) requires technique 3 or 4 "
                "to produce word forms first"
            )


def _tidy_spaces(text: str) -> str:
    """Collapse doubled spaces left by emotive edits and trim the ends."""
    return _MULTISPACE_RE.sub(" ", text).strip()


def _scan_emotives(text: str, emotive_map: dict[str, str]):
    """Yield (start, end, word_form) for non-overlapping emotive matches.

    Scans left to right; at each position the longest matching key wins.
    """
    by_first: dict[str, list[str]] = {}
    for key in sorted(emotive_map, key=len, reverse=True):
        by_first.setdefault(key[0], []).append(key)
    i = 0
    n = len(text)
    while i < n:
        matched = False
        for key in by_first.get(text[i], ()):
            if text.startswith(key, i):
                yield i, i + len(key), emotive_map[key]
                i += len(key)
                matched = True
                break
        if not matched:
            i += 1


def collapse_runs(text: str, report: NormalizeReport | None = None) -> str:
    """Replace every run of 2+ identical characters by a single copy."""
    collapsed, n = _RUN_RE.subn(r"\1", text)
    if report is not None:
        report.runs_collapsed += n
    return collapsed


def strip_emotives(text: str, lexicons: LexiconSet,
                   report: NormalizeReport | None = None) -> str:
    """Delete every emoticon/emoji occurrence (technique 2)."""
    emotive_map = lexicons.emotive_map()
    out = []
    last = 0
    count = 0
    for start, end, _ in _scan_emotives(text, emotive_map):
        out.append(text[last:start])
        last = end
        count += 1
    out.append(text[last:])
    if report is not None:
        report.emotives_removed += count
    return _tidy_spaces("".join(out))


def demojize(text: str, lexicons: LexiconSet, dedup: bool = False,
             report: NormalizeReport | None = None) -> str:
    """Replace emotives by word forms (technique 3; technique 4 with dedup).

    Each occurrence is replaced by its word form padded with single spaces.
    With dedup=True only the first occurrence of each word form is kept and
    repeats are deleted.
    """
    emotive_map = lexicons.emotive_map()
    seen: set[str] = set()
    out = []
    last = 0
    for start, end, word_form in _scan_emotives(text, emotive_map):
        out.append(text[last:start])
        last = end
        if dedup and word_form in seen:
            out.append(" ")
            if report is not None:
                report.emotive_duplicates_dropped += 1
            continue
        seen.add(word_form)
        out.append(f" {word_form} ")
        if report is not None:
            report.emotives_transformed += 1
    out.append(text[last:])
    return _tidy_spaces("".join(out))


def translate_word_forms(text: str, lexicons: LexiconSet,
                         report: NormalizeReport | None = None) -> str:
    """Replace word forms by their Vietnamese phrases (technique 5).

    Word forms without a translation entry are left in place and tallied in
    the report so lexicon gaps are visible.
    """
    def substitute(match: re.Match) -> str:
        word_form = match.group()
        phrase = lexicons.translation_map.get(word_form)
        if phrase is None:
            if report is not None:
                report.unmapped_word_forms[word_form] += 1
            return word_form
        if report is not None:
            report.word_forms_translated += 1
        return phrase

    return WORD_FORM_RE.sub(substitute, text)


def correct_spelling(text: str, lexicons: LexiconSet,
                     report: NormalizeReport | None = None) -> str:
    """Replace known misspellings/acronyms token by token (technique 6).

    Tokens are whitespace-delimited and looked up lowercased; word-form
    tokens are never touched. Output tokens are joined by single spaces.
    """
    tokens = text.split()
    out = []
    count = 0
    for token in tokens:
        if WORD_FORM_RE.fullmatch(token):
            out.append(token)
            continue
        replacement = lexicons.correction_map.get(token.lower())
        if replacement is not None and replacement != token:
            out.append(replacement)
            count += 1
        else:
            out.append(token)
    if report is not None:
        report.tokens_corrected += count
    return " ".join(out)


def normalize(text: str, config: NormalizerConfig,
              report: NormalizeReport | None = None) -> str:
    """Apply the configured techniques to one text, in ascending order."""
    techniques = config.techniques
    if 1 in techniques:
        text = collapse_runs(text, report)
    if 2 in techniques:
        text = strip_emotives(text, config.lexicons, report)
    elif 3 in techniques:
        text = demojize(text, config.lexicons, dedup=False, report=report)
    elif 4 in techniques:
        text = demojize(text, config.lexicons, dedup=True, report=report)
    if 5 in techniques:
        text = translate_word_forms(text, config.lexicons, report)
    if 6 in techniques:
        text = correct_spelling(text, config.lexicons, report)
    return text


def normalize_corpus(
    comments: Iterable[LabeledComment], config: NormalizerConfig
) -> tuple[list[LabeledComment], NormalizeReport]:
    """Normalize every comment, preserving ids and labels.

    A comment may normalize to the empty string (e.g. an emoticon-only comment
    under technique 2); it is kept so corpus alignment never breaks.
    """
    report = NormalizeReport()
    out = [replace(c, text=normalize(c.text, config, report)) for c in comments]
    return out, report
