"""Lexical resources for normalization: emotive maps, translations, corrections.

All five resources live in one directory as simple text files:

    emoticons.tsv     emoticon -> word form        (":)" -> ":slightly_smiling_face:")
    emojis.tsv        emoji -> word form           ("😢" -> ":crying_face:")
    translations.tsv  word form -> Vietnamese      (":crying_face:" -> "khóc")
    corrections.tsv   token -> standard spelling   ("pk" -> "biết")
    removals.txt      one token per line

TSV files are two tab-separated columns; lines starting with '#' and blank
lines are ignored. A word form is ":" + [a-z0-9_]+ + ":".
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

from .errors import DataError

logger = logging.getLogger(__name__)

WORD_FORM_RE = re.compile(r":[a-z0-9_]+:")

_EMOTICONS_FILE = "emoticons.tsv"
_EMOJIS_FILE = "emojis.tsv"
_TRANSLATIONS_FILE = "translations.tsv"
_CORRECTIONS_FILE = "corrections.tsv"
_REMOVALS_FILE = "removals.txt"


@dataclass(frozen=True)
class LexiconSet:
    """All lexical resources used by the normalizer and feature filters."""

    emoticon_map: Mapping[str, str] = field(default_factory=dict)
    emoji_map: Mapping[str, str] = field(default_factory=dict)
    translation_map: Mapping[str, str] = field(default_factory=dict)
    correction_map: Mapping[str, str] = field(default_factory=dict)
    removal_list: frozenset[str] = frozenset()

    def lookup_correction(self, token: str) -> str | None:
        """Return the standard spelling for a lowercase token, or None."""
        return self.correction_map.get(token)

    def emotive_map(self) -> dict[str, str]:
        """Merged emoticon + emoji map; emoticons win key collisions."""
        merged = dict(self.emoji_map)
        merged.update(self.emoticon_map)
        return merged


def default_lexicon_dir() -> Path:
    """Directory of the lexicon files shipped with the package."""
    return Path(str(resources.files("viemo").joinpath("data/lexicons")))


def _parse_pairs(path: Path) -> dict[str, str]:
    """Parse a two-column TSV into a dict, rejecting duplicate keys."""
    pairs: dict[str, str] = {}
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise DataError(f"{path}:{line_no}: expected 2 tab-separated columns, got {len(parts)}")
            key, value = parts[0].strip(), parts[1].strip()
            if not key or not value:
                raise DataError(f"{path}:{line_no}: empty key or value")
            if key in pairs:
                raise DataError(f"{path}:{line_no}: duplicate key {key!r}")
            pairs[key] = value
    return pairs


def _parse_tokens(path: Path) -> frozenset[str]:
    tokens: set[str] = set()
    with path.open(encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            token = line.strip()
            if not token or token.startswith("#"):
                continue
            if any(ch.isspace() for ch in token):
                raise DataError(f"{path}:{line_no}: removal entry {token!r} contains whitespace")
            tokens.add(token)
    return frozenset(tokens)


def _check_emotive_map(pairs: Mapping[str, str], path: Path) -> None:
    for key, value in pairs.items():
        if WORD_FORM_RE.fullmatch(value) is None:
            raise DataError(f"{path}: value for {key!r} is not a word form: {value!r}")
        if any(ch.isspace() for ch in key):
            raise DataError(f"{path}: emotive key {key!r} contains whitespace")


def _check_translation_map(pairs: Mapping[str, str], path: Path) -> None:
    for key, value in pairs.items():
        if WORD_FORM_RE.fullmatch(key) is None:
            raise DataError(f"{path}: key {key!r} is not a word form")
        if WORD_FORM_RE.search(value):
            raise DataError(f"{path}: translation for {key!r} contains a word form: {value!r}")


def _check_correction_map(pairs: Mapping[str, str], path: Path) -> None:
    for key, value in pairs.items():
        if key != key.lower() or any(ch.isspace() for ch in key):
            raise DataError(f"{path}: correction key {key!r} must be a lowercase whitespace-free token")
        for token in value.split():
            replacement = pairs.get(token.lower())
            if replacement is not None and replacement != token:
                raise DataError(
                    f"{path}: correction {key!r} -> {value!r} is not a fixed point: "
                    f"token {token!r} would be re-corrected to {replacement!r}"
                )


def load_lexicons(directory: str | Path | None = None) -> LexiconSet:
    """Load all lexicons from a directory (the packaged set by default).

    Missing files yield empty resources with a logged warning; malformed
    content raises DataError.
    """
    directory = Path(directory) if directory is not None else default_lexicon_dir()
    if not directory.is_dir():
        raise DataError(f"lexicon directory {directory} does not exist")

    def pairs_or_empty(name: str, check) -> dict[str, str]:
        path = directory / name
        if not path.is_file():
            logger.warning("lexicon file %s missing; using empty map", path)
            return {}
        pairs = _parse_pairs(path)
        check(pairs, path)
        logger.info("loaded %d entries from %s", len(pairs), path)
        return pairs

    removals_path = directory / _REMOVALS_FILE
    if removals_path.is_file():
        removal_list = _parse_tokens(removals_path)
    else:
        logger.warning("lexicon file %s missing; using empty removal list", removals_path)
        removal_list = frozenset()

    return LexiconSet(
        emoticon_map=pairs_or_empty(_EMOTICONS_FILE, _check_emotive_map),
        emoji_map=pairs_or_empty(_EMOJIS_FILE, _check_emotive_map),
        translation_map=pairs_or_empty(_TRANSLATIONS_FILE, _check_translation_map),
        correction_map=pairs_or_empty(_CORRECTIONS_FILE, _check_correction_map),
        removal_list=removal_list,
    )


def load_removal_list(path: str | Path) -> frozenset[str]:
    """Load a standalone removal list (one token per line, '#' comments)."""
    path = Path(path)
    if not path.is_file():
        raise DataError(f"removal list {path} does not exist")
    return _parse_tokens(path)
