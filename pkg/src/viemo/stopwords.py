"""Greedy ablation search for dataset-specific stopwords.

Candidates are frequent tokens that appear across all (or any) labels, i.e.
words common enough and spread enough to carry little emotion signal. The
search keeps a test list and a final filter list. Each round every remaining
candidate is ablated on the dev split: the model itself is trained once on the
unfiltered vocabulary, only dev vectorization changes.

    delta = trial F1 - baseline F1   (in F1 percentage points)
    delta > +epsilon  -> the word hurt: move it to the final filter list
    delta < -epsilon  -> the word helped: drop it from the test list for good
    otherwise         -> neutral: it stays on the test list

Rounds without any removal increment a stagnation counter, and the next round
co-filters the first ``stagnant_rounds`` test-list words alongside each
candidate to shake loose interactions. Three consecutive stagnant rounds end
the search; an empty test list ends it immediately.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from .errors import ConfigError, DataError
from . import mlr
from .evaluate import evaluate
from .vectorize import VectorizerConfig, fit_vocabulary, tokenize, transform

Trainer = Callable[[frozenset[str]], float]


@dataclass(frozen=True)
class CandidateCriteria:
    """Thresholds a token must clear to become an ablation candidate."""

    min_total_count: int = 15
    min_per_label_count: int = 5
    per_label_mode: str = "all"
    exclusions: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.per_label_mode not in ("all", "any"):
            raise ConfigError(
                f"per_label_mode must be 'all' or 'any', got {self.per_label_mode!r}"
            )
        if self.min_total_count < 1 or self.min_per_label_count < 0:
            raise ConfigError("candidate count thresholds must be positive")


@dataclass(frozen=True)
class WordStats:
    """Token counts per label over a corpus."""

    label_order: tuple[str, ...]
    totals: Mapping[str, int]
    by_label: Mapping[str, Mapping[str, int]]


def word_statistics(
    texts: Sequence[str],
    labels: Sequence[str],
    label_order: Sequence[str] | None = None,
) -> WordStats:
    """Count token occurrences overall and per label."""
    if len(texts) != len(labels):
        raise DataError(f"{len(texts)} texts but {len(labels)} labels")
    order = tuple(label_order) if label_order is not None else tuple(sorted(set(labels)))
    totals: Counter[str] = Counter()
    by_label: dict[str, Counter[str]] = {label: Counter() for label in order}
    for text, label in zip(texts, labels):
        if label not in by_label:
            raise DataError(f"label {label!r} not in label order {order}")
        tokens = tokenize(text)
        totals.update(tokens)
        by_label[label].update(tokens)
    return WordStats(label_order=order, totals=dict(totals), by_label=by_label)


def build_candidates(stats: WordStats, criteria: CandidateCriteria) -> list[str]:
    """Candidate tokens ordered by descending total count, ties alphabetical."""
    candidates = []
    for token, total in stats.totals.items():
        if total < criteria.min_total_count or token in criteria.exclusions:
            continue
        per_label_ok = (
            all if criteria.per_label_mode == "all" else any
        )(
            stats.by_label[label].get(token, 0) >= criteria.min_per_label_count
            for label in stats.label_order
        )
        if per_label_ok:
            candidates.append(token)
    candidates.sort(key=lambda t: (-stats.totals[t], t))
    return candidates


@dataclass(frozen=True)
class SearchState:
    test_list: tuple[str, ...]
    final_filter_list: tuple[str, ...] = ()
    round_no: int = 0
    stagnant_rounds: int = 0


@dataclass(frozen=True)
class SearchResult:
    final_filter_list: tuple[str, ...]
    remaining_test_list: tuple[str, ...]
    termination: str
    audit: tuple[dict, ...]


def ablation_round(
    state: SearchState,
    trainer: Trainer,
    epsilon_points: float = 0.1,
) -> tuple[SearchState, dict]:
    """Run one ablation round and return the new state plus an audit record.

    All verdicts in a round are made against the same baseline (the final
    filter list as of the round start) and applied together at the end.
    """
    width = min(state.stagnant_rounds, len(state.test_list))
    extra = state.test_list[:width]
    final = frozenset(state.final_filter_list)
    baseline = trainer(final)

    trials = []
    removed: list[str] = []
    kept_out: list[str] = []
    for word in state.test_list:
        trial_set = final | set(extra) | {word}
        trial_f1 = trainer(frozenset(trial_set))
        delta_points = (trial_f1 - baseline) * 100.0
        if delta_points > epsilon_points:
            verdict = "remove"
            removed.append(word)
        elif delta_points < -epsilon_points:
            verdict = "keep"
            kept_out.append(word)
        else:
            verdict = "neutral"
        trials.append(
            {
                "word": word,
                "trial_f1": trial_f1,
                "delta_points": delta_points,
                "verdict": verdict,
            }
        )

    resolved = set(removed) | set(kept_out)
    new_state = replace(
        state,
        test_list=tuple(w for w in state.test_list if w not in resolved),
        final_filter_list=state.final_filter_list + tuple(removed),
        round_no=state.round_no + 1,
        stagnant_rounds=0 if removed else state.stagnant_rounds + 1,
    )
    report = {
        "round": new_state.round_no,
        "baseline_f1": baseline,
        "extra_filter_width": width,
        "co_filtered": list(extra),
        "trials": trials,
        "removed": removed,
        "kept": kept_out,
        "test_list_after": list(new_state.test_list),
        "stagnant_rounds_after": new_state.stagnant_rounds,
    }
    return new_state, report


def run_search(
    candidates: Sequence[str],
    trainer: Trainer,
    epsilon_points: float = 0.1,
    max_stagnant_rounds: int = 3,
) -> SearchResult:
    """Iterate ablation rounds until stagnation or candidate exhaustion."""
    state = SearchState(test_list=tuple(candidates))
    audit: list[dict] = []
    termination = "exhausted"
    while state.test_list:
        state, report = ablation_round(state, trainer, epsilon_points)
        audit.append(report)
        if state.stagnant_rounds >= max_stagnant_rounds:
            termination = "stagnation"
            break
    return SearchResult(
        final_filter_list=state.final_filter_list,
        remaining_test_list=state.test_list,
        termination=termination,
        audit=tuple(audit),
    )


def make_dev_trainer(
    train_texts: Sequence[str],
    train_labels: Sequence[str],
    dev_texts: Sequence[str],
    dev_labels: Sequence[str],
    vectorizer_config: VectorizerConfig,
    mlr_config: mlr.MlrConfig,
    label_order: Sequence[str] | None = None,
) -> tuple[Trainer, mlr.MlrModel]:
    """Build the trial scorer used by the search.

    The classifier is trained once on the unfiltered training vocabulary;
    each trial only re-vectorizes the dev split with the trial removal set
    and returns the resulting weighted F1. Scores are cached per removal set.
    """
    vocabulary = fit_vocabulary(train_texts, vectorizer_config)
    train_matrix = transform(train_texts, vocabulary, vectorizer_config.weighting)
    model = mlr.train(train_matrix, train_labels, mlr_config, label_order=label_order)
    cache: dict[frozenset[str], float] = {}

    def trainer(removal: frozenset[str]) -> float:
        removal = frozenset(removal)
        if removal not in cache:
            dev_matrix = transform(dev_texts, vocabulary, vectorizer_config.weighting, removal)
            predicted = mlr.predict(model, dev_matrix)
            cache[removal] = evaluate(list(dev_labels), predicted).weighted_f1
        return cache[removal]

    return trainer, model
