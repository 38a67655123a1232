"""Stopword ablation search: candidate gating, verdicts, widening, termination."""

import pytest

from viemo.errors import ConfigError, DataError
from viemo.mlr import MlrConfig
from viemo.stopwords import (
    CandidateCriteria,
    SearchState,
    ablation_round,
    build_candidates,
    make_dev_trainer,
    run_search,
    word_statistics,
)
from viemo.vectorize import VectorizerConfig


def scripted_trainer(table, default=0.5):
    """Trainer stub: frozenset -> F1 lookup, recording every call."""
    calls = []

    def trainer(removal):
        removal = frozenset(removal)
        calls.append(removal)
        return table.get(removal, default)

    return trainer, calls


# ---------------------------------------------------------------------------
# candidates


def test_criteria_validation():
    with pytest.raises(ConfigError):
        CandidateCriteria(per_label_mode="some")
    with pytest.raises(ConfigError):
        CandidateCriteria(min_total_count=0)
    with pytest.raises(ConfigError):
        CandidateCriteria(min_per_label_count=-1)


def test_word_statistics_counts_per_label():
    stats = word_statistics(
        ["vui vui ơi", "buồn ơi"], ["Enjoyment", "Sadness"],
        label_order=("Enjoyment", "Sadness"))
    assert stats.totals == {"vui": 2, "ơi": 2, "buồn": 1}
    assert stats.by_label["Enjoyment"]["vui"] == 2
    assert stats.by_label["Sadness"]["ơi"] == 1
    with pytest.raises(DataError):
        word_statistics(["a"], [])
    with pytest.raises(DataError):
        word_statistics(["a"], ["Mystery"], label_order=("Enjoyment",))


def test_build_candidates_thresholds_and_order():
    texts, labels = [], []
    # "common" clears both thresholds in both classes; "rare" misses the
    # total; "lopsided" misses the per-label minimum in one class
    for _ in range(10):
        texts.append("common common lopsided filler")
        labels.append("Enjoyment")
    for _ in range(10):
        texts.append("common common filler")
        labels.append("Sadness")
    texts.append("rare rare")
    labels.append("Sadness")
    stats = word_statistics(texts, labels)
    criteria = CandidateCriteria(min_total_count=15, min_per_label_count=5)
    assert build_candidates(stats, criteria) == ["common", "filler"]

    # "any" mode lets the lopsided token through
    any_mode = CandidateCriteria(min_total_count=10, min_per_label_count=5,
                                 per_label_mode="any")
    got = build_candidates(stats, any_mode)
    assert "lopsided" in got
    # ordering: descending total count, alphabetical on ties
    assert got == sorted(got, key=lambda t: (-stats.totals[t], t))

    excluded = CandidateCriteria(min_total_count=15, min_per_label_count=5,
                                 exclusions=frozenset({"common"}))
    assert build_candidates(stats, excluded) == ["filler"]


# ---------------------------------------------------------------------------
# single round


def test_round_verdict_bands():
    table = {
        frozenset(): 0.5,
        frozenset({"hurts"}): 0.5011,   # +0.11 points -> remove
        frozenset({"helps"}): 0.4989,   # -0.11 points -> keep
        frozenset({"meh"}): 0.5005,     # +0.05 points -> neutral
    }
    trainer, _ = scripted_trainer(table)
    state = SearchState(test_list=("hurts", "helps", "meh"))
    new_state, report = ablation_round(state, trainer, epsilon_points=0.1)
    verdicts = {t["word"]: t["verdict"] for t in report["trials"]}
    assert verdicts == {"hurts": "remove", "helps": "keep", "meh": "neutral"}
    assert new_state.final_filter_list == ("hurts",)
    assert new_state.test_list == ("meh",)
    assert new_state.stagnant_rounds == 0
    assert report["baseline_f1"] == 0.5
    assert report["removed"] == ["hurts"] and report["kept"] == ["helps"]


def test_round_epsilon_boundary_is_neutral():
    # dyadic values keep the arithmetic exact: delta is exactly epsilon, and
    # the strict inequality leaves the word on the test list
    table = {frozenset(): 0.5, frozenset({"w"}): 0.5 + 2 ** -7}
    trainer, _ = scripted_trainer(table)
    _, report = ablation_round(SearchState(test_list=("w",)), trainer,
                               epsilon_points=0.78125)
    assert report["trials"][0]["delta_points"] == 0.78125
    assert report["trials"][0]["verdict"] == "neutral"
    _, report = ablation_round(SearchState(test_list=("w",)), trainer,
                               epsilon_points=0.78)
    assert report["trials"][0]["verdict"] == "remove"


def test_round_verdicts_share_the_round_start_baseline():
    # both words look identical in isolation; verdicts must not depend on the
    # other word's outcome within the same round
    table = {
        frozenset(): 0.5,
        frozenset({"w1"}): 0.52,
        frozenset({"w2"}): 0.52,
    }
    trainer, calls = scripted_trainer(table)
    state = SearchState(test_list=("w1", "w2"))
    new_state, report = ablation_round(state, trainer)
    assert report["removed"] == ["w1", "w2"]
    assert new_state.final_filter_list == ("w1", "w2")
    # trials were scored against frozenset() | {word}, never {w1, w2}
    assert frozenset({"w1", "w2"}) not in calls


def test_round_widens_cofilter_with_stagnation():
    trainer, calls = scripted_trainer({}, default=0.5)
    state = SearchState(test_list=("a", "b", "c"), final_filter_list=("z",),
                        stagnant_rounds=2)
    new_state, report = ablation_round(state, trainer)
    assert report["extra_filter_width"] == 2
    assert report["co_filtered"] == ["a", "b"]
    assert calls[0] == frozenset({"z"})  # baseline uses the final list only
    assert calls[1:] == [
        frozenset({"z", "a", "b"}),       # trial for a
        frozenset({"z", "a", "b"}),       # trial for b
        frozenset({"z", "a", "b", "c"}),  # trial for c
    ]
    assert new_state.stagnant_rounds == 3


def test_round_width_is_clamped_to_test_list():
    trainer, _ = scripted_trainer({})
    state = SearchState(test_list=("only",), stagnant_rounds=5)
    _, report = ablation_round(state, trainer)
    assert report["extra_filter_width"] == 1


def test_round_on_empty_test_list_just_increments_stagnation():
    trainer, calls = scripted_trainer({})
    state = SearchState(test_list=(), final_filter_list=("x",), stagnant_rounds=1)
    new_state, report = ablation_round(state, trainer)
    assert report["trials"] == []
    assert new_state.final_filter_list == ("x",)
    assert new_state.stagnant_rounds == 2
    assert calls == [frozenset({"x"})]


# ---------------------------------------------------------------------------
# full search


def test_search_with_no_candidates_is_exhausted_immediately():
    trainer, calls = scripted_trainer({})
    result = run_search([], trainer)
    assert result.termination == "exhausted"
    assert result.final_filter_list == ()
    assert result.audit == ()
    assert calls == []


def test_search_stops_after_three_stagnant_rounds():
    trainer, _ = scripted_trainer({}, default=0.5)
    result = run_search(["x", "y"], trainer)
    assert result.termination == "stagnation"
    assert result.final_filter_list == ()
    assert result.remaining_test_list == ("x", "y")
    assert [r["stagnant_rounds_after"] for r in result.audit] == [1, 2, 3]
    assert [r["extra_filter_width"] for r in result.audit] == [0, 1, 2]


def test_search_exhausts_when_everything_is_removed():
    table = {frozenset({"x"}): 0.52, frozenset({"y"}): 0.52,
             frozenset({"x", "y"}): 0.53}
    trainer, _ = scripted_trainer(table)
    result = run_search(["x", "y"], trainer)
    assert result.termination == "exhausted"
    assert result.final_filter_list == ("x", "y")
    assert result.remaining_test_list == ()
    assert len(result.audit) == 1


def test_search_widening_unlocks_interactions_and_resets_stagnation():
    # neither token moves the score alone, but filtering both helps: the
    # round-2 co-filter discovers it, then round 3 removes the partner too
    table = {frozenset({"a", "b"}): 0.52}
    trainer, _ = scripted_trainer(table, default=0.5)
    result = run_search(["a", "b"], trainer)
    assert result.termination == "exhausted"
    assert result.final_filter_list == ("b", "a")
    stagnant = [r["stagnant_rounds_after"] for r in result.audit]
    assert stagnant == [1, 0, 0]
    assert result.audit[1]["co_filtered"] == ["a"]
    assert result.audit[1]["removed"] == ["b"]


# ---------------------------------------------------------------------------
# dev-split trainer


def test_dev_trainer_scores_removals_without_retraining():
    train_texts = ["vui tốt"] * 6 + ["buồn xấu"] * 6
    train_labels = ["Enjoyment"] * 6 + ["Sadness"] * 6
    # the Enjoyment dev doc is swamped by a Sadness-flavored token; removing
    # that token at dev vectorization flips it back
    dev_texts = ["vui xấu xấu xấu", "buồn xấu"]
    dev_labels = ["Enjoyment", "Sadness"]
    trainer, model = make_dev_trainer(
        train_texts, train_labels, dev_texts, dev_labels,
        VectorizerConfig(ngram_range=(1, 1), n_features=100),
        MlrConfig(),
        label_order=("Enjoyment", "Sadness"),
    )
    assert model.labels == ("Enjoyment", "Sadness")
    base = trainer(frozenset())
    filtered = trainer(frozenset({"xấu"}))
    assert filtered == 1.0
    assert base < filtered
    # cached: repeated queries are stable
    assert trainer(frozenset()) == base
