"""Metric correctness: hand-worked examples plus algebraic identities."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from viemo.corpus import EMOTION_LABELS, LabeledComment
from viemo.errors import DataError
from viemo.evaluate import error_report, evaluate, format_table, ratio_f1
from viemo.mlr import MlrConfig, MlrModel
from viemo.vectorize import Vocabulary, transform


def test_hand_computed_example():
    gold = ["A", "A", "A", "B", "B", "C"]
    pred = ["A", "B", "A", "B", "B", "A"]
    report = evaluate(gold, pred, labels=("A", "B", "C"))
    assert report.confusion == ((2, 1, 0), (0, 2, 0), (1, 0, 0))
    assert report.accuracy == pytest.approx(4 / 6)
    a, b, c = (report.per_class[x] for x in "ABC")
    assert (a.precision, a.recall, a.f1, a.support) == pytest.approx((2 / 3, 2 / 3, 2 / 3, 3))
    assert (b.precision, b.recall, b.f1, b.support) == pytest.approx((2 / 3, 1.0, 0.8, 2))
    # C is never predicted: precision and F1 are zero-division cases
    assert (c.precision, c.recall, c.f1, c.support) == (0.0, 0.0, 0.0, 1)
    assert report.weighted_f1 == pytest.approx(0.6)
    assert report.macro_f1 == pytest.approx((2 / 3 + 0.8) / 3)
    assert report.zero_division_count == 2


def test_ratio_f1():
    assert ratio_f1(0.0, 0.0) == 0.0
    assert ratio_f1(1.0, 1.0) == 1.0
    assert ratio_f1(0.5, 1.0) == pytest.approx(2 / 3)


def test_default_label_order_is_canonical_when_covered():
    report = evaluate(["Anger", "Enjoyment"], ["Anger", "Sadness"])
    assert report.labels == EMOTION_LABELS
    assert report.per_class["Fear"].support == 0


def test_default_label_order_falls_back_to_sorted():
    report = evaluate(["zz", "aa"], ["aa", "aa"])
    assert report.labels == ("aa", "zz")


def test_input_validation():
    with pytest.raises(DataError):
        evaluate(["A"], ["A", "B"])
    with pytest.raises(DataError):
        evaluate([], [])
    with pytest.raises(DataError):
        evaluate(["A"], ["B"], labels=("A",))


LABELS = st.sampled_from(["A", "B", "C", "D"])


@given(st.lists(st.tuples(LABELS, LABELS), min_size=1, max_size=60))
def test_metric_identities(pairs):
    gold = [g for g, _ in pairs]
    pred = [p for _, p in pairs]
    report = evaluate(gold, pred, labels=("A", "B", "C", "D"))
    n = len(pairs)
    confusion = report.confusion
    k = len(report.labels)

    trace = sum(confusion[i][i] for i in range(k))
    assert sum(sum(row) for row in confusion) == n
    assert report.accuracy == pytest.approx(trace / n, abs=1e-12)

    supports = [sum(row) for row in confusion]
    f1s = []
    weighted = 0.0
    for i, label in enumerate(report.labels):
        m = report.per_class[label]
        assert m.support == supports[i]
        assert 0.0 <= m.precision <= 1.0
        assert 0.0 <= m.recall <= 1.0
        assert m.f1 == pytest.approx(ratio_f1(m.precision, m.recall), abs=1e-12)
        predicted_count = sum(confusion[r][i] for r in range(k))
        if predicted_count:
            assert m.precision == pytest.approx(confusion[i][i] / predicted_count, abs=1e-12)
        else:
            assert m.precision == 0.0
        if m.support:
            assert m.recall == pytest.approx(confusion[i][i] / m.support, abs=1e-12)
        else:
            assert m.recall == 0.0
        f1s.append(m.f1)
        weighted += m.f1 * m.support

    assert report.weighted_f1 == pytest.approx(weighted / n, abs=1e-12)
    assert report.macro_f1 == pytest.approx(sum(f1s) / k, abs=1e-12)

    # micro-averaged precision and recall both collapse to accuracy when the
    # label order covers every observed label
    micro_p = trace / sum(sum(confusion[r][i] for r in range(k)) for i in range(k))
    micro_r = trace / sum(supports)
    assert micro_p == pytest.approx(report.accuracy, abs=1e-12)
    assert micro_r == pytest.approx(report.accuracy, abs=1e-12)


def test_zero_division_tally_counts_each_undefined_ratio():
    # gold has only A; B is predicted once but never gold, C is absent entirely
    report = evaluate(["A", "A"], ["A", "B"], labels=("A", "B", "C"))
    # B: recall 0/0 is fine (support 1? no: B support is 0) ...
    # A: fine. B: support 0 -> recall undefined; P = 0/1 = 0 -> F1 undefined.
    # C: support 0 and predicted 0 -> precision, recall, F1 all undefined.
    assert report.zero_division_count == 5
    assert report.per_class["C"] == report.per_class["C"].__class__(0.0, 0.0, 0.0, 0)


def test_perfect_predictions():
    gold = ["Enjoyment", "Sadness", "Anger"]
    report = evaluate(gold, list(gold), labels=("Enjoyment", "Sadness", "Anger"))
    assert report.accuracy == 1.0
    assert report.weighted_f1 == 1.0
    assert report.zero_division_count == 0


def test_to_dict_round_trips_all_fields():
    report = evaluate(["A", "B"], ["A", "A"], labels=("A", "B"))
    data = report.to_dict()
    assert data["labels"] == ["A", "B"]
    assert data["accuracy"] == report.accuracy
    assert data["per_class"]["B"]["support"] == 1
    assert data["confusion"] == [[1, 0], [1, 0]]
    assert data["zero_division_count"] == report.zero_division_count


def test_format_table_mentions_every_label_and_headline():
    report = evaluate(["A", "B"], ["A", "B"], labels=("A", "B"))
    table = format_table(report)
    assert "A" in table and "B" in table
    assert "weighted F1" in table
    assert "accuracy" in table


def make_tiny_model():
    vocab = Vocabulary(("a", "b", "c"), (1, 1, 1), (1, 1, 1), 3, (1, 1))
    model = MlrModel(
        weights=np.array([[1.0, 0.0, 2.0], [0.0, 3.0, 1.0]]),
        biases=np.array([0.5, -0.5]),
        labels=("Enjoyment", "Sadness"),
        vocab_fingerprint=vocab.fingerprint(),
        config=MlrConfig(),
        converged=True,
        n_iter=1,
    )
    return vocab, model


def test_error_report_lists_only_errors_with_contributions():
    vocab, model = make_tiny_model()
    comments = [
        LabeledComment("1", "a c", "Enjoyment"),
        LabeledComment("2", "b", "Sadness"),
        LabeledComment("3", "a b c", "Enjoyment"),
    ]
    matrix = transform([c.text for c in comments], vocab, "count")
    predicted = ["Sadness", "Sadness", "Enjoyment"]
    errors = error_report(comments, predicted, matrix, model)
    assert [e["id"] for e in errors] == ["1"]
    entry = errors[0]
    assert entry["gold"] == "Enjoyment" and entry["predicted"] == "Sadness"
    assert entry["bias"] == pytest.approx(-0.5)
    # Sadness weights: a->0, c->1; sorted by descending contribution
    assert entry["top_features"] == [("c", 1.0), ("a", 0.0)]


def test_error_report_caps_top_features():
    vocab, model = make_tiny_model()
    comments = [LabeledComment("1", "a b c", "Sadness")]
    matrix = transform([c.text for c in comments], vocab, "count")
    errors = error_report(comments, ["Enjoyment"], matrix, model, top_n=2)
    assert len(errors[0]["top_features"]) == 2
    assert errors[0]["top_features"][0] == ("c", 2.0)


def test_error_report_validates_alignment():
    vocab, model = make_tiny_model()
    comments = [LabeledComment("1", "a", "Enjoyment")]
    matrix = transform(["a", "b"], vocab, "count")
    with pytest.raises(DataError):
        error_report(comments, ["Enjoyment"], matrix, model)
