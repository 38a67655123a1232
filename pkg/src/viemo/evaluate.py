"""Classification metrics: accuracy, per-class P/R/F1, weighted and macro F1.

Weighted F1 (support-weighted mean of per-class F1) is the headline number;
macro F1 is reported alongside. The confusion matrix uses gold labels as rows
and predicted labels as columns. Undefined ratios (zero denominators) score 0
and are tallied so silent degenerate classes are visible.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import EMOTION_LABELS, LabeledComment
from .errors import DataError
from .mlr import MlrModel
from .vectorize import FeatureMatrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    labels: tuple[str, ...]
    accuracy: float
    per_class: Mapping[str, ClassMetrics]
    weighted_f1: float
    macro_f1: float
    confusion: tuple[tuple[int, ...], ...]
    zero_division_count: int

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "accuracy": self.accuracy,
            "per_class": {
                label: {
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "support": m.support,
                }
                for label, m in self.per_class.items()
            },
            "weighted_f1": self.weighted_f1,
            "macro_f1": self.macro_f1,
            "confusion": [list(row) for row in self.confusion],
            "zero_division_count": self.zero_division_count,
        }


def _default_labels(gold: Sequence[str], predicted: Sequence[str]) -> tuple[str, ...]:
    observed = set(gold) | set(predicted)
    if observed <= set(EMOTION_LABELS):
        return EMOTION_LABELS
    return tuple(sorted(observed))


def evaluate(
    gold: Sequence[str],
    predicted: Sequence[str],
    labels: Sequence[str] | None = None,
) -> EvalReport:
    """Score predictions against gold labels.

    ``labels`` fixes the class order for the confusion matrix and per-class
    metrics; by default the canonical emotion order is used when every
    observed label is canonical, otherwise the sorted set of observed labels.
    """
    if len(gold) != len(predicted):
        raise DataError(f"gold has {len(gold)} labels but predictions have {len(predicted)}")
    if not gold:
        raise DataError("cannot evaluate an empty label sequence")
    label_order = tuple(labels) if labels is not None else _default_labels(gold, predicted)
    index = {label: i for i, label in enumerate(label_order)}
    unknown = (set(gold) | set(predicted)) - set(label_order)
    if unknown:
        raise DataError(f"labels {sorted(unknown)} not covered by label order {label_order}")

    k = len(label_order)
    confusion = [[0] * k for _ in range(k)]
    for g, p in zip(gold, predicted):
        confusion[index[g]][index[p]] += 1

    zero_divisions = 0

    def ratio(num: int, den: int) -> float:
        nonlocal zero_divisions
        if den == 0:
            zero_divisions += 1
            return 0.0
        return num / den

    per_class: dict[str, ClassMetrics] = {}
    for i, label in enumerate(label_order):
        tp = confusion[i][i]
        support = sum(confusion[i])
        predicted_count = sum(confusion[r][i] for r in range(k))
        precision = ratio(tp, predicted_count)
        recall = ratio(tp, support)
        f1 = ratio_f1(precision, recall)
        if precision + recall == 0.0:
            zero_divisions += 1
        per_class[label] = ClassMetrics(precision=precision, recall=recall, f1=f1, support=support)

    total = len(gold)
    correct = sum(confusion[i][i] for i in range(k))
    accuracy = correct / total
    total_support = sum(m.support for m in per_class.values())
    weighted_f1 = sum(m.f1 * m.support for m in per_class.values()) / total_support
    macro_f1 = sum(m.f1 for m in per_class.values()) / k

    if zero_divisions:
        logger.warning("evaluation hit %d zero-division cases (scored as 0)", zero_divisions)
    return EvalReport(
        labels=label_order,
        accuracy=accuracy,
        per_class=per_class,
        weighted_f1=weighted_f1,
        macro_f1=macro_f1,
        confusion=tuple(tuple(row) for row in confusion),
        zero_division_count=zero_divisions,
    )


def ratio_f1(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall; 0 when both are 0."""
    if precision + recall == 0.0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def format_table(report: EvalReport) -> str:
    """Human-readable metrics table (percentages, two decimals)."""
    lines = []
    header = f"{'label':<12} {'precision':>9} {'recall':>9} {'f1':>9} {'support':>8}"
    lines.append(header)
    lines.append("-" * len(header))
    for label in report.labels:
        m = report.per_class[label]
        lines.append(
            f"{label:<12} {m.precision * 100:>9.2f} {m.recall * 100:>9.2f} "
            f"{m.f1 * 100:>9.2f} {m.support:>8d}"
        )
    lines.append("-" * len(header))
    lines.append(f"accuracy     {report.accuracy * 100:.2f}")
    lines.append(f"weighted F1  {report.weighted_f1 * 100:.2f}")
    lines.append(f"macro F1     {report.macro_f1 * 100:.2f}")
    if report.zero_division_count:
        lines.append(f"zero divisions: {report.zero_division_count}")
    return "\n".join(lines)


def error_report(
    comments: Sequence[LabeledComment],
    predicted: Sequence[str],
    matrix: FeatureMatrix,
    model: MlrModel,
    top_n: int = 10,
) -> list[dict]:
    """Misclassified comments with the features that drove each prediction.

    For every error, lists the top ``top_n`` features by contribution
    (predicted-class weight times feature value) plus the class bias.
    """
    if not (len(comments) == len(predicted) == matrix.n_docs):
        raise DataError("comments, predictions and feature matrix must align")
    label_index = {label: i for i, label in enumerate(model.labels)}
    features = matrix.vocabulary.features
    errors = []
    for i, (comment, pred) in enumerate(zip(comments, predicted)):
        if pred == comment.label:
            continue
        p = label_index[pred]
        contributions = [
            (features[j], float(model.weights[p, j] * value))
            for j, value in matrix.rows[i]
        ]
        contributions.sort(key=lambda item: (-item[1], item[0]))
        errors.append(
            {
                "id": comment.id,
                "text": comment.text,
                "gold": comment.label,
                "predicted": pred,
                "bias": float(model.biases[p]),
                "top_features": contributions[:top_n],
            }
        )
    return errors
