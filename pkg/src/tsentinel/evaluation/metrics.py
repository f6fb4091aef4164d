"""
Confusion matrices and the accuracy / precision / recall / F1 report.

Attack is the positive class throughout.
"""

from typing import Sequence

from pydantic import BaseModel, ConfigDict, Field

from src.tsentinel.errors import EvaluationError
from src.tsentinel.telemetry.models import Label


class ConfusionMatrix(BaseModel):
    """2x2 counts with attack as the positive class."""

    model_config = ConfigDict(frozen=True)

    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)
    tn: int = Field(default=0, ge=0)

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    def swapped(self) -> "ConfusionMatrix":
        """The same counts with no_attack as the positive class."""
        return ConfusionMatrix(tp=self.tn, fp=self.fn, fn=self.fp, tn=self.tp)


class ClassMetrics(BaseModel):
    model_config = ConfigDict(frozen=True)

    precision: float = Field(..., ge=0, le=1)
    recall: float = Field(..., ge=0, le=1)
    f1: float = Field(..., ge=0, le=1)


class MetricsReport(BaseModel):
    """Accuracy, per-class and macro-averaged precision/recall/F1."""

    model_config = ConfigDict(frozen=True)

    accuracy: float = Field(..., ge=0, le=1)
    attack: ClassMetrics
    benign: ClassMetrics
    macro_precision: float = Field(..., ge=0, le=1)
    macro_recall: float = Field(..., ge=0, le=1)
    macro_f1: float = Field(..., ge=0, le=1)


def confusion(predicted: Sequence[Label], truth: Sequence[Label]) -> ConfusionMatrix:
    """
    Count agreements between predictions and ground truth.

    Raises:
        EvaluationError: If the lists differ in length or are empty
    """
    if len(predicted) != len(truth):
        raise EvaluationError(
            f"length mismatch: {len(predicted)} predictions, {len(truth)} labels"
        )
    if not truth:
        raise EvaluationError("cannot build a confusion matrix from empty lists")

    counts = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
    for p, t in zip(predicted, truth):
        p_attack = Label(p) is Label.ATTACK
        t_attack = Label(t) is Label.ATTACK
        if p_attack and t_attack:
            counts["tp"] += 1
        elif p_attack:
            counts["fp"] += 1
        elif t_attack:
            counts["fn"] += 1
        else:
            counts["tn"] += 1
    return ConfusionMatrix(**counts)


def _ratio(numerator: int, denominator: int, vacuous: bool) -> float:
    # A zero denominator scores 1.0 only when the class is absent and never predicted
    if denominator == 0:
        return 1.0 if vacuous else 0.0
    return numerator / denominator


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def class_metrics(c: ConfusionMatrix) -> ClassMetrics:
    """Precision, recall and F1 of the positive class of c."""
    vacuous = c.tp + c.fn == 0 and c.tp + c.fp == 0
    precision = _ratio(c.tp, c.tp + c.fp, vacuous)
    recall = _ratio(c.tp, c.tp + c.fn, vacuous)
    return ClassMetrics(precision=precision, recall=recall, f1=_f1(precision, recall))


def metrics(c: ConfusionMatrix) -> MetricsReport:
    """
    Compute the full report for a confusion matrix.

    Raises:
        EvaluationError: If the matrix is empty
    """
    if c.total == 0:
        raise EvaluationError("metrics need at least one evaluated sample")

    attack = class_metrics(c)
    benign = class_metrics(c.swapped())
    return MetricsReport(
        accuracy=(c.tp + c.tn) / c.total,
        attack=attack,
        benign=benign,
        macro_precision=(attack.precision + benign.precision) / 2,
        macro_recall=(attack.recall + benign.recall) / 2,
        macro_f1=(attack.f1 + benign.f1) / 2,
    )


def micro_average(c: ConfusionMatrix) -> ClassMetrics:
    """
    Micro-averaged precision/recall/F1 over both classes.

    Pooling both classes makes every sample count once as a prediction and
    once as a truth, so all three equal accuracy for a binary problem.
    """
    if c.total == 0:
        raise EvaluationError("metrics need at least one evaluated sample")
    pooled_tp = c.tp + c.tn
    pooled_fp = c.fp + c.fn
    pooled_fn = c.fn + c.fp
    precision = pooled_tp / (pooled_tp + pooled_fp)
    recall = pooled_tp / (pooled_tp + pooled_fn)
    return ClassMetrics(precision=precision, recall=recall, f1=_f1(precision, recall))
