"""Confusion matrices, binary diagnostic metrics, and AUC-ROC.

Malignant is the positive class throughout. Metrics are computed as
exact rationals and only rounded when rendered (3 decimal places, ties
away from zero), so downstream ranking never depends on float noise.

A metric whose denominator is zero is *absent* (None), never silently
0 or 1: a silent zero would corrupt ranking. Renderers print absent
values as "n/a".
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .datamodel import BinaryLabel
from .errors import DegenerateLabels, EmptyInput, ShapeError

METRIC_NAMES = ("accuracy", "sensitivity", "specificity", "ppv", "fp_rate", "f1")


@dataclass(frozen=True)
class ConfusionMatrix:
    """2x2 outcome counts with Malignant as the positive class."""

    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self):
        for name in ("tp", "fn", "fp", "tn"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {value!r}")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @property
    def positives(self) -> int:
        """Number of truth-Malignant samples."""
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        """Number of truth-Benign samples."""
        return self.fp + self.tn

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.tp, self.fn, self.fp, self.tn)


@dataclass(frozen=True)
class MetricSet:
    """The six diagnostic ratios; None marks a zero-denominator metric.

    Values are exact Fractions in [0, 1]. Invariant: whenever both are
    present, specificity + fp_rate == 1 exactly.
    """

    accuracy: Optional[Fraction]
    sensitivity: Optional[Fraction]
    specificity: Optional[Fraction]
    ppv: Optional[Fraction]
    fp_rate: Optional[Fraction]
    f1: Optional[Fraction]

    def as_dict(self) -> dict[str, Optional[Fraction]]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def confusion(
    predictions: Sequence[BinaryLabel], truths: Sequence[BinaryLabel]
) -> ConfusionMatrix:
    """Tally predictions against truths into a ConfusionMatrix."""
    if len(predictions) != len(truths):
        raise ShapeError(
            f"predictions and truths differ in length: {len(predictions)} vs {len(truths)}"
        )
    if not truths:
        raise EmptyInput("cannot build a confusion matrix from zero samples")
    tp = fn = fp = tn = 0
    for pred, truth in zip(predictions, truths):
        if truth is BinaryLabel.MALIGNANT:
            if pred is BinaryLabel.MALIGNANT:
                tp += 1
            else:
                fn += 1
        else:
            if pred is BinaryLabel.MALIGNANT:
                fp += 1
            else:
                tn += 1
    return ConfusionMatrix(tp=tp, fn=fn, fp=fp, tn=tn)


def _ratio(numerator: int, denominator: int) -> Optional[Fraction]:
    if denominator == 0:
        return None
    return Fraction(numerator, denominator)


def binary_metrics(cm: ConfusionMatrix) -> MetricSet:
    """Compute the six diagnostic metrics exactly.

    accuracy=(tp+tn)/total, sensitivity=tp/(tp+fn), specificity=tn/(tn+fp),
    ppv=tp/(tp+fp), fp_rate=fp/(fp+tn), f1=2tp/(2tp+fn+fp). Any zero
    denominator makes that metric absent; f1 is absent only when the
    matrix contains nothing but true negatives.
    """
    if cm.total == 0:
        raise EmptyInput("metrics need at least one sample")
    return MetricSet(
        accuracy=_ratio(cm.tp + cm.tn, cm.total),
        sensitivity=_ratio(cm.tp, cm.tp + cm.fn),
        specificity=_ratio(cm.tn, cm.tn + cm.fp),
        ppv=_ratio(cm.tp, cm.tp + cm.fp),
        fp_rate=_ratio(cm.fp, cm.fp + cm.tn),
        f1=_ratio(2 * cm.tp, 2 * cm.tp + cm.fn + cm.fp),
    )


def roc_auc(scores: Sequence[float], truths: Sequence[BinaryLabel]) -> float:
    """AUC-ROC by the Mann-Whitney rank statistic with midrank ties.

    Equivalent to the fraction of (Malignant, Benign) pairs where the
    malignant case outscores the benign one, counting ties as half.
    Requires both classes present.
    """
    if len(scores) != len(truths):
        raise ShapeError(
            f"scores and truths differ in length: {len(scores)} vs {len(truths)}"
        )
    if not scores:
        raise EmptyInput("AUC needs at least one sample")
    n_pos = sum(1 for t in truths if t is BinaryLabel.MALIGNANT)
    n_neg = len(truths) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise DegenerateLabels(
            f"AUC undefined with {n_pos} malignant and {n_neg} benign truths"
        )
    order = sorted(range(len(scores)), key=lambda i: scores[i])
    ranks = [0.0] * len(scores)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        # positions i..j (0-based) share ranks i+1..j+1; midranks are
        # integer multiples of 1/2, so the rank sum below stays exact
        midrank = (i + j + 2) / 2
        for k in range(i, j + 1):
            ranks[order[k]] = midrank
        i = j + 1
    rank_sum_pos = sum(
        rank for rank, truth in zip(ranks, truths) if truth is BinaryLabel.MALIGNANT
    )
    return (rank_sum_pos - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


def _scaled_int(value: Fraction, places: int) -> int:
    """`value * 10**places` rounded to an integer, ties away from zero."""
    scaled = value * 10**places
    whole, remainder = divmod(abs(scaled.numerator), scaled.denominator)
    if 2 * remainder >= scaled.denominator:
        whole += 1
    return whole if scaled.numerator >= 0 else -whole


def round_fraction(value: Fraction, places: int) -> Fraction:
    """Round an exact rational to `places` decimals, ties away from zero."""
    return Fraction(_scaled_int(value, places), 10**places)


def format_ratio(value: Optional[Fraction], places: int = 3) -> str:
    """Fixed-point rendering of an exact ratio; absent values -> 'n/a'."""
    if value is None:
        return "n/a"
    scaled = _scaled_int(value, places)
    sign = "-" if scaled < 0 else ""
    if places == 0:
        return f"{sign}{abs(scaled)}"
    scale = 10**places
    return f"{sign}{abs(scaled) // scale}.{abs(scaled) % scale:0{places}d}"


def format_percent(value: Fraction, places: int = 1) -> str:
    """Render a proportion as a percentage, e.g. Fraction(14, 25) -> '56.0%'."""
    return format_ratio(value * 100, places) + "%"
