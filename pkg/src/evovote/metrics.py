"""The eight validation metrics, grouped for balanced vs imbalanced problems.

Class index 1 is the positive class for precision/recall/f1. Thresholded
metrics derive hard labels as ``P(class 1) >= threshold``; ROC AUC and log
loss consume the raw probabilities. Degenerate denominators yield 0 so
searches never crash on pathological folds.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import LengthMismatch

PROBA_CLIP = 1e-15


class MetricId(str, Enum):
    ACCURACY = "accuracy"
    PRECISION = "precision"
    RECALL = "recall"
    F1 = "f1"
    G_MEAN = "g_mean"
    ROC_AUC = "roc_auc"
    LOG_LOSS = "log_loss"
    MCC = "mcc"


ALL_METRICS = tuple(MetricId)
BALANCED_GROUP = (MetricId.ACCURACY, MetricId.PRECISION, MetricId.RECALL, MetricId.F1)
IMBALANCED_GROUP = (MetricId.G_MEAN, MetricId.ROC_AUC, MetricId.LOG_LOSS, MetricId.MCC)

METRIC_GROUPS = {"balanced": BALANCED_GROUP, "imbalanced": IMBALANCED_GROUP}


def group_of(metric: MetricId) -> str:
    return "balanced" if metric in BALANCED_GROUP else "imbalanced"


class ConfusionMatrix:
    """Counts with class 1 as positive: tp, fp, tn, fn."""

    __slots__ = ("tp", "fp", "tn", "fn")

    def __init__(self, tp: int, fp: int, tn: int, fn: int):
        self.tp = tp
        self.fp = fp
        self.tn = tn
        self.fn = fn

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    def __repr__(self):
        return f"ConfusionMatrix(tp={self.tp}, fp={self.fp}, tn={self.tn}, fn={self.fn})"

    def __eq__(self, other):
        return (self.tp, self.fp, self.tn, self.fn) == (other.tp, other.fp, other.tn, other.fn)


def confusion(y_true, y_pred) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(f"{y_true.shape} vs {y_pred.shape}")
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    return ConfusionMatrix(tp, fp, tn, fn)


def _safe_div(num: float, den: float) -> float:
    return num / den if den != 0 else 0.0


def accuracy_from_confusion(cm: ConfusionMatrix) -> float:
    return _safe_div(cm.tp + cm.tn, cm.total)


def precision_from_confusion(cm: ConfusionMatrix) -> float:
    return _safe_div(cm.tp, cm.tp + cm.fp)


def recall_from_confusion(cm: ConfusionMatrix) -> float:
    return _safe_div(cm.tp, cm.tp + cm.fn)


def f1_from_confusion(cm: ConfusionMatrix) -> float:
    p = precision_from_confusion(cm)
    r = recall_from_confusion(cm)
    return _safe_div(2 * p * r, p + r)


def g_mean_from_confusion(cm: ConfusionMatrix) -> float:
    sens = recall_from_confusion(cm)
    spec = _safe_div(cm.tn, cm.tn + cm.fp)
    return float(np.sqrt(sens * spec))


def mcc_from_confusion(cm: ConfusionMatrix) -> float:
    tp, fp, tn, fn = float(cm.tp), float(cm.fp), float(cm.tn), float(cm.fn)
    den = np.sqrt((tp + fp) * (tp + fn) * (tn + fp) * (tn + fn))
    if den == 0:
        return 0.0
    return float((tp * tn - fp * fn) / den)


def roc_auc(y_true, p1) -> float:
    """Rank-based AUC; tied scores contribute half a pair each."""
    y_true = np.asarray(y_true, dtype=np.int64)
    p1 = np.asarray(p1, dtype=np.float64)
    n_pos = int(np.sum(y_true == 1))
    n_neg = y_true.size - n_pos
    if n_pos == 0 or n_neg == 0:
        return 0.0
    order = np.argsort(p1, kind="mergesort")
    ranks = np.empty(p1.size, dtype=np.float64)
    sorted_p = p1[order]
    i = 0
    while i < p1.size:
        j = i
        while j + 1 < p1.size and sorted_p[j + 1] == sorted_p[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0  # average 1-based rank
        i = j + 1
    rank_sum_pos = float(np.sum(ranks[y_true == 1]))
    return (rank_sum_pos - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def log_loss(y_true, proba) -> float:
    """Mean negative log-likelihood with probabilities clipped away from 0/1."""
    y_true = np.asarray(y_true, dtype=np.int64)
    proba = np.asarray(proba, dtype=np.float64)
    p_true = np.clip(proba[np.arange(y_true.size), y_true], PROBA_CLIP, 1.0 - PROBA_CLIP)
    return float(-np.mean(np.log(p_true)))


def score(metric: MetricId, y_true, proba, threshold: float = 0.5) -> float:
    """Compute one metric from labels and a two-column probability matrix."""
    y_true = np.asarray(y_true, dtype=np.int64)
    proba = np.asarray(proba, dtype=np.float64)
    if proba.ndim != 2 or proba.shape[0] != y_true.size:
        raise LengthMismatch(f"proba shape {proba.shape} vs {y_true.size} labels")
    if metric is MetricId.ROC_AUC:
        return roc_auc(y_true, proba[:, 1])
    if metric is MetricId.LOG_LOSS:
        return log_loss(y_true, proba)
    y_pred = (proba[:, 1] >= threshold).astype(np.int64)
    cm = confusion(y_true, y_pred)
    fn = {
        MetricId.ACCURACY: accuracy_from_confusion,
        MetricId.PRECISION: precision_from_confusion,
        MetricId.RECALL: recall_from_confusion,
        MetricId.F1: f1_from_confusion,
        MetricId.G_MEAN: g_mean_from_confusion,
        MetricId.MCC: mcc_from_confusion,
    }[metric]
    return float(fn(cm))


def score_all(y_true, proba, threshold: float = 0.5) -> dict[MetricId, float]:
    return {m: score(m, y_true, proba, threshold) for m in MetricId}


def score_from_predictions(metric: MetricId, y_true, y_pred, proba,
                           positive_class: int = 1) -> float:
    """Metric from explicit hard labels plus the probability matrix.

    Used where the caller owns the label rule (e.g. soft-voting ties resolve
    to class 0 rather than the >= threshold rule). ``positive_class`` = 0
    swaps labels and probability columns, so symmetric metrics (accuracy,
    AUC, ...) are unchanged while precision/recall/f1 split per class.
    """
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    proba = np.asarray(proba, dtype=np.float64)
    if positive_class == 0:
        y_true, y_pred, proba = 1 - y_true, 1 - y_pred, proba[:, ::-1]
    if metric is MetricId.ROC_AUC:
        return roc_auc(y_true, proba[:, 1])
    if metric is MetricId.LOG_LOSS:
        return log_loss(y_true, proba)
    cm = confusion(y_true, y_pred)
    fn = {
        MetricId.ACCURACY: accuracy_from_confusion,
        MetricId.PRECISION: precision_from_confusion,
        MetricId.RECALL: recall_from_confusion,
        MetricId.F1: f1_from_confusion,
        MetricId.G_MEAN: g_mean_from_confusion,
        MetricId.MCC: mcc_from_confusion,
    }[metric]
    return float(fn(cm))
