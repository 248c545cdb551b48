"""k-fold evaluation: per-metric scores, out-of-fold probabilities, overall score.

Metrics are computed once on the pooled out-of-fold predictions (a single
pooled confusion matrix / ranking), not averaged over per-fold values.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset, Folds
from .errors import EmptySelection, EmptySet, EvaluationFailed
from .learners import predict_proba, train
from .metrics import MetricId, score_all
from .space import ModelConfig


def derive_seed(master: int, token: str) -> int:
    """Stable 63-bit seed for a (master seed, token) pair."""
    digest = hashlib.sha256(f"{master}:{token}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def normalize_metric(metric: MetricId, value: float) -> float:
    """Map a raw score into [0,1], higher-is-better."""
    if metric is MetricId.LOG_LOSS:
        return float(np.exp(-value))
    if metric is MetricId.MCC:
        return (value + 1.0) / 2.0
    return value


@dataclass(frozen=True)
class EvaluatedModel:
    config: ModelConfig
    metric_scores: dict[MetricId, float]
    oof_proba: np.ndarray = field(repr=False)
    overall: float = 0.0

    @property
    def id(self) -> str:
        return self.config.id


def overall_performance(scores: dict[MetricId, float], selected) -> float:
    """Mean of the normalized selected-metric scores."""
    selected = list(selected)
    if not selected:
        raise EmptySelection("at least one metric must be selected")
    return float(np.mean([normalize_metric(m, scores[m]) for m in selected]))


def evaluate(c: ModelConfig, d: Dataset, folds: Folds, selected, seed: int) -> EvaluatedModel:
    """Train one model per fold, fill every instance's out-of-fold row, score."""
    oof = np.empty((d.n_instances, 2), dtype=np.float64)
    for f in range(folds.k):
        train_idx = folds.train_indices(f)
        test_idx = folds.test_indices(f)
        try:
            model = train(c, d.features[train_idx], d.labels[train_idx],
                          derive_seed(seed, f"{c.id}/fold{f}"))
            oof[test_idx] = predict_proba(model, d.features[test_idx])
        except Exception as exc:  # noqa: BLE001 - reported with fold context
            raise EvaluationFailed(f, f"{type(exc).__name__}: {exc}") from exc
    scores = score_all(d.labels, oof)
    return EvaluatedModel(c, scores, oof, overall_performance(scores, selected))


def predictive_power(models, d: Dataset) -> np.ndarray:
    """Per-instance mean out-of-fold probability of the true class, in [0,1]."""
    models = list(models)
    if not models:
        raise EmptySet("predictive power needs at least one model")
    rows = np.arange(d.n_instances)
    acc = np.zeros(d.n_instances, dtype=np.float64)
    for m in models:
        acc += m.oof_proba[rows, d.labels]
    return acc / len(models)


def _evaluate_task(args):
    c, d, folds, selected, seed = args
    try:
        return evaluate(c, d, folds, selected, seed)
    except EvaluationFailed as exc:
        return exc


def run_evaluations(configs, d: Dataset, folds: Folds, selected, master_seed: int,
                    n_jobs: int = 1, progress=None):
    """Evaluate a batch of configs, in submission order.

    Returns (evaluated, failures): failures maps config id -> error string.
    Each model's seed derives from (master seed, model id), so results do not
    depend on worker scheduling.
    """
    tasks = [(c, d, folds, selected, master_seed) for c in configs]
    results = []
    if n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            for i, res in enumerate(pool.map(_evaluate_task, tasks, chunksize=4)):
                results.append(res)
                if progress:
                    progress((i + 1) / len(tasks))
    else:
        for i, t in enumerate(tasks):
            results.append(_evaluate_task(t))
            if progress:
                progress((i + 1) / len(tasks))

    evaluated, failures = [], {}
    for c, res in zip(configs, results):
        if isinstance(res, EvaluationFailed):
            failures[c.id] = str(res)
        else:
            evaluated.append(res)
    return evaluated, failures
