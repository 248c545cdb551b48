"""Soft majority voting over out-of-fold probabilities, with best-record tracking."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import EmptyEnsemble, UnknownModelId
from .evaluator import EvaluatedModel, overall_performance
from .metrics import ALL_METRICS, MetricId, score_from_predictions


@dataclass(frozen=True)
class EnsembleSpec:
    model_ids: tuple[str, ...]
    pooled_scores: dict[MetricId, float]
    per_class_scores: dict[tuple[MetricId, int], float]
    overall: float


@dataclass(frozen=True)
class BestEnsembleRecord:
    spec: EnsembleSpec
    ordinal: int


def soft_vote(members) -> tuple[np.ndarray, np.ndarray]:
    """Average member out-of-fold probabilities; argmax labels, ties to class 0."""
    members = list(members)
    if not members:
        raise EmptyEnsemble("soft vote needs at least one member")
    averaged = np.mean([m.oof_proba for m in members], axis=0)
    labels = (averaged[:, 1] > averaged[:, 0]).astype(np.int64)
    return labels, averaged


def evaluate_members(members, d: Dataset, selected) -> EnsembleSpec:
    """Score a concrete member list: pooled + per-class metrics and overall."""
    members = list(members)
    labels, averaged = soft_vote(members)
    pooled = {m: score_from_predictions(m, d.labels, labels, averaged, positive_class=1)
              for m in ALL_METRICS}
    per_class = {}
    for cls in (0, 1):
        for m in ALL_METRICS:
            per_class[(m, cls)] = score_from_predictions(m, d.labels, labels, averaged,
                                                         positive_class=cls)
    return EnsembleSpec(tuple(m.id for m in members), pooled, per_class,
                        overall_performance(pooled, selected))


def evaluate_ensemble(ids, models_by_id: dict[str, EvaluatedModel], d: Dataset,
                      selected) -> EnsembleSpec:
    """Resolve ids against the pool and score the resulting ensemble."""
    members = []
    for i in ids:
        if i not in models_by_id:
            raise UnknownModelId(f"no evaluated model with id {i!r}")
        members.append(models_by_id[i])
    return evaluate_members(members, d, selected)


def update_best(active: EnsembleSpec, best: BestEnsembleRecord | None,
                ordinal: int) -> BestEnsembleRecord:
    """Replace the best record only on strict improvement of overall."""
    if best is None or active.overall > best.spec.overall:
        return BestEnsembleRecord(active, ordinal)
    return best


def greedy_auto_compose(candidates, max_size: int, d: Dataset, selected) -> EnsembleSpec:
    """Forward greedy composition starting from the best single model.

    Adds the candidate giving the largest strict improvement in ensemble
    overall, until max_size is reached or no addition improves.
    """
    candidates = list(candidates)
    if not candidates:
        raise EmptyEnsemble("auto-compose needs candidates")
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    members = [max(candidates, key=lambda m: m.overall)]
    spec = evaluate_members(members, d, selected)
    remaining = [m for m in candidates if m.id != members[0].id]
    while len(members) < max_size and remaining:
        best_gain, best_pick, best_spec = 0.0, None, None
        for m in remaining:
            trial = evaluate_members(members + [m], d, selected)
            gain = trial.overall - spec.overall
            if gain > best_gain:
                best_gain, best_pick, best_spec = gain, m, trial
        if best_pick is None:
            break
        members.append(best_pick)
        spec = best_spec
        remaining = [m for m in remaining if m.id != best_pick.id]
    return spec
