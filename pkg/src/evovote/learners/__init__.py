"""Native classifier families behind a single train/predict_proba contract."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateTraining, ShapeMismatch
from ..space import Algorithm, ModelConfig
from .boosting import GradientBoosting
from .forest import RandomForest
from .knn import KnnClassifier
from .linear import LogisticRegressionGD
from .mlp import MlpClassifier

__all__ = [
    "GradientBoosting",
    "KnnClassifier",
    "LogisticRegressionGD",
    "MlpClassifier",
    "RandomForest",
    "TrainedModel",
    "build_learner",
    "predict_proba",
    "train",
]


class TrainedModel:
    """Fitted state for one config on one training subset; immutable after fit."""

    def __init__(self, learner, n_features: int):
        self._learner = learner
        self.n_features = n_features

    @property
    def learner(self):
        return self._learner


def build_learner(c: ModelConfig, seed: int):
    p = c.params
    if c.algorithm is Algorithm.KNN:
        return KnnClassifier(p["n_neighbors"], p["weights"], p["metric"])
    if c.algorithm is Algorithm.LR:
        return LogisticRegressionGD(p["c"], p["max_iter"])
    if c.algorithm is Algorithm.MLP:
        return MlpClassifier(p["hidden_layers"], p["activation"], p["learning_rate"],
                             p["epochs"], seed=seed)
    if c.algorithm is Algorithm.RF:
        return RandomForest(p["n_trees"], p["max_depth"], p["min_samples_split"],
                            p["max_features"], seed=seed)
    if c.algorithm is Algorithm.GRADB:
        return GradientBoosting(p["n_stages"], p["learning_rate"], p["max_depth"],
                                p["subsample"], seed=seed)
    raise AssertionError(f"unhandled algorithm {c.algorithm}")


def train(c: ModelConfig, X: np.ndarray, y: np.ndarray, seed: int) -> TrainedModel:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.shape[0] < 2 or np.unique(y).size < 2:
        raise DegenerateTraining(
            f"{c.id}: training needs at least 2 instances covering both classes"
        )
    learner = build_learner(c, seed).fit(X, y)
    return TrainedModel(learner, X.shape[1])


def predict_proba(m: TrainedModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != m.n_features:
        raise ShapeMismatch(f"expected {m.n_features} feature columns, got {X.shape}")
    return m.learner.predict_proba(X)
