"""Random forest of Gini trees over bootstrap samples."""

from __future__ import annotations

import math

import numpy as np

from ._rng import make_state, next_below
from ._treekernel import grow_classification_tree, predict_proba_tree


class RandomForest:
    """Prediction is the mean of the trees' leaf class frequencies."""

    def __init__(self, n_trees: int = 100, max_depth: int = 8,
                 min_samples_split: int = 2, max_features: str = "sqrt", seed: int = 0):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_split = min_samples_split
        self.max_features = max_features
        self.seed = seed

    def fit(self, X: np.ndarray, y: np.ndarray):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.ascontiguousarray(y, dtype=np.int64)
        n, f = X.shape
        n_pick = max(1, int(math.sqrt(f))) if self.max_features == "sqrt" else f
        state = make_state(self.seed)
        self._trees = []
        self.sample_indices_ = []
        for _ in range(self.n_trees):
            idx = np.empty(n, dtype=np.int64)
            for i in range(n):
                idx[i] = next_below(state, n)
            self.sample_indices_.append(idx)
            tree = grow_classification_tree(
                X, y, idx, self.max_depth, self.min_samples_split, n_pick, state
            )
            self._trees.append(tree[:5])
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        acc = np.zeros((X.shape[0], 2), dtype=np.float64)
        for feature, threshold, left, right, prob in self._trees:
            predict_proba_tree(feature, threshold, left, right, prob, X, acc)
        return acc / len(self._trees)

    def tree_probas(self, X: np.ndarray) -> list[np.ndarray]:
        """Per-tree leaf frequencies, for enumeration-style checks."""
        X = np.ascontiguousarray(X, dtype=np.float64)
        outs = []
        for feature, threshold, left, right, prob in self._trees:
            out = np.zeros((X.shape[0], 2), dtype=np.float64)
            predict_proba_tree(feature, threshold, left, right, prob, X, out)
            outs.append(out)
        return outs
