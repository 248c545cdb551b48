"""Gradient boosting on binomial deviance with a constant log-odds prior.

Each stage fits a least-squares tree to the residuals y - p over a
subsample drawn without replacement, with Newton leaf values; the raw score
is the prior plus the shrunken sum of tree outputs.
"""

from __future__ import annotations

import numpy as np

from ._rng import make_state, shuffle_inplace
from ._treekernel import grow_regression_tree, predict_value_tree
from .numerics import stable_sigmoid

_PRIOR_CLIP = 1e-12


class GradientBoosting:
    def __init__(self, n_stages: int = 100, learning_rate: float = 0.1,
                 max_depth: int = 3, subsample: float = 1.0, seed: int = 0):
        self.n_stages = n_stages
        self.learning_rate = learning_rate
        self.max_depth = max_depth
        self.subsample = subsample
        self.seed = seed

    def fit(self, X: np.ndarray, y: np.ndarray):
        X = np.ascontiguousarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.float64)
        n = y.size
        p_hat = min(max(float(y.mean()), _PRIOR_CLIP), 1.0 - _PRIOR_CLIP)
        self.prior_ = float(np.log(p_hat / (1.0 - p_hat)))

        state = make_state(self.seed)
        raw = np.full(n, self.prior_)
        n_sub = max(1, int(round(self.subsample * n)))
        pool = np.arange(n)
        self._trees = []
        for _ in range(self.n_stages):
            p = stable_sigmoid(raw)
            residual = y - p
            hessian = p * (1.0 - p)
            if n_sub < n:
                shuffle_inplace(state, pool)
                idx = np.sort(pool[:n_sub])
            else:
                idx = pool
            tree = grow_regression_tree(
                X, residual, hessian, idx, self.max_depth, 2, state
            )[:5]
            self._trees.append(tree)
            delta = np.zeros(n, dtype=np.float64)
            predict_value_tree(*tree, X, delta)
            raw += self.learning_rate * delta
        return self

    def decision_scores(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        raw = np.full(X.shape[0], self.prior_)
        if self._trees:
            delta = np.zeros(X.shape[0], dtype=np.float64)
            for tree in self._trees:
                predict_value_tree(*tree, X, delta)
            raw += self.learning_rate * delta
        return raw

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        p1 = stable_sigmoid(self.decision_scores(X))
        return np.column_stack([1.0 - p1, p1])
