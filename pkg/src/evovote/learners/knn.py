"""k-nearest-neighbor classifier with deterministic tie handling."""

from __future__ import annotations

import numpy as np

from .scaling import MinMaxScaler


def _pairwise(A: np.ndarray, B: np.ndarray, metric: str) -> np.ndarray:
    if metric == "euclidean":
        d2 = np.sum(A * A, axis=1)[:, None] + np.sum(B * B, axis=1)[None, :] - 2.0 * (A @ B.T)
        return np.sqrt(np.maximum(d2, 0.0))
    diff = np.abs(A[:, None, :] - B[None, :, :])
    if metric == "manhattan":
        return diff.sum(axis=2)
    if metric == "chebyshev":
        return diff.max(axis=2)
    raise ValueError(f"unknown metric {metric!r}")


class KnnClassifier:
    """Distance ties resolve to the lowest training-instance index.

    When the query coincides with training points (zero distance) under
    distance weighting, only the zero-distance neighbors vote.
    """

    def __init__(self, n_neighbors: int, weights: str = "uniform", metric: str = "euclidean"):
        self.n_neighbors = n_neighbors
        self.weights = weights
        self.metric = metric

    def fit(self, X: np.ndarray, y: np.ndarray):
        self._scaler = MinMaxScaler().fit(X)
        self._X = self._scaler.transform(X)
        self._y = np.asarray(y, dtype=np.int64)
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        Xs = self._scaler.transform(X)
        D = _pairwise(Xs, self._X, self.metric)
        k = min(self.n_neighbors, self._X.shape[0])
        # stable sort: equal distances keep ascending training index
        order = np.argsort(D, axis=1, kind="stable")[:, :k]
        out = np.empty((X.shape[0], 2), dtype=np.float64)
        for i in range(X.shape[0]):
            nbrs = order[i]
            labels = self._y[nbrs]
            if self.weights == "uniform":
                p1 = labels.mean()
            else:
                d = D[i, nbrs]
                zero = d == 0.0
                if zero.any():
                    p1 = labels[zero].mean()
                else:
                    w = 1.0 / d
                    p1 = float(np.sum(w * labels) / np.sum(w))
            out[i, 0] = 1.0 - p1
            out[i, 1] = p1
        return out
