"""Logistic regression trained by full-batch gradient descent.

L2 penalty strength is 1/C on the weights (bias unpenalized). The step size
is 1/L with L the curvature bound from the scaled design matrix, so the
descent is stable without tuning; no randomness is involved.
"""

from __future__ import annotations

import numpy as np

from .numerics import stable_sigmoid as _sigmoid
from .scaling import MinMaxScaler


class LogisticRegressionGD:
    def __init__(self, c: float = 1.0, max_iter: int = 200):
        self.c = c
        self.max_iter = max_iter

    def fit(self, X: np.ndarray, y: np.ndarray):
        self._scaler = MinMaxScaler().fit(X)
        Xs = self._scaler.transform(X)
        n, f = Xs.shape
        y = np.asarray(y, dtype=np.float64)
        lam = 1.0 / self.c

        w = np.zeros(f)
        b = 0.0
        # logistic curvature is at most 1/4 of the Gram spectrum
        gram = Xs.T @ Xs / n
        lip = float(np.linalg.eigvalsh(gram)[-1]) / 4.0 + 0.25 + lam / n
        step = 1.0 / lip

        for _ in range(self.max_iter):
            p = _sigmoid(Xs @ w + b)
            err = (p - y) / n
            gw = Xs.T @ err + (lam / n) * w
            gb = float(err.sum())
            w -= step * gw
            b -= step * gb
        self._w = w
        self._b = b
        return self

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        Xs = self._scaler.transform(X)
        p1 = _sigmoid(Xs @ self._w + self._b)
        return np.column_stack([1.0 - p1, p1])
