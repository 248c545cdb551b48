"""Per-feature min-max scaling, fitted on the training fold only."""

from __future__ import annotations

import numpy as np


class MinMaxScaler:
    def fit(self, X: np.ndarray) -> "MinMaxScaler":
        self.min_ = X.min(axis=0)
        span = X.max(axis=0) - self.min_
        span[span == 0] = 1.0  # constant features map to 0
        self.span_ = span
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (X - self.min_) / self.span_
