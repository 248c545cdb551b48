"""Deterministic synthetic tabular data shaped like a small cardiology study.

303 instances, 13 numeric features, binary target with a 138/165 split.
A fixed fraction of instances carries features drawn from the opposite
class, which caps attainable accuracy; the class-conditional shifts mix
continuous, binary and ordinal columns so different model families err on
different instances.
"""

from __future__ import annotations

import csv

import numpy as np

COLUMNS = ["age", "sex", "cp", "trestbps", "chol", "fbs", "restecg",
           "thalach", "exang", "oldpeak", "slope", "ca", "thal", "target"]

DEFAULT_SIGNAL = 1.26
DEFAULT_FLIPS = 25
DEFAULT_SEED = 20


def _choice(rng, options, probs):
    probs = np.asarray(probs, dtype=np.float64)
    return options[int(np.searchsorted(np.cumsum(probs / probs.sum()), rng.random()))]


def _blend(base, skew, s):
    base = np.asarray(base, dtype=np.float64)
    skew = np.asarray(skew, dtype=np.float64)
    return (1.0 - s) * base + s * skew


def make_heart_like(n0: int = 138, n1: int = 165, signal: float = DEFAULT_SIGNAL,
                    flips: int = DEFAULT_FLIPS, seed: int = DEFAULT_SEED):
    """Returns (features, labels, column names), labels exactly n0/n1."""
    rng = np.random.default_rng(seed)
    n = n0 + n1
    labels = np.array([0] * n0 + [1] * n1, dtype=np.int64)
    rng.shuffle(labels)

    # latent class drives the features; flipped rows bound test accuracy
    latent = labels.copy()
    flip_idx = rng.choice(n, size=flips, replace=False)
    latent[flip_idx] = 1 - latent[flip_idx]

    s = signal
    rows = np.empty((n, 13), dtype=np.float64)
    for i in range(n):
        t = 1.0 if latent[i] == 1 else -1.0
        age = round(54.4 + 2.4 * s * t + rng.normal(0.0, 8.6))
        sex = 1.0 if rng.random() < 0.5 + 0.14 * s * t else 0.0
        cp = _choice(rng, [0, 1, 2, 3],
                     _blend([0.46, 0.28, 0.18, 0.08], [0.16, 0.22, 0.30, 0.32],
                            s * (t + 1) / 2))
        trestbps = round(129.6 + 2.6 * s * t + rng.normal(0.0, 16.5))
        chol = round(245.0 + 6.5 * s * t + rng.normal(0.0, 49.0))
        fbs = 1.0 if rng.random() < 0.149 else 0.0
        restecg = _choice(rng, [0, 1, 2], [0.49, 0.47, 0.04])
        thalach = round(149.9 - 7.6 * s * t + rng.normal(0.0, 20.5))
        exang = 1.0 if rng.random() < 0.327 + 0.18 * s * t else 0.0
        oldpeak = round(max(0.0, 0.75 + 0.62 * s * t + rng.normal(0.0, 0.95)), 1)
        slope = _choice(rng, [0, 1, 2],
                        _blend([0.06, 0.38, 0.56], [0.09, 0.62, 0.29], s * (t + 1) / 2))
        ca = _choice(rng, [0, 1, 2, 3, 4],
                     _blend([0.74, 0.15, 0.07, 0.03, 0.01],
                            [0.42, 0.26, 0.18, 0.11, 0.03], s * (t + 1) / 2))
        thal = _choice(rng, [0, 1, 2, 3],
                       _blend([0.01, 0.04, 0.72, 0.23], [0.01, 0.08, 0.38, 0.53],
                              s * (t + 1) / 2))
        rows[i] = [age, sex, cp, trestbps, chol, fbs, restecg, thalach,
                   exang, oldpeak, slope, ca, thal]
    return rows, labels, COLUMNS[:-1]


def write_heart_like(path, **kwargs) -> None:
    """Write the generated table as CSV with a `target` label column."""
    features, labels, names = make_heart_like(**kwargs)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names + ["target"])
        for row, y in zip(features, labels):
            writer.writerow([_format(v) for v in row] + [int(y)])


def _format(v: float):
    return int(v) if float(v).is_integer() else round(float(v), 3)
