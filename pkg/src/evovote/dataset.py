"""Tabular binary-classification data: CSV ingestion, class balance, stratified folds."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyFile,
    InvalidFoldCount,
    MissingColumn,
    NonNumericFeature,
    NotBinary,
    TooFewInstances,
)

ALLOWED_K = (5, 10, 15)

# Minority/majority ratio at or above which the balanced metric group is recommended.
BALANCE_THRESHOLD = 2.0 / 3.0


@dataclass(frozen=True)
class Dataset:
    """Immutable feature matrix plus binary labels.

    Labels are 0/1 by first occurrence in the source file; ``class_names``
    keeps the original display strings in that order.
    """

    features: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, str]
    feature_names: tuple[str, ...]

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.labels, dtype=np.int64)
        if X.ndim != 2:
            raise ValueError("features must be a 2D matrix")
        if X.shape[0] != y.shape[0]:
            raise ValueError("row count of features must equal number of labels")
        if not np.isfinite(X).all():
            raise NonNumericFeature("features contain non-finite values")
        classes = np.unique(y)
        if classes.size != 2 or not np.array_equal(classes, [0, 1]):
            raise NotBinary(f"labels must be exactly {{0,1}}, got {classes.tolist()}")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", y)

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int]:
        return int(np.sum(self.labels == 0)), int(np.sum(self.labels == 1))


@dataclass(frozen=True)
class BalanceReport:
    count_per_class: tuple[int, int]
    minority_ratio: float
    recommended_group: str  # "balanced" | "imbalanced"


@dataclass(frozen=True)
class Folds:
    """Per-instance fold assignment for stratified k-fold CV."""

    k: int
    assignment: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.assignment, dtype=np.int64)
        a.setflags(write=False)
        object.__setattr__(self, "assignment", a)

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignment != fold)


def load_csv(path, label_column: str) -> Dataset:
    """Load a comma-separated UTF-8 file with a header row into a Dataset."""
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_csv(fh, label_column, source=str(path))


def parse_csv(fh, label_column: str, source: str = "<stream>") -> Dataset:
    """Parse an open CSV stream with a header row into a Dataset.

    Every non-label column must parse as a number; the label column must hold
    exactly two distinct values, mapped to 0/1 by first occurrence.
    """
    reader = csv.reader(fh)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyFile(f"{source} has no header row") from None
    rows = [row for row in reader if row]
    if not rows:
        raise EmptyFile(f"{source} has no data rows")
    if label_column not in header:
        raise MissingColumn(f"label column {label_column!r} not in header {header}")

    label_idx = header.index(label_column)
    feature_names = tuple(name for i, name in enumerate(header) if i != label_idx)

    raw_labels: list[str] = []
    values = np.empty((len(rows), len(feature_names)), dtype=np.float64)
    for r, row in enumerate(rows):
        if len(row) != len(header):
            raise NonNumericFeature(f"row {r + 2}: expected {len(header)} cells, got {len(row)}")
        c = 0
        for i, cell in enumerate(row):
            if i == label_idx:
                raw_labels.append(cell.strip())
                continue
            try:
                v = float(cell)
            except ValueError:
                raise NonNumericFeature(
                    f"row {r + 2}, column {header[i]!r}: {cell!r} is not numeric"
                ) from None
            if not np.isfinite(v):
                raise NonNumericFeature(f"row {r + 2}, column {header[i]!r}: non-finite value")
            values[r, c] = v
            c += 1

    seen: dict[str, int] = {}
    labels = np.empty(len(raw_labels), dtype=np.int64)
    for i, lab in enumerate(raw_labels):
        if lab not in seen:
            seen[lab] = len(seen)
        labels[i] = seen[lab]
    if len(seen) != 2:
        raise NotBinary(f"label column has {len(seen)} distinct values, expected 2")

    class_names = tuple(sorted(seen, key=seen.get))
    return Dataset(values, labels, class_names, feature_names)


def class_balance(d: Dataset) -> BalanceReport:
    """Count instances per class and recommend a metric group."""
    counts = d.class_counts()
    ratio = min(counts) / max(counts)
    group = "balanced" if ratio >= BALANCE_THRESHOLD else "imbalanced"
    return BalanceReport(counts, ratio, group)


def stratified_kfold(d: Dataset, k: int, seed: int) -> Folds:
    """Deterministic stratified split: shuffle each class, deal round-robin.

    Per-fold class counts differ from exact proportionality by at most 1.
    """
    if k not in ALLOWED_K:
        raise InvalidFoldCount(f"k must be one of {ALLOWED_K}, got {k}")
    for cls, count in zip((0, 1), d.class_counts()):
        if count < k:
            raise TooFewInstances(f"class {cls} has {count} instances, needs at least {k}")

    rng = np.random.default_rng(seed)
    assignment = np.empty(d.n_instances, dtype=np.int64)
    for cls in (0, 1):
        idx = np.flatnonzero(d.labels == cls)
        rng.shuffle(idx)
        assignment[idx] = np.arange(idx.size) % k
    return Folds(k, assignment)
