from __future__ import annotations

import numpy as np
import pytest

from evovote.dataset import Dataset, stratified_kfold
from evovote.metrics import BALANCED_GROUP, MetricId
from evovote.session import Session, Settings


def make_toy(n_per_class: int = 30, n_features: int = 4, shift: float = 1.2,
             seed: int = 5) -> Dataset:
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(2 * n_per_class, n_features))
    x[:n_per_class] += shift
    y = np.array([0] * n_per_class + [1] * n_per_class, dtype=np.int64)
    names = tuple(f"f{i}" for i in range(n_features))
    return Dataset(x, y, ("neg", "pos"), names)


@pytest.fixture(scope="session")
def toy_dataset() -> Dataset:
    return make_toy()


@pytest.fixture(scope="session")
def toy_folds(toy_dataset):
    return stratified_kfold(toy_dataset, 5, seed=11)


@pytest.fixture(scope="session")
def toy_session(toy_dataset) -> Session:
    """A searched 250-model session on the toy data, shared read-only."""
    settings = Settings("balanced", BALANCED_GROUP, n=50, k=5, seed=42)
    s = Session(toy_dataset, settings)
    s.run_search()
    return s


def fake_evaluated(model_id: str, oof: np.ndarray, overall: float = 0.0,
                   algorithm: str = "KNN"):
    """EvaluatedModel stub with a given out-of-fold matrix."""
    from evovote.evaluator import EvaluatedModel
    from evovote.space import Algorithm, ModelConfig, Origin, sample_random_config

    rng = np.random.default_rng(abs(hash(model_id)) % (2**32))
    c = sample_random_config(Algorithm(algorithm), rng)
    config = ModelConfig(model_id, c.algorithm, c.params, 0, Origin.RANDOM)
    scores = {m: 0.5 for m in MetricId}
    return EvaluatedModel(config, scores, np.asarray(oof, dtype=np.float64), overall)
