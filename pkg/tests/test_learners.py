from __future__ import annotations

import math

import numpy as np
import pytest

from evovote.errors import DegenerateTraining, ShapeMismatch
from evovote.learners import build_learner, predict_proba, train
from evovote.learners._rng import make_state
from evovote.learners._treekernel import grow_classification_tree
from evovote.learners.boosting import GradientBoosting
from evovote.learners.knn import KnnClassifier, _pairwise
from evovote.learners.linear import LogisticRegressionGD
from evovote.learners.mlp import MlpClassifier
from evovote.learners.forest import RandomForest
from evovote.learners.scaling import MinMaxScaler
from evovote.space import Algorithm, sample_random_config


def blobs(n=120, seed=0, shift=2.0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, 3))
    y = np.array([0] * (n // 2) + [1] * (n - n // 2), dtype=np.int64)
    x[y == 1] += shift
    return x, y


# ----- scaling -----

def test_minmax_scaler_maps_train_extremes():
    x = np.array([[1.0, 5.0], [3.0, 5.0], [2.0, 5.0]])
    s = MinMaxScaler().fit(x)
    out = s.transform(x)
    assert out[:, 0].min() == 0.0 and out[:, 0].max() == 1.0
    # constant feature maps to 0, not NaN
    assert np.all(out[:, 1] == 0.0)


def test_minmax_scaler_uses_train_statistics_only():
    s = MinMaxScaler().fit(np.array([[0.0], [2.0]]))
    assert s.transform(np.array([[4.0]]))[0, 0] == 2.0


# ----- knn -----

def test_pairwise_metrics():
    a = np.array([[0.0, 0.0]])
    b = np.array([[1.0, 3.0]])
    assert _pairwise(a, b, "euclidean")[0, 0] == pytest.approx(math.sqrt(10))
    assert _pairwise(a, b, "manhattan")[0, 0] == pytest.approx(4.0)
    assert _pairwise(a, b, "chebyshev")[0, 0] == pytest.approx(3.0)


def test_knn_uniform_frozen_oracle():
    # feature range is already [0,1], so internal scaling is the identity
    x = np.array([[0.0], [0.1], [0.2], [1.0]])
    y = np.array([0, 0, 1, 1])
    m = KnnClassifier(3).fit(x, y)
    p = m.predict_proba(np.array([[0.16]]))
    assert p[0, 1] == pytest.approx(1 / 3)


def test_knn_distance_tie_goes_to_lowest_index():
    x = np.array([[0.0], [0.5], [1.0]])
    y = np.array([0, 1, 1])
    m = KnnClassifier(1).fit(x, y)
    assert m.predict_proba(np.array([[0.25]]))[0, 1] == 0.0


def test_knn_zero_distance_neighbors_vote_alone():
    x = np.array([[0.0], [0.5], [1.0]])
    y = np.array([1, 0, 0])
    m = KnnClassifier(2, weights="distance").fit(x, y)
    assert m.predict_proba(np.array([[0.0]]))[0, 1] == 1.0


def test_knn_distance_weighting_frozen_oracle():
    x = np.array([[0.0], [1.0]])
    y = np.array([0, 1])
    m = KnnClassifier(2, weights="distance").fit(x, y)
    # weights 1/0.25 and 1/0.75
    assert m.predict_proba(np.array([[0.25]]))[0, 1] == pytest.approx(0.25)


def test_knn_k_capped_at_train_size():
    x = np.array([[0.0], [1.0]])
    y = np.array([0, 1])
    p = KnnClassifier(50).fit(x, y).predict_proba(np.array([[0.4]]))
    assert p[0, 1] == pytest.approx(0.5)


# ----- logistic regression -----

def test_lr_separates_blobs():
    x, y = blobs(seed=1, shift=3.0)
    m = LogisticRegressionGD(c=10.0, max_iter=500).fit(x, y)
    pred = (m.predict_proba(x)[:, 1] >= 0.5).astype(int)
    assert np.mean(pred == y) == 1.0


def test_lr_regularization_shrinks_weights():
    x, y = blobs(seed=2)
    tight = LogisticRegressionGD(c=1e-3, max_iter=300).fit(x, y)
    loose = LogisticRegressionGD(c=1e3, max_iter=300).fit(x, y)
    assert np.linalg.norm(tight._w) < 0.1 * np.linalg.norm(loose._w)


def test_lr_descent_beats_zero_weights():
    x, y = blobs(seed=3)
    m = LogisticRegressionGD(c=1.0, max_iter=200).fit(x, y)
    p = np.clip(m.predict_proba(x)[:, 1], 1e-12, 1 - 1e-12)
    ce = -np.mean(y * np.log(p) + (1 - y) * np.log(1 - p))
    # zero weights give cross-entropy log(2)
    assert ce < 0.6 * math.log(2)


# ----- mlp -----

def relative_error(a, b):
    denom = max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
    return np.linalg.norm(a - b) / denom


@pytest.mark.parametrize("hidden,activation", [((5,), "relu"), ((4, 4), "tanh"),
                                               ((6,), "logistic")])
def test_mlp_gradient_matches_finite_differences(hidden, activation):
    rng = np.random.default_rng(0)
    x = rng.normal(size=(3, 4))
    y = np.array([0, 1, 1])
    Y = np.eye(2)[y]
    m = MlpClassifier(hidden, activation, seed=7)
    weights = m.initial_weights(4)
    _, *grads = m.loss_and_gradients(weights, x, Y)
    eps = 1e-6
    for wi, (w, g) in enumerate(zip(weights, grads)):
        if w.size == 0:
            continue
        num = np.zeros_like(w)
        flat_w, flat_g = w.ravel(), num.ravel()
        for j in range(flat_w.size):
            orig = flat_w[j]
            flat_w[j] = orig + eps
            up = m.loss(weights, x, Y)
            flat_w[j] = orig - eps
            down = m.loss(weights, x, Y)
            flat_w[j] = orig
            flat_g[j] = (up - down) / (2 * eps)
        assert relative_error(np.asarray(g), num) < 1e-4, f"weight block {wi}"


def test_mlp_learns_blobs():
    x, y = blobs(seed=4, shift=2.5)
    m = MlpClassifier((16,), "relu", learning_rate=0.05, epochs=200, seed=1).fit(x, y)
    pred = np.argmax(m.predict_proba(x), axis=1)
    assert np.mean(pred == y) >= 0.95


def test_mlp_deterministic_per_seed():
    x, y = blobs(seed=5)
    p1 = MlpClassifier((8,), "tanh", 0.05, 60, seed=3).fit(x, y).predict_proba(x)
    p2 = MlpClassifier((8,), "tanh", 0.05, 60, seed=3).fit(x, y).predict_proba(x)
    p3 = MlpClassifier((8,), "tanh", 0.05, 60, seed=4).fit(x, y).predict_proba(x)
    assert np.array_equal(p1, p2)
    assert not np.array_equal(p1, p3)


# ----- random forest -----

def brute_force_best_split(x, y):
    """All (feature, midpoint) candidates; weighted Gini; first strict winner."""
    n, f = x.shape

    def gini(labels):
        if labels.size == 0:
            return 0.0
        p = np.mean(labels)
        return 2.0 * p * (1.0 - p)

    best = (math.inf, -1, 0.0)
    for feat in range(f):
        values = np.unique(x[:, feat])
        for lo, hi in zip(values, values[1:]):
            thr = 0.5 * (lo + hi)
            mask = x[:, feat] <= thr
            w = (mask.sum() * gini(y[mask]) + (~mask).sum() * gini(y[~mask])) / n
            if w < best[0]:
                best = (w, feat, thr)
    return best[1], best[2]


@pytest.mark.parametrize("seed", range(5))
def test_tree_root_split_matches_gini_brute_force(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(40, 3))
    y = (x[:, seed % 3] + 0.3 * rng.normal(size=40) > 0).astype(np.int64)
    idx = np.arange(40, dtype=np.int64)
    feature, threshold, *_ = grow_classification_tree(
        x, y, idx, 1, 2, 3, make_state(0))
    exp_f, exp_t = brute_force_best_split(x, y)
    assert feature[0] == exp_f
    assert threshold[0] == pytest.approx(exp_t)


def test_tree_split_tie_prefers_lowest_feature():
    # duplicated feature: identical gains, the first column must win
    x = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    y = np.array([0, 0, 1, 1])
    feature, threshold, *_ = grow_classification_tree(
        x, y, np.arange(4, dtype=np.int64), 1, 2, 2, make_state(0))
    assert feature[0] == 0
    assert threshold[0] == pytest.approx(1.5)


def test_forest_bootstrap_and_determinism():
    x, y = blobs(seed=6)
    a = RandomForest(20, 6, 2, "sqrt", seed=5).fit(x, y)
    b = RandomForest(20, 6, 2, "sqrt", seed=5).fit(x, y)
    c = RandomForest(20, 6, 2, "sqrt", seed=6).fit(x, y)
    assert all(np.array_equal(i, j) for i, j in zip(a.sample_indices_, b.sample_indices_))
    assert np.array_equal(a.predict_proba(x), b.predict_proba(x))
    assert not np.array_equal(a.predict_proba(x), c.predict_proba(x))
    for idx in a.sample_indices_:
        assert idx.shape == (x.shape[0],)
        assert idx.min() >= 0 and idx.max() < x.shape[0]


def test_forest_probas_average_trees():
    x, y = blobs(n=60, seed=7)
    m = RandomForest(7, 4, 2, "all", seed=1).fit(x, y)
    per_tree = m.tree_probas(x)
    assert len(per_tree) == 7
    stacked = np.mean(per_tree, axis=0)
    assert np.allclose(stacked, m.predict_proba(x))


def test_forest_learns_blobs():
    x, y = blobs(seed=8)
    m = RandomForest(50, 8, 2, "sqrt", seed=2).fit(x, y)
    pred = np.argmax(m.predict_proba(x), axis=1)
    assert np.mean(pred == y) >= 0.97


# ----- gradient boosting -----

def test_gradb_prior_is_log_odds():
    x = np.zeros((10, 2))
    y = np.array([1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
    m = GradientBoosting(n_stages=0, seed=0).fit(x, y)
    assert m.prior_ == pytest.approx(math.log(0.3 / 0.7))
    p = m.predict_proba(np.zeros((3, 2)))
    assert np.allclose(p[:, 1], 0.3)


def test_gradb_newton_leaf_values():
    rng = np.random.default_rng(9)
    x = rng.normal(size=(30, 2))
    y = (x[:, 0] > 0).astype(np.int64)
    m = GradientBoosting(n_stages=1, learning_rate=0.1, max_depth=1,
                         subsample=1.0, seed=3).fit(x, y)
    p0 = 1.0 / (1.0 + math.exp(-m.prior_))
    residual = y - p0
    hessian = np.full(30, p0 * (1.0 - p0))
    feature, threshold, left, right, value = m._trees[0]
    mask = x[:, feature[0]] <= threshold[0]
    for leaf_mask, child in ((mask, left[0]), (~mask, right[0])):
        assert feature[child] == -1, "depth-1 tree must have leaf children"
        expected = residual[leaf_mask].sum() / hessian[leaf_mask].sum()
        assert value[child] == pytest.approx(expected, rel=1e-12)


def test_gradb_training_reduces_log_loss():
    x, y = blobs(seed=10, shift=1.5)
    m = GradientBoosting(80, 0.1, 3, 1.0, seed=4).fit(x, y)
    p = np.clip(m.predict_proba(x)[:, 1], 1e-12, 1 - 1e-12)
    fitted = -np.mean(y * np.log(p) + (1 - y) * np.log(1 - p))
    base = 1.0 / (1.0 + math.exp(-m.prior_))
    prior_only = -np.mean(y * np.log(base) + (1 - y) * np.log(1 - base))
    assert fitted < 0.5 * prior_only


def test_gradb_subsample_changes_trees_but_stays_deterministic():
    x, y = blobs(seed=11)
    a = GradientBoosting(30, 0.1, 3, 0.6, seed=5).fit(x, y)
    b = GradientBoosting(30, 0.1, 3, 0.6, seed=5).fit(x, y)
    c = GradientBoosting(30, 0.1, 3, 0.6, seed=6).fit(x, y)
    assert np.array_equal(a.predict_proba(x), b.predict_proba(x))
    assert not np.array_equal(a.predict_proba(x), c.predict_proba(x))


# ----- factory -----

@pytest.mark.parametrize("algorithm", list(Algorithm))
def test_factory_round_trip_and_probability_rows(algorithm):
    rng = np.random.default_rng(12)
    x, y = blobs(n=60, seed=13)
    c = sample_random_config(algorithm, rng)
    model = train(c, x, y, seed=99)
    p = predict_proba(model, x)
    assert p.shape == (60, 2)
    assert np.all(p >= 0) and np.all(p <= 1)
    assert np.allclose(p.sum(axis=1), 1.0, atol=1e-12)


def test_train_rejects_degenerate_input():
    rng = np.random.default_rng(14)
    c = sample_random_config(Algorithm.KNN, rng)
    with pytest.raises(DegenerateTraining):
        train(c, np.zeros((1, 2)), np.array([1]), seed=0)
    with pytest.raises(DegenerateTraining):
        train(c, np.zeros((4, 2)), np.array([1, 1, 1, 1]), seed=0)


def test_predict_rejects_wrong_width():
    rng = np.random.default_rng(15)
    x, y = blobs(n=40, seed=16)
    c = sample_random_config(Algorithm.RF, rng)
    m = train(c, x, y, seed=1)
    with pytest.raises(ShapeMismatch):
        predict_proba(m, np.zeros((2, 5)))


def test_build_learner_maps_params():
    rng = np.random.default_rng(16)
    c = sample_random_config(Algorithm.MLP, rng)
    learner = build_learner(c, seed=123)
    assert isinstance(learner, MlpClassifier)
    assert learner.hidden_layers == c.params["hidden_layers"]
    assert learner.seed == 123
