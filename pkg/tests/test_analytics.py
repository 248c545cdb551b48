from __future__ import annotations

import numpy as np
import pytest

from evovote.analytics import (CLUSTER_THRESHOLD, GRID_CELLS, InstanceGrid,
                               _conditional_probs, aggregate_panels, build_grid,
                               classical_mds, kmeans, metric_vectors,
                               project_mds, project_tsne, tsne_affinities)
from evovote.dataset import Dataset
from evovote.errors import NoModels, TooFewPoints
from evovote.evaluator import EvaluatedModel, predictive_power
from evovote.metrics import BALANCED_GROUP, MetricId
from evovote.space import Algorithm, ModelConfig, Origin

from conftest import fake_evaluated


def model_with_scores(model_id, algorithm="KNN", oof=None, overall=0.5, **scores):
    base = fake_evaluated(model_id, np.zeros((2, 2)) if oof is None else oof,
                          overall=overall, algorithm=algorithm)
    merged = dict(base.metric_scores)
    merged.update({MetricId(k): float(v) for k, v in scores.items()})
    return EvaluatedModel(base.config, merged, base.oof_proba, overall)


def pairwise(coords):
    diff = coords[:, None, :] - coords[None, :, :]
    return np.sqrt(np.sum(diff ** 2, axis=2))


# ----- classical MDS -----

def test_mds_recovers_equilateral_triangle():
    d2 = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    coords = classical_mds(d2)
    dist = pairwise(coords)
    for i in range(3):
        for j in range(i + 1, 3):
            assert dist[i, j] == pytest.approx(1.0, abs=1e-6)


def test_mds_recovers_planar_configurations_exactly():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(12, 2))
    from evovote.analytics import _pairwise_sq
    coords = classical_mds(_pairwise_sq(x))
    assert np.allclose(pairwise(coords), pairwise(x), atol=1e-9)


def test_mds_collinear_points_zero_pad_second_axis():
    x = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    from evovote.analytics import _pairwise_sq
    with pytest.warns(UserWarning, match="degenerate spectrum"):
        coords = classical_mds(_pairwise_sq(x))
    assert np.allclose(coords[:, 1], 0.0)
    assert np.allclose(pairwise(coords), pairwise(x), atol=1e-9)


def test_mds_sign_convention_first_nonzero_positive():
    from evovote.analytics import _pairwise_sq
    for seed in range(5):
        x = np.random.default_rng(seed).normal(size=(8, 2))
        coords = classical_mds(_pairwise_sq(x))
        for j in range(2):
            nz = np.flatnonzero(np.abs(coords[:, j]) > 1e-12)
            if nz.size:
                assert coords[nz[0], j] > 0


def test_mds_identical_points_give_all_zero_coordinates():
    d2 = np.zeros((4, 4))
    with pytest.warns(UserWarning, match="degenerate spectrum"):
        coords = classical_mds(d2)
    assert np.array_equal(coords, np.zeros((4, 2)))


def test_project_mds_requires_three_models():
    ms = [model_with_scores(f"KNN{i}", accuracy=0.5 + 0.1 * i) for i in range(2)]
    with pytest.raises(TooFewPoints):
        project_mds(ms, BALANCED_GROUP)


def test_project_mds_embeds_metric_space_distances():
    ms = [model_with_scores("KNN0", accuracy=0.9, precision=0.8, recall=0.7, f1=0.75),
          model_with_scores("KNN1", accuracy=0.6, precision=0.5, recall=0.6, f1=0.55),
          model_with_scores("RF2", algorithm="RF",
                            accuracy=0.7, precision=0.9, recall=0.5, f1=0.65)]
    proj = project_mds(ms, BALANCED_GROUP)
    assert proj.method == "mds"
    assert proj.model_ids == ("KNN0", "KNN1", "RF2")
    x = metric_vectors(ms, BALANCED_GROUP)
    # three points always embed into the plane exactly, so stress is ~0
    assert np.allclose(pairwise(proj.coords), pairwise(x), atol=1e-9)
    assert proj.diagnostic == pytest.approx(0.0, abs=1e-9)


def test_metric_vectors_normalize_log_loss_and_mcc():
    m = model_with_scores("KNN0", log_loss=0.5, mcc=0.2)
    vec = metric_vectors([m], [MetricId.LOG_LOSS, MetricId.MCC])
    assert vec[0, 0] == pytest.approx(np.exp(-0.5))
    assert vec[0, 1] == pytest.approx(0.6)


# ----- t-SNE -----

def test_conditional_probs_hit_target_entropy():
    rng = np.random.default_rng(2)
    row = rng.uniform(0.05, 3.0, size=24)
    target = np.log(8.0)
    probs = _conditional_probs(row, target)
    assert probs.sum() == pytest.approx(1.0)
    entropy = -np.sum(probs * np.log(probs))
    assert abs(entropy - target) <= 1e-5


def test_tsne_affinities_symmetric_and_normalized():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(20, 4))
    p = tsne_affinities(x, perplexity=5.0)
    assert np.allclose(p, p.T)
    assert p.sum() == pytest.approx(1.0, abs=1e-6)
    assert np.all(p >= 1e-12)
    assert np.all(np.diag(p) <= 1e-12 + 1e-15)


def cluster_models(n_per_side=12, jitter=0.02):
    ms = []
    rng = np.random.default_rng(4)
    for i in range(n_per_side):
        e = jitter * rng.random()
        ms.append(model_with_scores(f"KNN{i}", accuracy=0.9 - e, precision=0.9 - e,
                                    recall=0.9 - e, f1=0.9 - e))
    for i in range(n_per_side):
        e = jitter * rng.random()
        ms.append(model_with_scores(f"RF{n_per_side + i}", algorithm="RF",
                                    accuracy=0.1 + e, precision=0.1 + e,
                                    recall=0.1 + e, f1=0.1 + e))
    return ms


def test_tsne_keeps_cluster_neighborhoods_local():
    ms = cluster_models()
    proj = project_tsne(ms, BALANCED_GROUP, perplexity=5.0, iterations=300, seed=0)
    assert proj.method == "tsne"
    assert proj.model_ids == tuple(m.id for m in ms)
    # every embedded point's nearest neighbor stays in its input cluster
    dist = pairwise(proj.coords)
    np.fill_diagonal(dist, np.inf)
    nearest = np.argmin(dist, axis=1)
    for i, nn in enumerate(nearest):
        assert (i < 12) == (nn < 12)
    assert np.isfinite(proj.diagnostic)


def test_tsne_deterministic_per_seed():
    ms = cluster_models()
    p1 = project_tsne(ms, BALANCED_GROUP, perplexity=5.0, iterations=120, seed=9)
    p2 = project_tsne(ms, BALANCED_GROUP, perplexity=5.0, iterations=120, seed=9)
    p3 = project_tsne(ms, BALANCED_GROUP, perplexity=5.0, iterations=120, seed=10)
    assert np.array_equal(p1.coords, p2.coords)
    assert not np.array_equal(p1.coords, p3.coords)


def test_tsne_requires_three_perplexity_points():
    ms = cluster_models(n_per_side=7)  # 14 models < 3 * 5
    with pytest.raises(TooFewPoints):
        project_tsne(ms[:14], BALANCED_GROUP, perplexity=5.0)


# ----- kmeans -----

@pytest.mark.parametrize("seed", range(4))
def test_kmeans_objective_history_non_increasing(seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(60, 2))
    _, _, history = kmeans(x, 5, seed=seed)
    assert history
    assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))


def test_kmeans_recovers_separated_blobs():
    rng = np.random.default_rng(5)
    centers = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])
    x = np.vstack([c + 0.1 * rng.normal(size=(20, 2)) for c in centers])
    assignment, centroids, _ = kmeans(x, 3, seed=1)
    for blob in range(3):
        block = assignment[20 * blob:20 * (blob + 1)]
        assert np.all(block == block[0])
    assert len(set(assignment[::20])) == 3


def test_kmeans_handles_duplicate_points():
    x = np.array([[0.0], [0.0], [1.0], [1.0], [2.0], [2.0]])
    assignment, _, history = kmeans(x, 3, seed=2)
    assert assignment.shape == (6,)
    assert set(assignment) <= {0, 1, 2}
    assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))


def test_kmeans_rejects_k_above_n():
    with pytest.raises(ValueError):
        kmeans(np.zeros((3, 2)), 4, seed=0)


def test_kmeans_deterministic_per_seed():
    rng = np.random.default_rng(6)
    x = rng.normal(size=(40, 3))
    a1, c1, h1 = kmeans(x, 4, seed=11)
    a2, c2, h2 = kmeans(x, 4, seed=11)
    assert np.array_equal(a1, a2)
    assert np.array_equal(c1, c2)
    assert h1 == h2


# ----- instance grid -----

def grid_dataset(n0, n1, seed=0):
    rng = np.random.default_rng(seed)
    labels = np.array([0] * n0 + [1] * n1, dtype=np.int64)
    features = rng.normal(size=(n0 + n1, 3))
    return Dataset(features, labels, ("neg", "pos"), ("a", "b", "c"))


def grid_models(d, seed=0):
    rng = np.random.default_rng(seed)
    n = d.n_instances
    models = []
    for i, algo in enumerate(("KNN", "RF")):
        p1 = rng.uniform(0.05, 0.95, size=n)
        p = np.column_stack([1.0 - p1, p1])
        models.append(fake_evaluated(f"{algo}{i}", p, algorithm=algo))
    return models


def test_grid_small_dataset_one_cell_per_instance(toy_dataset):
    models = grid_models(toy_dataset)
    grid = build_grid(toy_dataset, models, [models[0]])
    assert isinstance(grid, InstanceGrid)
    assert grid.clustered is False
    assert grid.cell_count == toy_dataset.n_instances
    assert all(c.count == 1 for c in grid.cells)
    assert sorted(grid.assignment.tolist()) == list(range(toy_dataset.n_instances))


def test_grid_unclustered_orders_class_blocks_by_power(toy_dataset):
    models = grid_models(toy_dataset)
    grid = build_grid(toy_dataset, models, [models[0]])
    power = predictive_power(models, toy_dataset)

    cell_of = grid.assignment
    n0 = int(np.sum(toy_dataset.labels == 0))
    for cls, offset in ((0, 0), (1, n0)):
        idx = np.flatnonzero(toy_dataset.labels == cls)
        expected = idx[np.argsort(-power[idx], kind="stable")]
        got = np.empty_like(expected)
        for pos, cell in enumerate(range(offset, offset + idx.size)):
            got[pos] = int(np.flatnonzero(cell_of == cell)[0])
        assert np.array_equal(got, expected)


def test_grid_difference_layer_against_manual_computation(toy_dataset):
    models = grid_models(toy_dataset)
    knn_model = models[0]
    grid = build_grid(toy_dataset, models, [knn_model])
    knn_power = predictive_power([knn_model], toy_dataset)

    for cell in grid.cells:
        members = np.flatnonzero(grid.assignment == cell.cell)
        expected_base = float(np.mean(knn_power[members]))
        assert cell.power["KNN"] == pytest.approx(expected_base)
        # selection contains only the KNN model, so its difference vanishes
        assert cell.difference["KNN"] == pytest.approx(0.0)
        # the selection has no RF model: difference defined as 0
        assert cell.difference["RF"] == 0.0
        assert -1.0 <= cell.difference["KNN"] <= 1.0
        for a in ("LR", "MLP", "GradB"):
            assert cell.power[a] == 0.0
            assert cell.difference[a] == 0.0


def test_grid_difference_zero_when_selection_is_everything(toy_dataset):
    models = grid_models(toy_dataset)
    grid = build_grid(toy_dataset, models, models)
    for cell in grid.cells:
        for a, v in cell.difference.items():
            assert v == pytest.approx(0.0)


def test_grid_cluster_threshold_boundary():
    below = grid_dataset(168, 20, seed=1)
    above = grid_dataset(CLUSTER_THRESHOLD, 20, seed=2)
    g_below = build_grid(below, grid_models(below, seed=1), [])
    g_above = build_grid(above, grid_models(above, seed=2), [])
    assert g_below.clustered is False
    assert g_below.cell_count == 188
    assert g_above.clustered is True
    assert g_above.cell_count == GRID_CELLS


def test_grid_clustered_counts_sum_and_order():
    d = grid_dataset(200, 40, seed=3)
    models = grid_models(d, seed=3)
    grid = build_grid(d, models, [models[0]])
    assert grid.cell_count == GRID_CELLS
    assert sum(c.count for c in grid.cells) == d.n_instances
    assert np.all(grid.assignment >= 0)
    occupied = [c.power_all for c in grid.cells if c.count > 0]
    assert all(b <= a + 1e-12 for a, b in zip(occupied, occupied[1:]))


def test_grid_requires_models(toy_dataset):
    with pytest.raises(NoModels):
        build_grid(toy_dataset, [], [])


def test_grid_deterministic_per_seed():
    d = grid_dataset(200, 40, seed=4)
    models = grid_models(d, seed=4)
    g1 = build_grid(d, models, [models[0]], seed=8)
    g2 = build_grid(d, models, [models[0]], seed=8)
    assert np.array_equal(g1.assignment, g2.assignment)


# ----- panels -----

def panel_models():
    return [
        model_with_scores("KNN0", overall=0.9, accuracy=0.9),
        model_with_scores("KNN1", overall=0.7, accuracy=0.8),
        model_with_scores("RF2", algorithm="RF", overall=0.8, accuracy=0.6),
    ]


def test_beeswarm_sorted_ascending_per_algorithm():
    panels = aggregate_panels(panel_models(), [])
    assert panels.beeswarm["KNN"] == (("KNN1", 0.7), ("KNN0", 0.9))
    assert panels.beeswarm["RF"] == (("RF2", 0.8),)
    assert panels.beeswarm["LR"] == ()
    assert panels.beeswarm["MLP"] == ()
    assert panels.beeswarm["GradB"] == ()


def test_bean_series_use_raw_scores_and_means():
    ms = panel_models()
    panels = aggregate_panels(ms, [ms[0], ms[2]])
    assert panels.bean_all[MetricId.ACCURACY] == (0.9, 0.8, 0.6)
    assert panels.bean_selected[MetricId.ACCURACY] == (0.9, 0.6)
    assert panels.mean_all[MetricId.ACCURACY] == pytest.approx((0.9 + 0.8 + 0.6) / 3)
    assert panels.mean_selected[MetricId.ACCURACY] == pytest.approx(0.75)


def test_bean_mean_selected_is_none_for_empty_selection():
    panels = aggregate_panels(panel_models(), [])
    for metric in MetricId:
        assert panels.mean_selected[metric] is None
        assert panels.bean_selected[metric] == ()
        assert panels.mean_all[metric] == pytest.approx(
            np.mean(panels.bean_all[metric]))
