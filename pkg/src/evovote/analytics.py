"""Projections of the model pool, the instance grid, and panel aggregates."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset
from .errors import NoModels, TooFewPoints
from .evaluator import EvaluatedModel, normalize_metric, predictive_power
from .learners.scaling import MinMaxScaler
from .metrics import ALL_METRICS, MetricId
from .space import ALGORITHM_ORDER, Algorithm

CLUSTER_THRESHOLD = 169
GRID_CELLS = 100
ENTROPY_TOL = 1e-5


def metric_vectors(models, selected) -> np.ndarray:
    """Per-model normalized metric vectors, one column per selected metric."""
    selected = list(selected)
    return np.array([[normalize_metric(m, mod.metric_scores[m]) for m in selected]
                     for mod in models], dtype=np.float64)


@dataclass(frozen=True)
class Projection:
    method: str
    model_ids: tuple[str, ...]
    coords: np.ndarray = field(repr=False)
    diagnostic: float = 0.0


def _pairwise_sq(x: np.ndarray) -> np.ndarray:
    sq = np.sum(x * x, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (x @ x.T)
    np.fill_diagonal(d2, 0.0)
    return np.maximum(d2, 0.0)


def _fix_signs(coords: np.ndarray) -> np.ndarray:
    for j in range(coords.shape[1]):
        col = coords[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            coords[:, j] = -col
    return coords


def classical_mds(d2: np.ndarray) -> np.ndarray:
    """Torgerson scaling of a squared-distance matrix to 2 dimensions."""
    n = d2.shape[0]
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ d2 @ j
    b = (b + b.T) / 2.0
    vals, vecs = np.linalg.eigh(b)
    order = np.argsort(vals)[::-1]
    vals, vecs = vals[order], vecs[:, order]
    positive = int(np.sum(vals[:2] > 1e-12))
    if positive < 2:
        warnings.warn("degenerate spectrum: fewer than 2 positive eigenvalues, "
                      "zero-padding the missing axis", stacklevel=2)
    coords = np.zeros((n, 2), dtype=np.float64)
    for axis in range(positive):
        coords[:, axis] = vecs[:, axis] * np.sqrt(vals[axis])
    return _fix_signs(coords)


def _stress(d_in: np.ndarray, coords: np.ndarray) -> float:
    d_out = np.sqrt(_pairwise_sq(coords))
    denom = float(np.sum(d_in ** 2))
    if denom == 0.0:
        return 0.0
    return float(np.sqrt(np.sum((d_in - d_out) ** 2) / denom))


def project_mds(models, selected) -> Projection:
    """Classical MDS over normalized metric vectors."""
    models = list(models)
    if len(models) < 3:
        raise TooFewPoints(f"MDS needs at least 3 models, got {len(models)}")
    x = metric_vectors(models, selected)
    d2 = _pairwise_sq(x)
    coords = classical_mds(d2)
    return Projection("mds", tuple(m.id for m in models), coords,
                      _stress(np.sqrt(d2), coords))


def _conditional_probs(d2_row: np.ndarray, target_entropy: float):
    """Binary-search the precision so the row entropy hits the target."""
    beta, beta_min, beta_max = 1.0, -np.inf, np.inf
    probs = np.zeros_like(d2_row)
    for _ in range(200):
        w = np.exp(-d2_row * beta)
        s = float(np.sum(w))
        if s <= 0.0:
            probs = np.full_like(d2_row, 1.0 / d2_row.size)
            break
        probs = w / s
        nz = probs > 0
        entropy = float(-np.sum(probs[nz] * np.log(probs[nz])))
        diff = entropy - target_entropy
        if abs(diff) <= ENTROPY_TOL:
            break
        if diff > 0:
            beta_min = beta
            beta = beta * 2.0 if beta_max == np.inf else (beta + beta_max) / 2.0
        else:
            beta_max = beta
            beta = beta / 2.0 if beta_min == -np.inf else (beta + beta_min) / 2.0
    return probs


def tsne_affinities(x: np.ndarray, perplexity: float) -> np.ndarray:
    n = x.shape[0]
    d2 = _pairwise_sq(x)
    target = np.log(perplexity)
    p = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        row = np.delete(d2[i], i)
        probs = _conditional_probs(row, target)
        p[i, np.arange(n) != i] = probs
    p = (p + p.T) / (2.0 * n)
    return np.maximum(p, 1e-12)


def project_tsne(models, selected, perplexity: float = 10.0, iterations: int = 500,
                 seed: int = 0) -> Projection:
    """Gradient-descent t-SNE with early exaggeration; deterministic per seed."""
    models = list(models)
    if len(models) < 3 * perplexity:
        raise TooFewPoints(f"t-SNE with perplexity {perplexity} needs at least "
                           f"{int(np.ceil(3 * perplexity))} models, got {len(models)}")
    x = metric_vectors(models, selected)
    n = x.shape[0]
    p = tsne_affinities(x, perplexity)

    rng = np.random.default_rng(seed)
    y = rng.normal(0.0, 1e-4, size=(n, 2))
    velocity = np.zeros_like(y)
    exaggeration_until = min(100, iterations // 2)
    lr = 100.0
    kl = 0.0
    for it in range(iterations):
        d2 = _pairwise_sq(y)
        num = 1.0 / (1.0 + d2)
        np.fill_diagonal(num, 0.0)
        q = np.maximum(num / np.sum(num), 1e-12)
        p_eff = p * 4.0 if it < exaggeration_until else p
        pq = (p_eff - q) * num
        grad = 4.0 * ((np.diag(np.sum(pq, axis=1)) - pq) @ y)
        momentum = 0.5 if it < 250 else 0.8
        velocity = momentum * velocity - lr * grad
        y = y + velocity
        y = y - np.mean(y, axis=0)
        if it == iterations - 1:
            kl = float(np.sum(p * np.log(p / q)))
    return Projection("tsne", tuple(m.id for m in models), y, kl)


def kmeans(x: np.ndarray, k: int, seed: int, max_iter: int = 300):
    """Lloyd's algorithm with k-means++ init and farthest-point reseeding.

    Returns (assignment, centroids, objective history). The history is the
    objective after each assignment step and is non-increasing.
    """
    n = x.shape[0]
    if k > n:
        raise ValueError(f"k={k} exceeds {n} points")
    rng = np.random.default_rng(seed)

    centroids = np.empty((k, x.shape[1]), dtype=np.float64)
    centroids[0] = x[int(rng.integers(n))]
    closest = np.sum((x - centroids[0]) ** 2, axis=1)
    for j in range(1, k):
        total = float(np.sum(closest))
        if total > 0.0:
            idx = int(np.searchsorted(np.cumsum(closest), rng.random() * total))
            idx = min(idx, n - 1)
        else:
            idx = int(rng.integers(n))
        centroids[j] = x[idx]
        closest = np.minimum(closest, np.sum((x - centroids[j]) ** 2, axis=1))

    assignment = np.zeros(n, dtype=np.int64)
    history = []
    for _ in range(max_iter):
        d2 = _cross_sq(x, centroids)
        new_assignment = np.argmin(d2, axis=1)
        history.append(float(np.sum(d2[np.arange(n), new_assignment])))
        if history[-1] == 0.0 or (len(history) > 1 and
                                  np.array_equal(new_assignment, assignment)):
            assignment = new_assignment
            break
        assignment = new_assignment
        dist_own = d2[np.arange(n), assignment].copy()
        for j in range(k):
            members = assignment == j
            if np.any(members):
                centroids[j] = np.mean(x[members], axis=0)
            else:
                idx = int(np.argmax(dist_own))
                centroids[j] = x[idx]
                dist_own[idx] = 0.0
    return assignment, centroids, history


def _cross_sq(x: np.ndarray, c: np.ndarray) -> np.ndarray:
    d2 = (np.sum(x * x, axis=1)[:, None] + np.sum(c * c, axis=1)[None, :]
          - 2.0 * (x @ c.T))
    return np.maximum(d2, 0.0)


@dataclass(frozen=True)
class GridCell:
    cell: int
    count: int
    power: dict[str, float]
    difference: dict[str, float]
    power_all: float


@dataclass(frozen=True)
class InstanceGrid:
    cell_count: int
    clustered: bool
    assignment: np.ndarray = field(repr=False)
    cells: tuple[GridCell, ...] = ()


def _per_algorithm_power(models, selected_ids: set[str] | None, d: Dataset):
    """Instance power per algorithm; None where the set has no such models."""
    table: dict[Algorithm, np.ndarray | None] = {}
    for a in ALGORITHM_ORDER:
        subset = [m for m in models
                  if m.config.algorithm is a
                  and (selected_ids is None or m.id in selected_ids)]
        table[a] = predictive_power(subset, d) if subset else None
    return table


def build_grid(d: Dataset, all_models, selected_models, seed: int = 0) -> InstanceGrid:
    """Instance grid: per-cell power per algorithm plus the difference layer."""
    all_models = list(all_models)
    if not all_models:
        raise NoModels("the grid needs at least one evaluated model")
    selected_ids = {m.id for m in selected_models}

    power_all = predictive_power(all_models, d)
    per_algo_all = _per_algorithm_power(all_models, None, d)
    per_algo_sel = _per_algorithm_power(all_models, selected_ids, d)

    clustered = any(c >= CLUSTER_THRESHOLD for c in d.class_counts())
    if clustered:
        scaler = MinMaxScaler().fit(d.features)
        raw_assignment, _, _ = kmeans(scaler.transform(d.features), GRID_CELLS,
                                      seed=seed)
        groups = [np.flatnonzero(raw_assignment == j) for j in range(GRID_CELLS)]
    else:
        groups = []
        for cls in (0, 1):
            idx = np.flatnonzero(d.labels == cls)
            order = np.argsort(-power_all[idx], kind="stable")
            groups.extend([np.array([i]) for i in idx[order]])

    # order cells by mean all-model power, best first
    means = [float(np.mean(power_all[g])) if g.size else -1.0 for g in groups]
    if clustered:
        order = np.argsort([-m for m in means], kind="stable")
        groups = [groups[int(i)] for i in order]

    assignment = np.full(d.n_instances, -1, dtype=np.int64)
    cells = []
    for cell_idx, g in enumerate(groups):
        assignment[g] = cell_idx
        power, diff = {}, {}
        for a in ALGORITHM_ORDER:
            pa = per_algo_all[a]
            ps = per_algo_sel[a]
            base = float(np.mean(pa[g])) if pa is not None and g.size else 0.0
            power[a.value] = base
            if ps is not None and pa is not None and g.size:
                diff[a.value] = float(np.mean(ps[g])) - base
            else:
                diff[a.value] = 0.0
        cells.append(GridCell(cell_idx, int(g.size), power, diff,
                              float(np.mean(power_all[g])) if g.size else 0.0))
    return InstanceGrid(len(groups), clustered, assignment, tuple(cells))


@dataclass(frozen=True)
class PanelAggregates:
    beeswarm: dict[str, tuple[tuple[str, float], ...]]
    bean_all: dict[MetricId, tuple[float, ...]]
    bean_selected: dict[MetricId, tuple[float, ...]]
    mean_all: dict[MetricId, float]
    mean_selected: dict[MetricId, float | None]


def aggregate_panels(all_models, selection) -> PanelAggregates:
    """Series feeding the beeswarm and bean panels; raw metric values."""
    all_models = list(all_models)
    selected_ids = {m.id for m in selection}
    beeswarm = {}
    for a in ALGORITHM_ORDER:
        pairs = sorted(((m.id, m.overall) for m in all_models
                        if m.config.algorithm is a), key=lambda p: p[1])
        beeswarm[a.value] = tuple(pairs)
    bean_all, bean_sel, mean_all, mean_sel = {}, {}, {}, {}
    for metric in ALL_METRICS:
        values = tuple(float(m.metric_scores[metric]) for m in all_models)
        sel_values = tuple(float(m.metric_scores[metric]) for m in all_models
                           if m.id in selected_ids)
        bean_all[metric] = values
        bean_sel[metric] = sel_values
        mean_all[metric] = float(np.mean(values)) if values else 0.0
        mean_sel[metric] = float(np.mean(sel_values)) if sel_values else None
    return PanelAggregates(beeswarm, bean_all, bean_sel, mean_all, mean_sel)
