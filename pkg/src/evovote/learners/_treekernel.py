"""Jitted decision-tree kernels.

Both kernels use exact split search: candidate thresholds are midpoints
between consecutive distinct sorted values, ties broken by lowest feature
index then lowest threshold (features scanned ascending, thresholds
ascending, strict improvement required).

Classification trees minimize weighted Gini impurity of the children;
regression trees (used for boosting residuals) maximize the split's sum-
of-squares reduction and store Newton leaf values sum(r)/sum(h).
"""

import numpy as np
from numba import njit

from ._rng import next_below

NO_FEATURE = -1


@njit(cache=True)
def _pick_features(state, n_features, n_pick, buf):
    """Partial Fisher-Yates pick of n_pick distinct features, returned sorted."""
    for i in range(n_features):
        buf[i] = i
    for i in range(n_pick):
        j = i + next_below(state, n_features - i)
        tmp = buf[i]
        buf[i] = buf[j]
        buf[j] = tmp
    sub = np.sort(buf[:n_pick])
    for i in range(n_pick):
        buf[i] = sub[i]


@njit(cache=True)
def grow_classification_tree(X, y, idx, max_depth, min_samples_split, n_pick, rng_state):
    """Grow a binary Gini tree over the (possibly repeated) sample indices idx.

    Returns (feature, threshold, left, right, prob, n_nodes): node arrays where
    feature == NO_FEATURE marks a leaf and prob holds per-class frequencies.
    """
    n = idx.shape[0]
    n_features = X.shape[1]
    cap = 2 * n + 1
    feature = np.full(cap, NO_FEATURE, dtype=np.int64)
    threshold = np.zeros(cap, dtype=np.float64)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    prob = np.zeros((cap, 2), dtype=np.float64)

    work = idx.copy()
    feat_buf = np.empty(n_features, dtype=np.int64)
    vals = np.empty(n, dtype=np.float64)

    # stack rows: node, start, end, depth
    stack = np.empty((cap, 4), dtype=np.int64)
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = n
    stack[0, 3] = 0
    top = 1
    n_nodes = 1

    while top > 0:
        top -= 1
        node = stack[top, 0]
        start = stack[top, 1]
        end = stack[top, 2]
        depth = stack[top, 3]
        m = end - start
        c1 = 0
        for i in range(start, end):
            c1 += y[work[i]]
        c0 = m - c1
        prob[node, 0] = c0 / m
        prob[node, 1] = c1 / m

        if depth >= max_depth or m < min_samples_split or c0 == 0 or c1 == 0:
            continue

        _pick_features(rng_state, n_features, n_pick, feat_buf)

        best_score = np.inf  # weighted child Gini, lower is better
        best_feature = NO_FEATURE
        best_threshold = 0.0
        for fi in range(n_pick):
            f = feat_buf[fi]
            for i in range(m):
                vals[i] = X[work[start + i], f]
            order = np.argsort(vals[:m])
            nl = 0
            c1l = 0
            for i in range(m - 1):
                w = work[start + order[i]]
                nl += 1
                c1l += y[w]
                vi = vals[order[i]]
                vj = vals[order[i + 1]]
                if vj <= vi:
                    continue
                nr = m - nl
                c1r = c1 - c1l
                p1l = c1l / nl
                p1r = c1r / nr
                gini_l = 2.0 * p1l * (1.0 - p1l)
                gini_r = 2.0 * p1r * (1.0 - p1r)
                sc = (nl * gini_l + nr * gini_r) / m
                if sc < best_score:
                    best_score = sc
                    best_feature = f
                    best_threshold = 0.5 * (vi + vj)

        if best_feature == NO_FEATURE:
            continue

        # partition work[start:end] on the chosen split
        lo = start
        for i in range(start, end):
            w = work[i]
            if X[w, best_feature] <= best_threshold:
                work[i] = work[lo]
                work[lo] = w
                lo += 1
        nl = lo - start

        node_l = n_nodes
        node_r = n_nodes + 1
        n_nodes += 2
        left[node] = node_l
        right[node] = node_r
        feature[node] = best_feature
        threshold[node] = best_threshold
        stack[top, 0] = node_l
        stack[top, 1] = start
        stack[top, 2] = start + nl
        stack[top, 3] = depth + 1
        top += 1
        stack[top, 0] = node_r
        stack[top, 1] = start + nl
        stack[top, 2] = end
        stack[top, 3] = depth + 1
        top += 1

    return feature[:n_nodes], threshold[:n_nodes], left[:n_nodes], right[:n_nodes], prob[:n_nodes], n_nodes


@njit(cache=True)
def grow_regression_tree(X, r, h, idx, max_depth, min_samples_split, rng_state):
    """Least-squares tree on residuals r with Newton leaf values sum(r)/sum(h)."""
    n = idx.shape[0]
    n_features = X.shape[1]
    cap = 2 * n + 1
    feature = np.full(cap, NO_FEATURE, dtype=np.int64)
    threshold = np.zeros(cap, dtype=np.float64)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    value = np.zeros(cap, dtype=np.float64)

    work = idx.copy()
    vals = np.empty(n, dtype=np.float64)
    rs = np.empty(n, dtype=np.float64)

    stack = np.empty((cap, 4), dtype=np.int64)
    stack[0, 0] = 0
    stack[0, 1] = 0
    stack[0, 2] = n
    stack[0, 3] = 0
    top = 1
    n_nodes = 1

    while top > 0:
        top -= 1
        node = stack[top, 0]
        start = stack[top, 1]
        end = stack[top, 2]
        depth = stack[top, 3]
        m = end - start

        sum_r = 0.0
        sum_h = 0.0
        for i in range(start, end):
            sum_r += r[work[i]]
            sum_h += h[work[i]]
        value[node] = sum_r / sum_h if sum_h > 1e-12 else 0.0

        if depth >= max_depth or m < min_samples_split:
            continue

        # maximize S_l^2/n_l + S_r^2/n_r (total sum of squares is constant)
        best_gain = -np.inf
        best_feature = NO_FEATURE
        best_threshold = 0.0
        for f in range(n_features):
            for i in range(m):
                w = work[start + i]
                vals[i] = X[w, f]
                rs[i] = r[w]
            order = np.argsort(vals[:m])
            s_l = 0.0
            for i in range(m - 1):
                s_l += rs[order[i]]
                vi = vals[order[i]]
                vj = vals[order[i + 1]]
                if vj <= vi:
                    continue
                nl = i + 1
                nr = m - nl
                s_r = sum_r - s_l
                gain = s_l * s_l / nl + s_r * s_r / nr
                if gain > best_gain:
                    best_gain = gain
                    best_feature = f
                    best_threshold = 0.5 * (vi + vj)

        if best_feature == NO_FEATURE:
            continue

        lo = start
        for i in range(start, end):
            w = work[i]
            if X[w, best_feature] <= best_threshold:
                work[i] = work[lo]
                work[lo] = w
                lo += 1
        nl = lo - start

        node_l = n_nodes
        node_r = n_nodes + 1
        n_nodes += 2
        left[node] = node_l
        right[node] = node_r
        feature[node] = best_feature
        threshold[node] = best_threshold
        stack[top, 0] = node_l
        stack[top, 1] = start
        stack[top, 2] = start + nl
        stack[top, 3] = depth + 1
        top += 1
        stack[top, 0] = node_r
        stack[top, 1] = start + nl
        stack[top, 2] = end
        stack[top, 3] = depth + 1
        top += 1

    return feature[:n_nodes], threshold[:n_nodes], left[:n_nodes], right[:n_nodes], value[:n_nodes], n_nodes


@njit(cache=True)
def predict_proba_tree(feature, threshold, left, right, prob, X, out):
    """Accumulate each row's leaf class frequencies into out (n, 2)."""
    for i in range(X.shape[0]):
        node = 0
        while feature[node] != NO_FEATURE:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i, 0] += prob[node, 0]
        out[i, 1] += prob[node, 1]


@njit(cache=True)
def predict_value_tree(feature, threshold, left, right, value, X, out):
    """Accumulate each row's leaf value into out (n,)."""
    for i in range(X.shape[0]):
        node = 0
        while feature[node] != NO_FEATURE:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] += value[node]
