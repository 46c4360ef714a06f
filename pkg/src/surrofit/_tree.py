"""Numba kernels for CART growth and traversal.

Trees are flat parallel arrays: ``feature[i] < 0`` marks node ``i`` as a
leaf whose value row lives in ``leaf_values[i]``; internal nodes route a
sample left iff ``x[feature] <= threshold``.

Split search scans features in ascending index order and candidate
thresholds (midpoints between consecutive distinct sorted values) in
ascending order, keeping the first strict improvement, which yields the
lowest-feature-then-smallest-threshold tie-break. The split score is the
summed squared deviation of each child from its own per-output means,
computed from running sums of node-mean-centered targets.

Row segments are reordered into the winning feature's sorted order before
recursing, so summation order (and therefore every bit of the result)
depends only on feature values, not on input row order, whenever feature
values are distinct.
"""

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _next_u64(state):
    # splitmix64 step: returns (new_state, output)
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True)
def _sample_features(feat_buf, n_features, m, state):
    # partial Fisher-Yates, then ascending sort of the first m entries
    for i in range(n_features):
        feat_buf[i] = i
    for i in range(m):
        state, z = _next_u64(state)
        j = i + int(z % np.uint64(n_features - i))
        feat_buf[i], feat_buf[j] = feat_buf[j], feat_buf[i]
    for i in range(1, m):
        key = feat_buf[i]
        j = i - 1
        while j >= 0 and feat_buf[j] > key:
            feat_buf[j + 1] = feat_buf[j]
            j -= 1
        feat_buf[j + 1] = key
    return state


@njit(cache=True)
def grow_tree(X, Y, rows, max_depth, min_samples_split, min_samples_leaf,
              m_features, rng_state):
    """Grow one CART tree on the given (possibly repeated) row indices.

    Returns (feature, threshold, left, right, leaf_values, n_nodes); the
    arrays are oversized to capacity and must be sliced by the caller.
    """
    n = rows.shape[0]
    n_features = X.shape[1]
    n_outputs = Y.shape[1]
    cap = 2 * n + 1
    feature = np.full(cap, -1, np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, np.int64)
    right = np.full(cap, -1, np.int64)
    leaf_values = np.zeros((cap, n_outputs))

    order = rows.copy()
    feat_buf = np.empty(n_features, np.int64)
    mu = np.empty(n_outputs)
    y_min = np.empty(n_outputs)
    y_max = np.empty(n_outputs)
    sum_left = np.empty(n_outputs)
    tot_sum = np.empty(n_outputs)

    n_nodes = 1
    stack = [(0, 0, n, 0)]
    while len(stack) > 0:
        node, lo, hi, depth = stack.pop()
        m = hi - lo

        for p in range(n_outputs):
            v = Y[order[lo], p]
            mu[p] = v
            y_min[p] = v
            y_max[p] = v
        for i in range(lo + 1, hi):
            r = order[i]
            for p in range(n_outputs):
                v = Y[r, p]
                mu[p] += v
                if v < y_min[p]:
                    y_min[p] = v
                if v > y_max[p]:
                    y_max[p] = v
        constant = True
        for p in range(n_outputs):
            mu[p] /= m
            if y_min[p] != y_max[p]:
                constant = False

        if constant or depth >= max_depth or m < min_samples_split:
            for p in range(n_outputs):
                # exact value for zero-spread outputs, mean otherwise
                leaf_values[node, p] = y_min[p] if y_min[p] == y_max[p] else mu[p]
            continue

        # node-mean-centered totals, shared across candidate features
        total_sq = 0.0
        for p in range(n_outputs):
            tot_sum[p] = 0.0
        for i in range(lo, hi):
            r = order[i]
            for p in range(n_outputs):
                d = Y[r, p] - mu[p]
                total_sq += d * d
                tot_sum[p] += d
        # mathematically tied splits can differ by rounding noise in the
        # incremental sums; a relative tolerance keeps the first candidate
        # (lowest feature, smallest threshold) as the declared winner
        tie_tol = 1e-12 * total_sq

        if m_features < n_features:
            rng_state = _sample_features(feat_buf, n_features, m_features,
                                         rng_state)
            n_cand = m_features
        else:
            for i in range(n_features):
                feat_buf[i] = i
            n_cand = n_features

        best_score = np.inf
        best_feature = -1
        best_pos = -1
        best_threshold = 0.0
        best_order = np.empty(0, np.int64)

        vals = np.empty(m)
        for c in range(n_cand):
            f = feat_buf[c]
            for i in range(m):
                vals[i] = X[order[lo + i], f]
            idx = np.argsort(vals)
            sq_left = 0.0
            for p in range(n_outputs):
                sum_left[p] = 0.0
            for i in range(m - 1):
                r = order[lo + idx[i]]
                for p in range(n_outputs):
                    d = Y[r, p] - mu[p]
                    sq_left += d * d
                    sum_left[p] += d
                n_left = i + 1
                n_right = m - n_left
                if n_left < min_samples_leaf or n_right < min_samples_leaf:
                    continue
                v0 = vals[idx[i]]
                v1 = vals[idx[i + 1]]
                if v0 == v1:
                    continue
                ssl = 0.0
                ssr = 0.0
                for p in range(n_outputs):
                    sl = sum_left[p]
                    sr = tot_sum[p] - sl
                    ssl += sl * sl
                    ssr += sr * sr
                score = total_sq - ssl / n_left - ssr / n_right
                if score < best_score - tie_tol:
                    best_score = score
                    best_feature = f
                    best_pos = i
                    best_threshold = 0.5 * (v0 + v1)
                    best_order = idx.copy()

        if best_feature < 0:
            for p in range(n_outputs):
                leaf_values[node, p] = y_min[p] if y_min[p] == y_max[p] else mu[p]
            continue

        seg = np.empty(m, np.int64)
        for i in range(m):
            seg[i] = order[lo + best_order[i]]
        for i in range(m):
            order[lo + i] = seg[i]

        feature[node] = best_feature
        threshold[node] = best_threshold
        left_id = n_nodes
        right_id = n_nodes + 1
        n_nodes += 2
        left[node] = left_id
        right[node] = right_id
        mid = lo + best_pos + 1
        stack.append((right_id, mid, hi, depth + 1))
        stack.append((left_id, lo, mid, depth + 1))
    return feature, threshold, left, right, leaf_values, n_nodes


@njit(cache=True)
def accumulate_tree_predictions(feature, threshold, left, right, leaf_values,
                                X, out):
    for r in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[r, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        for p in range(out.shape[1]):
            out[r, p] += leaf_values[node, p]
