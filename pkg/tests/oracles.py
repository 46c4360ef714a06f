"""Independent reference implementations used to verify the library.

Everything here is deliberately naive (double loops, textbook formulas,
Jacobi rotations) and shares no code with the package under test.
"""

import numpy as np


def naive_mse(y_true, y_pred):
    total = 0.0
    count = 0
    for i in range(y_true.shape[0]):
        for j in range(y_true.shape[1]):
            d = y_true[i, j] - y_pred[i, j]
            total += d * d
            count += 1
    return total / count


def naive_pearson(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    num = sum((a - mx) * (b - my) for a, b in zip(x, y))
    dx = sum((a - mx) ** 2 for a in x) ** 0.5
    dy = sum((b - my) ** 2 for b in y) ** 0.5
    if dx == 0.0 or dy == 0.0:
        return 0.0
    return num / (dx * dy)


def jacobi_eigenvalues(A, sweeps=100, tol=1e-14):
    """Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(A, dtype=np.float64, copy=True)
    n = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(sum(A[i, j] ** 2 for i in range(n)
                          for j in range(n) if i != j))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) < 1e-300:
                    continue
                theta = 0.5 * np.arctan2(2.0 * A[p, q], A[q, q] - A[p, p])
                c, s = np.cos(theta), np.sin(theta)
                J = np.eye(n)
                J[p, p] = c
                J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
    return np.sort(np.diag(A))[::-1]


def split_score(y, mask_left):
    """Weighted child impurity: sum over children of n_child * total
    per-output population variance (== child SSE around child means)."""
    score = 0.0
    for mask in (mask_left, ~mask_left):
        part = y[mask]
        if part.shape[0] == 0:
            return np.inf
        score += np.sum((part - part.mean(axis=0)) ** 2)
    return score


def brute_force_tree(X, y, max_depth, min_samples_split=2, min_samples_leaf=1,
                     depth=0):
    """Exhaustive CART: evaluates every (feature, midpoint) pair at every
    node; ties broken by lowest feature then smallest threshold. Returns a
    nested dict mirroring the library's routing rule (left iff x <= thr).
    """
    n = X.shape[0]
    constant = bool(np.all(y.max(axis=0) == y.min(axis=0)))
    if depth >= max_depth or n < min_samples_split or constant:
        return {"leaf": leaf_value(y)}
    # same relative tie tolerance as the library: mathematically tied
    # splits must resolve to the first candidate scanned
    tie_tol = 1e-12 * np.sum((y - y.mean(axis=0)) ** 2)
    best = (np.inf, None, None)
    for f in range(X.shape[1]):
        values = np.unique(X[:, f])
        for lo, hi in zip(values[:-1], values[1:]):
            thr = 0.5 * (lo + hi)
            mask = X[:, f] <= thr
            if mask.sum() < min_samples_leaf or (~mask).sum() < min_samples_leaf:
                continue
            score = split_score(y, mask)
            if score < best[0] - tie_tol:
                best = (score, f, thr)
    if best[1] is None:
        return {"leaf": leaf_value(y)}
    _, f, thr = best
    mask = X[:, f] <= thr
    return {
        "feature": f,
        "threshold": thr,
        "left": brute_force_tree(X[mask], y[mask], max_depth,
                                 min_samples_split, min_samples_leaf, depth + 1),
        "right": brute_force_tree(X[~mask], y[~mask], max_depth,
                                  min_samples_split, min_samples_leaf, depth + 1),
    }


def leaf_value(y):
    value = y.mean(axis=0)
    spread_free = y.max(axis=0) == y.min(axis=0)
    return np.where(spread_free, y[0], value)


def brute_force_predict(node, x):
    while "leaf" not in node:
        node = node["left"] if x[node["feature"]] <= node["threshold"] \
            else node["right"]
    return node["leaf"]


def flat_tree_to_nested(tree, node=0):
    if tree.feature[node] < 0:
        return {"leaf": tree.leaf_values[node]}
    return {
        "feature": int(tree.feature[node]),
        "threshold": float(tree.threshold[node]),
        "left": flat_tree_to_nested(tree, int(tree.left[node])),
        "right": flat_tree_to_nested(tree, int(tree.right[node])),
    }


def trees_equal(a, b, atol=0.0):
    if ("leaf" in a) != ("leaf" in b):
        return False
    if "leaf" in a:
        return np.allclose(a["leaf"], b["leaf"], rtol=0.0, atol=atol)
    if a["feature"] != b["feature"]:
        return False
    if abs(a["threshold"] - b["threshold"]) > atol:
        return False
    return (trees_equal(a["left"], b["left"], atol)
            and trees_equal(a["right"], b["right"], atol))


def finite_difference_gradients(fn, arrays, h=1e-6):
    """Central finite differences of a scalar function of several arrays."""
    grads = []
    for arr in arrays:
        g = np.zeros_like(arr)
        it = np.nditer(arr, flags=["multi_index"])
        while not it.finished:
            idx = it.multi_index
            orig = arr[idx]
            arr[idx] = orig + h
            up = fn()
            arr[idx] = orig - h
            down = fn()
            arr[idx] = orig
            g[idx] = (up - down) / (2.0 * h)
            it.iternext()
        grads.append(g)
    return grads
