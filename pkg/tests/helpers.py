"""Shared test utilities: independent oracles and random instance builders.

The oracles here are deliberately plain-Python loops, separate from the
vectorized engine code paths they check.
"""

import itertools

import numpy as np

from purefx import (AdditiveModel, EffectTensor, FeatureBins, TreeEnsemble,
                    TreeNode, WeightDensity, predict)

FEATURES = ("f1", "f2", "f3")


# --------------------------------------------------------------------------
# Loop-based oracles
# --------------------------------------------------------------------------

def oracle_slice_means(values, weights):
    """All conditional weighted slice means, computed cell by cell."""
    values = np.asarray(values)
    weights = np.asarray(weights)
    means = []
    for axis in range(values.ndim):
        other = [r for r in range(values.ndim) if r != axis]
        for fixed in itertools.product(*(range(values.shape[r]) for r in other)):
            num = 0.0
            den = 0.0
            for k in range(values.shape[axis]):
                idx = [0] * values.ndim
                idx[axis] = k
                for r, c in zip(other, fixed):
                    idx[r] = c
                num += weights[tuple(idx)] * values[tuple(idx)]
                den += weights[tuple(idx)]
            if den > 0:
                means.append(num / den)
    return means


def oracle_matrix_mass(values, weights):
    """Sum_ij w_ij (|r_i| + |c_j|) with r, c the weighted row/column sums."""
    values = np.asarray(values)
    weights = np.asarray(weights)
    m, n = values.shape
    r = [sum(weights[i, j] * values[i, j] for j in range(n)) for i in range(m)]
    c = [sum(weights[i, j] * values[i, j] for i in range(m)) for j in range(n)]
    return sum(weights[i, j] * (abs(r[i]) + abs(c[j]))
               for i in range(m) for j in range(n))


def oracle_grid_fanova(values):
    """Uniform-weight fANOVA of a matrix by per-axis conditional means."""
    values = np.asarray(values)
    overall = values.mean()
    row = values.mean(axis=1) - overall
    col = values.mean(axis=0) - overall
    inter = values - overall - row[:, None] - col[None, :]
    return overall, row, col, inter


def tree_eval(node, point):
    while node.value is None:
        v = point[node.feature]
        if node.threshold is not None:
            go_left = float(v) < node.threshold
        else:
            go_left = v in node.label_set
        node = node.left if go_left else node.right
    return node.value


def ensemble_eval(ensemble, point):
    return ensemble.base_score + sum(tree_eval(t, point) for t in ensemble.trees)


# --------------------------------------------------------------------------
# Random instances
# --------------------------------------------------------------------------

def random_model(rng, max_features=3, max_order=3, max_cells=8):
    """A random additive model over continuous features with random tensors."""
    n_feat = int(rng.integers(1, max_features + 1))
    names = FEATURES[:n_feat]
    bins = {}
    for name in names:
        n_cells = int(rng.integers(2, max_cells + 1))
        edges = np.sort(rng.uniform(-2.0, 2.0, size=n_cells - 1))
        while len(np.unique(edges)) != len(edges):
            edges = np.sort(rng.uniform(-2.0, 2.0, size=n_cells - 1))
        bins[name] = FeatureBins(name, "continuous", edges=tuple(edges))
    effects = {(): EffectTensor((), np.asarray(float(rng.normal())))}
    for order in range(1, min(max_order, n_feat) + 1):
        for u in itertools.combinations(names, order):
            if rng.random() < 0.8:
                shape = tuple(bins[f].n_cells for f in u)
                effects[u] = EffectTensor(u, rng.normal(size=shape))
    return AdditiveModel(bins, effects)


def random_density(rng, model, positive=True):
    """Independent random weight tables for every subset the cascade touches."""
    subsets = set()
    for u in model.effects:
        for r in range(len(u) + 1):
            subsets.update(itertools.combinations(u, r))
    tables = {}
    for u in subsets:
        shape = tuple(model.bins[f].n_cells for f in u)
        t = np.abs(rng.normal(size=shape)) + (0.05 if positive else 0.0)
        tables[u] = t / t.sum()
    return WeightDensity(tables)


def uniform_density(model):
    subsets = set()
    for u in model.effects:
        for r in range(len(u) + 1):
            subsets.update(itertools.combinations(u, r))
    tables = {}
    for u in subsets:
        shape = tuple(model.bins[f].n_cells for f in u)
        t = np.ones(shape)
        tables[u] = t / t.sum()
    return WeightDensity(tables)


def grid_points(model):
    """One representative point per cell of the full feature grid."""
    names = sorted(model.bins)
    ranges = [range(model.bins[n].n_cells) for n in names]
    for cells in itertools.product(*ranges):
        yield {n: model.bins[n].representative(c) for n, c in zip(names, cells)}


def grid_predictions(model):
    return np.array([predict(model, p) for p in grid_points(model)])


def random_tree(rng, features, thresholds_per_feature=3):
    """A random tree of depth <= 2 over continuous features."""

    def leaf():
        return TreeNode(value=float(rng.normal()))

    def split(depth):
        f = str(rng.choice(features))
        thr = float(rng.integers(1, thresholds_per_feature + 1)) / (
            thresholds_per_feature + 1)
        kids = []
        for _ in range(2):
            if depth < 1 and rng.random() < 0.6:
                kids.append(split(depth + 1))
            else:
                kids.append(leaf())
        return TreeNode(feature=f, threshold=thr, left=kids[0], right=kids[1])

    if rng.random() < 0.1:
        return leaf()
    return split(0)


def random_ensemble(rng, max_trees=50, n_features=3):
    features = FEATURES[:n_features]
    n = int(rng.integers(1, max_trees + 1))
    trees = tuple(random_tree(rng, features) for _ in range(n))
    return TreeEnsemble(trees=trees, base_score=float(rng.normal()))


def random_points(rng, features, n):
    return [{f: float(rng.uniform(-0.5, 1.5)) for f in features} for _ in range(n)]
