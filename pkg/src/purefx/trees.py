"""Ingestion of dumped tree ensembles (stumps and depth-2 trees) into effect tensors."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .bins import FeatureBins
from .errors import DomainError, UnsupportedTreeError
from .model import AdditiveModel, EffectTensor, dumps_canonical


@dataclass(frozen=True)
class TreeNode:
    """Leaf (value set) or split; a value < threshold, or label in the set, goes left."""

    value: float | None = None
    feature: str | None = None
    threshold: float | None = None
    label_set: frozenset | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.value is not None

    def __post_init__(self):
        if self.is_leaf:
            return
        if self.feature is None or self.left is None or self.right is None:
            raise DomainError("split node needs feature, left, and right")
        if (self.threshold is None) == (self.label_set is None):
            raise DomainError("split node needs exactly one of threshold / label set")
        if self.threshold is not None and not math.isfinite(self.threshold):
            raise DomainError(f"non-finite threshold on feature {self.feature!r}")


@dataclass(frozen=True)
class TreeEnsemble:
    trees: tuple[TreeNode, ...]
    base_score: float = 0.0


def _walk(node: TreeNode, point: dict) -> float:
    while not node.is_leaf:
        v = point[node.feature]
        if node.threshold is not None:
            go_left = float(v) < node.threshold
        else:
            go_left = v in node.label_set
        node = node.left if go_left else node.right
    return node.value


def evaluate_ensemble(ensemble: TreeEnsemble, point: dict) -> float:
    return ensemble.base_score + sum(_walk(t, point) for t in ensemble.trees)


def tree_features(node: TreeNode, index: int = 0) -> tuple[str, ...]:
    """Sorted distinct split features; errors if a path sees more than two."""
    seen: set[str] = set()
    _check_depth(node, index, ())
    _collect(node, seen)
    return tuple(sorted(seen))


def _collect(node: TreeNode, seen: set[str]):
    if not node.is_leaf:
        seen.add(node.feature)
        _collect(node.left, seen)
        _collect(node.right, seen)


def _check_depth(node: TreeNode, index: int, path: tuple[str, ...]):
    if node.is_leaf:
        return
    if len(path) >= 2:
        raise UnsupportedTreeError(f"tree {index}: a path has more than two splits")
    for child in (node.left, node.right):
        _check_depth(child, index, path + (node.feature,))


def collect_bins(ensemble: TreeEnsemble) -> dict[str, FeatureBins]:
    """Global grid per feature: sorted distinct thresholds, or the label union."""
    thresholds: dict[str, set[float]] = {}
    labels: dict[str, set[str]] = {}

    def visit(node: TreeNode):
        if node.is_leaf:
            return
        if node.threshold is not None:
            if node.feature in labels:
                raise DomainError(f"feature {node.feature!r} split both ways")
            thresholds.setdefault(node.feature, set()).add(float(node.threshold))
        else:
            if node.feature in thresholds:
                raise DomainError(f"feature {node.feature!r} split both ways")
            labels.setdefault(node.feature, set()).update(node.label_set)
        visit(node.left)
        visit(node.right)

    for t in ensemble.trees:
        visit(t)

    out = {}
    for name, edges in thresholds.items():
        out[name] = FeatureBins(name, "continuous", edges=tuple(sorted(edges)))
    for name, labs in labels.items():
        out[name] = FeatureBins(name, "categorical", labels=tuple(sorted(labs)))
    return out


def tree_to_tensor(tree: TreeNode, bins: dict[str, FeatureBins],
                   index: int = 0) -> EffectTensor:
    """Tabulate the tree's leaf value on the global grid of its split features.

    A tree splitting one feature twice yields a 1-D tensor; local thresholds
    broadcast exactly onto the (finer) global bins.
    """
    feats = tree_features(tree, index)
    if not feats:
        return EffectTensor((), np.asarray(float(tree.value)))
    for f in feats:
        if f not in bins:
            raise DomainError(f"tree {index}: no bins for feature {f!r}")
    shape = tuple(bins[f].n_cells for f in feats)
    values = np.zeros(shape)
    for cells in itertools.product(*(range(n) for n in shape)):
        point = {f: bins[f].representative(c) for f, c in zip(feats, cells)}
        values[cells] = _walk(tree, point)
    return EffectTensor(feats, values)


def ingest_ensemble(ensemble: TreeEnsemble) -> AdditiveModel:
    """Sum per-tree tensors by variable set; base score becomes the intercept."""
    bins = collect_bins(ensemble)
    acc: dict[tuple[str, ...], np.ndarray] = {(): np.asarray(float(ensemble.base_score))}
    for i, tree in enumerate(ensemble.trees):
        t = tree_to_tensor(tree, bins, i)
        if t.vars in acc:
            acc[t.vars] = acc[t.vars] + t.values
        else:
            acc[t.vars] = np.array(t.values)
    effects = {u: EffectTensor(u, v) for u, v in acc.items()}
    return AdditiveModel(bins, effects)


# --------------------------------------------------------------------------
# Canonical ensemble JSON
# --------------------------------------------------------------------------

def _node_from_dict(doc: dict) -> TreeNode:
    if "leaf" in doc:
        return TreeNode(value=float(doc["leaf"]))
    thr = doc["threshold"]
    if isinstance(thr, dict):
        return TreeNode(
            feature=doc["split"],
            label_set=frozenset(thr["labels"]),
            left=_node_from_dict(doc["left"]),
            right=_node_from_dict(doc["right"]),
        )
    return TreeNode(
        feature=doc["split"],
        threshold=float(thr),
        left=_node_from_dict(doc["left"]),
        right=_node_from_dict(doc["right"]),
    )


def _node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"leaf": node.value}
    thr = (node.threshold if node.threshold is not None
           else {"labels": sorted(node.label_set)})
    return {
        "split": node.feature,
        "threshold": thr,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def ensemble_from_json(text: str) -> TreeEnsemble:
    doc = json.loads(text)
    return TreeEnsemble(
        trees=tuple(_node_from_dict(t) for t in doc["trees"]),
        base_score=float(doc.get("base_score", 0.0)),
    )


def ensemble_to_json(ensemble: TreeEnsemble) -> str:
    return dumps_canonical({
        "base_score": ensemble.base_score,
        "trees": [_node_to_dict(t) for t in ensemble.trees],
    })
