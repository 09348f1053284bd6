"""Gradient-boosted regression trees on logistic loss.

Exact greedy split search with first/second-order statistics: a split's
gain is the classic 0.5 * (GL^2/(HL+lambda) + GR^2/(HR+lambda)
- G^2/(H+lambda)) - gamma, and leaf weights are the Newton step
-G/(H+lambda).  Training is deterministic: no row or column sampling,
ties in gain resolve to the lowest feature index and then the smallest
threshold.  Feature importance is the split count per feature.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class TrainingError(ValueError):
    pass


@dataclass
class BoostConfig:
    rounds: int = 100
    depth: int = 3
    learning_rate: float = 0.1
    min_child_weight: float = 1.0
    reg_lambda: float = 1.0
    gamma: float = 0.0
    seed: int = 0


@dataclass
class TreeNode:
    feature: int = -1  # -1 marks a leaf
    threshold: float = 0.0
    weight: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None

    def is_leaf(self) -> bool:
        return self.feature < 0

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(len(X))
        self._fill(X, np.arange(len(X)), out)
        return out

    def _fill(self, X, idx, out):
        if self.is_leaf():
            out[idx] = self.weight
            return
        go_left = X[idx, self.feature] < self.threshold
        self.left._fill(X, idx[go_left], out)
        self.right._fill(X, idx[~go_left], out)

    def depth(self) -> int:
        if self.is_leaf():
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def count_splits(self, counts) -> None:
        if not self.is_leaf():
            counts[self.feature] += 1
            self.left.count_splits(counts)
            self.right.count_splits(counts)


@dataclass
class BoostedEnsemble:
    trees: list[TreeNode]
    config: BoostConfig
    n_features: int
    importance: np.ndarray = field(default=None)
    train_losses: list[float] = field(default_factory=list)

    def margins(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        total = np.zeros(len(X))
        for tree in self.trees:
            total += self.config.learning_rate * tree.predict(X)
        return total

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        return _sigmoid(self.margins(X))


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -500, 500)))


def _log_loss(y, margins):
    # mean log(1 + exp(-y' m)) with y' in {-1, +1}, stable at any margin
    signed = np.where(y == 1, -margins, margins)
    return float(np.mean(np.logaddexp(0.0, signed)))


def _best_split(X, g, h, idx, cfg):
    """Best (feature, threshold, gain, left_mask) over ``idx`` rows, or
    None when no split has positive gain."""
    G, H = g[idx].sum(), h[idx].sum()
    parent = G * G / (H + cfg.reg_lambda)
    best = None  # (gain, feature, threshold)
    for f in range(X.shape[1]):
        values = X[idx, f]
        order = np.argsort(values, kind="stable")
        xs = values[order]
        if xs[0] == xs[-1]:
            continue
        gl = np.cumsum(g[idx][order])[:-1]
        hl = np.cumsum(h[idx][order])[:-1]
        boundary = xs[1:] != xs[:-1]
        ok = boundary & (hl >= cfg.min_child_weight) & ((H - hl) >= cfg.min_child_weight)
        if not ok.any():
            continue
        gains = np.where(
            ok,
            0.5 * (gl**2 / (hl + cfg.reg_lambda) + (G - gl) ** 2 / (H - hl + cfg.reg_lambda) - parent)
            - cfg.gamma,
            -np.inf,
        )
        k = int(np.argmax(gains))  # first max: smallest threshold
        if gains[k] > 0 and (best is None or gains[k] > best[0]):
            best = (float(gains[k]), f, float((xs[k] + xs[k + 1]) / 2.0))
    if best is None:
        return None
    gain, f, threshold = best
    return f, threshold, gain


def _build_tree(X, g, h, idx, depth_left, cfg):
    split = _best_split(X, g, h, idx, cfg) if depth_left > 0 and len(idx) > 1 else None
    if split is None:
        G, H = g[idx].sum(), h[idx].sum()
        return TreeNode(weight=float(-G / (H + cfg.reg_lambda)))
    feature, threshold, _ = split
    go_left = X[idx, feature] < threshold
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=_build_tree(X, g, h, idx[go_left], depth_left - 1, cfg),
        right=_build_tree(X, g, h, idx[~go_left], depth_left - 1, cfg),
    )


def train_boosted(X, y, config: BoostConfig | None = None) -> BoostedEnsemble:
    """Fit the ensemble on a binary-labeled matrix (y in {0, 1})."""
    cfg = config or BoostConfig()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be 2-D with one label per row")
    if len(np.unique(y)) < 2:
        raise TrainingError("training data contains a single class")

    n = len(y)
    idx = np.arange(n)
    margins = np.zeros(n)
    trees = []
    losses = []
    for _ in range(cfg.rounds):
        p = _sigmoid(margins)
        g = p - y
        h = p * (1.0 - p)
        tree = _build_tree(X, g, h, idx, cfg.depth, cfg)
        trees.append(tree)
        margins += cfg.learning_rate * tree.predict(X)
        losses.append(_log_loss(y, margins))

    importance = np.zeros(X.shape[1], dtype=int)
    for tree in trees:
        tree.count_splits(importance)
    return BoostedEnsemble(
        trees=trees,
        config=cfg,
        n_features=X.shape[1],
        importance=importance,
        train_losses=losses,
    )


# --- persistence -------------------------------------------------------------


def _node_to_doc(node: TreeNode):
    if node.is_leaf():
        return {"weight": node.weight}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_doc(node.left),
        "right": _node_to_doc(node.right),
    }


def _node_from_doc(doc) -> TreeNode:
    if "weight" in doc:
        return TreeNode(weight=doc["weight"])
    return TreeNode(
        feature=doc["feature"],
        threshold=doc["threshold"],
        left=_node_from_doc(doc["left"]),
        right=_node_from_doc(doc["right"]),
    )


def ensemble_to_doc(model: BoostedEnsemble) -> dict:
    return {
        "kind": "boosted",
        "config": vars(model.config),
        "n_features": model.n_features,
        "trees": [_node_to_doc(t) for t in model.trees],
        "importance": model.importance.tolist(),
        "train_losses": model.train_losses,
    }


def ensemble_from_doc(doc) -> BoostedEnsemble:
    return BoostedEnsemble(
        trees=[_node_from_doc(t) for t in doc["trees"]],
        config=BoostConfig(**doc["config"]),
        n_features=doc["n_features"],
        importance=np.array(doc["importance"], dtype=int),
        train_losses=list(doc["train_losses"]),
    )


def save_ensemble(model: BoostedEnsemble, path) -> None:
    Path(path).write_text(json.dumps(ensemble_to_doc(model), sort_keys=True), encoding="utf-8")


def load_ensemble(path) -> BoostedEnsemble:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("kind") != "boosted":
        raise ValueError(f"{path}: not a boosted-ensemble file")
    return ensemble_from_doc(doc)
