"""Multi-output CART regression tree and bootstrap-averaged random forest.

Splits maximize the summed variance reduction across all target columns;
ties resolve to the lowest feature index, then the lowest threshold.
Leaves predict the mean target vector of their samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import ConfigError
from .dataset import MetaDataset


@dataclass(frozen=True)
class TreeConfig:
    min_samples_split: int = 100

    def __post_init__(self) -> None:
        if self.min_samples_split < 2:
            raise ConfigError(f"min_samples_split must be >= 2, got {self.min_samples_split}")


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 300
    min_samples_split: int = 100
    bootstrap: bool = True
    max_features: int | None = None  # None -> ceil(d / 3)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_trees < 1:
            raise ConfigError(f"n_trees must be >= 1, got {self.n_trees}")
        if self.min_samples_split < 2:
            raise ConfigError(f"min_samples_split must be >= 2, got {self.min_samples_split}")


class _TreeBuilder:
    def __init__(self, x, y, min_split, max_features, rng):
        self.x = x
        self.y = y
        self.min_split = min_split
        self.max_features = max_features
        self.rng = rng
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[np.ndarray] = []

    def build(self, idx: np.ndarray) -> int:
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(self.y[idx].mean(axis=0))
        if len(idx) < self.min_split:
            return node

        d = self.x.shape[1]
        if self.max_features is not None and self.max_features < d:
            feats = np.sort(self.rng.choice(d, size=self.max_features, replace=False))
        else:
            feats = np.arange(d)
        f_local, thr, gain = kernels.best_split(
            np.ascontiguousarray(self.x[np.ix_(idx, feats)]),
            np.ascontiguousarray(self.y[idx]),
        )
        if f_local < 0 or gain <= 0.0:
            return node
        f = int(feats[f_local])
        mask = self.x[idx, f] <= thr
        self.feature[node] = f
        self.threshold[node] = thr
        self.left[node] = self.build(idx[mask])
        self.right[node] = self.build(idx[~mask])
        return node


class TreePredictor:
    variant = "tree"

    def __init__(self, feature, threshold, left, right, value, config: TreeConfig):
        self.feature = np.asarray(feature, dtype=np.int32)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int32)
        self.right = np.asarray(right, dtype=np.int32)
        self.value = np.asarray(value, dtype=np.float64)
        self.config = config
        self.feature_dim: int | None = None

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def target_dim(self) -> int:
        return self.value.shape[1]

    def predict(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=np.float64)
        single = x.ndim == 1
        x = np.atleast_2d(x)
        node = np.zeros(len(x), dtype=np.int64)
        active = self.feature[node] >= 0
        while active.any():
            rows = np.flatnonzero(active)
            cur = node[rows]
            go_left = x[rows, self.feature[cur]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] >= 0
        out = self.value[node]
        return out[0] if single else out


def _fit_tree(x, y, min_split, max_features=None, rng=None) -> TreePredictor:
    builder = _TreeBuilder(x, y, min_split, max_features, rng or np.random.default_rng(0))
    builder.build(np.arange(len(x)))
    tree = TreePredictor(
        builder.feature,
        builder.threshold,
        builder.left,
        builder.right,
        np.stack(builder.value),
        TreeConfig(min_samples_split=min_split),
    )
    tree.feature_dim = x.shape[1]
    return tree


def train_tree(train: MetaDataset, cfg: TreeConfig | None = None) -> TreePredictor:
    cfg = cfg or TreeConfig()
    return _fit_tree(train.feature_matrix(), train.target_matrix(), cfg.min_samples_split)


class ForestPredictor:
    variant = "forest"

    def __init__(self, trees: list[TreePredictor], config: ForestConfig):
        self.trees = trees
        self.config = config
        self.feature_dim = trees[0].feature_dim

    @property
    def target_dim(self) -> int:
        return self.trees[0].target_dim

    def predict(self, features: np.ndarray) -> np.ndarray:
        acc = self.trees[0].predict(features)
        for tree in self.trees[1:]:
            acc = acc + tree.predict(features)
        return acc / len(self.trees)


def train_forest(train: MetaDataset, cfg: ForestConfig | None = None) -> ForestPredictor:
    """Bootstrap-resampled trees with per-split feature subsampling."""
    cfg = cfg or ForestConfig()
    x = train.feature_matrix()
    y = train.target_matrix()
    n, d = x.shape
    max_features = cfg.max_features if cfg.max_features is not None else math.ceil(d / 3)
    max_features = min(max_features, d)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.n_trees)
    trees = []
    for t in range(cfg.n_trees):
        rng = np.random.default_rng(seeds[t])
        idx = rng.integers(0, n, size=n) if cfg.bootstrap else np.arange(n)
        trees.append(_fit_tree(x[idx], y[idx], cfg.min_samples_split, max_features, rng))
    return ForestPredictor(trees, cfg)
