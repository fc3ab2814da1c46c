"""Constant mean-target predictor: always recommends the same engine."""

from __future__ import annotations

import numpy as np

from .dataset import MetaDataset


class MeanBaselinePredictor:
    variant = "mean_baseline"

    def __init__(self, mean: np.ndarray, feature_dim: int | None = None):
        self.mean = np.asarray(mean, dtype=np.float64)
        self.feature_dim = feature_dim

    @property
    def target_dim(self) -> int:
        return len(self.mean)

    def predict(self, features: np.ndarray) -> np.ndarray:
        x = np.asarray(features, dtype=np.float64)
        if x.ndim == 1:
            return self.mean.copy()
        return np.tile(self.mean, (len(x), 1))


def mean_baseline(train: MetaDataset) -> MeanBaselinePredictor:
    return MeanBaselinePredictor(train.target_matrix().mean(axis=0), train.feature_dim)
