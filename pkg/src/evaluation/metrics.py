"""Error metrics over flattened zone-slot cells."""

import numpy as np

from src.utils.errors import ShapeError


def _pair(preds, targets):
    preds = np.asarray(preds, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if preds.shape != targets.shape:
        raise ShapeError(f"Predictions {preds.shape} and targets {targets.shape} differ in shape")
    if preds.size == 0:
        raise ShapeError("Cannot score an empty prediction set")
    return preds, targets


def mae(preds, targets):
    preds, targets = _pair(preds, targets)
    return float(np.mean(np.abs(preds - targets)))


def rmse(preds, targets):
    preds, targets = _pair(preds, targets)
    return float(np.sqrt(np.mean((preds - targets) ** 2)))


def smape(preds, targets):
    """Mean of |O - A| / (|O| + |A| + 1); the +1 keeps zero cells defined."""
    preds, targets = _pair(preds, targets)
    return float(np.mean(np.abs(preds - targets) / (np.abs(preds) + np.abs(targets) + 1.0)))
