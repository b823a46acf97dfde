"""Naive baselines and the network adapter, all exposing ``predict(samples)``."""

import logging
from dataclasses import dataclass

import numpy as np

from src.models.sample import stack_samples
from src.utils.errors import DataError, LayoutError

# Configure logger
logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BaselineForecast:
    """Precomputed N x T prediction matrix; NaN where undefined."""

    name: str
    predictions: np.ndarray

    def predict(self, samples):
        slots = [s.slot_index for s in samples]
        if not slots:
            raise DataError("No samples to predict")
        out = self.predictions[:, slots].T
        if not np.isfinite(out).all():
            raise DataError(f"{self.name} has no prediction for some of slots {slots[0]}..{slots[-1]}")
        return out


def persistence_baseline(frame, target, lookback=1):
    """Predict A_t = A_{t-1} per zone.

    Slots before ``lookback`` are left undefined, matching the samples a
    network of the same lookback can be scored on.
    """
    values = frame.target_matrix(target).astype(np.float64)
    predictions = np.full(values.shape, np.nan)
    predictions[:, 1:] = values[:, :-1]
    predictions[:, :max(lookback, 1)] = np.nan
    return BaselineForecast('persistence', predictions)


def historical_average_baseline(frame, target, train_end=None):
    """Predict the training-period mean of each (zone, slot-of-day) pair.

    Args:
        frame: ZoneSlotFrame
        target: ``demand`` or ``gap``
        train_end: First slot after the training period; None uses every slot

    Returns:
        BaselineForecast
    """
    values = frame.target_matrix(target).astype(np.float64)
    n_zones, n_slots = values.shape
    train_end = n_slots if train_end is None else int(train_end)
    if not 0 < train_end <= n_slots:
        raise DataError(f"Training period end {train_end} outside 1..{n_slots}")

    per_day = frame.grid.slots_per_day
    slot_of_day = np.arange(n_slots) % per_day
    sums = np.zeros((n_zones, per_day))
    counts = np.zeros(per_day)
    np.add.at(sums.T, slot_of_day[:train_end], values[:, :train_end].T)
    np.add.at(counts, slot_of_day[:train_end], 1.0)

    zone_mean = values[:, :train_end].mean(axis=1, keepdims=True)
    profile = np.where(counts > 0, sums / np.maximum(counts, 1.0), zone_mean)
    return BaselineForecast('historical_average', profile[:, slot_of_day])


class NetworkForecaster:
    """Adapter giving a Network the baseline interface."""

    def __init__(self, net, name=None):
        self.net = net
        self.name = name or net.config.variant

    def predict(self, samples):
        if samples and samples[0].layout != self.net.layout:
            raise LayoutError(f"Samples do not follow the {self.name} network layout")
        x, _ = stack_samples(samples)
        pred, _ = self.net.forward_batch(x)
        return pred
