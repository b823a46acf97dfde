"""Lookback sample assembly, chronological splitting and standardisation."""

import logging
import math
from dataclasses import dataclass

import numpy as np

from src.dataset.aggregate import repeat_across_time, repeat_across_zones
from src.models.sample import FeatureLayout, FeatureStats, InputSample
from src.utils.errors import ConfigError, DataError, LayoutError

# Configure logger
logger = logging.getLogger(__name__)


def _temporal_rows(frame):
    """T x (C + 2) matrix of [weather one-hot, temperature, pm25] per slot."""
    onehot = np.eye(frame.n_weather_categories)[frame.weather_category]
    return np.concatenate([onehot, frame.temperature[:, None], frame.pm25[:, None]], axis=1)


def _assemble(frame, layout, t, temporal_rows, poi_slots):
    n = frame.num_zones
    lag_slots = t - np.arange(1, layout.lookback + 1)  # t-1 ... t-b
    spatiotemporal = np.concatenate(
        [var[:, lag_slots] for var in (frame.demand, frame.supplied, frame.gap, frame.congestion)],
        axis=1,
    )
    temporal = repeat_across_zones(temporal_rows[lag_slots].ravel(), n)
    context = np.concatenate([
        repeat_across_zones(np.append(frame.time_of_day[t], frame.day_of_week[t]), n),
        poi_slots[:, :, t],
    ], axis=1)
    return np.concatenate([spatiotemporal, temporal, context], axis=1).astype(np.float64)


def _check_lookback(frame, lookback):
    if lookback < 1:
        raise ConfigError(f"lookback must be at least 1, got {lookback}")
    if lookback >= frame.total_slots:
        raise DataError(f"lookback {lookback} needs more than {frame.total_slots} slots")


def build_sample(frame, t, lookback, standardizer=None, target='demand'):
    """Assemble the sample predicting slot ``t`` (lags t-1 ... t-b)."""
    _check_lookback(frame, lookback)
    if not lookback <= t < frame.total_slots:
        raise DataError(f"Slot {t} needs {lookback} previous slots and must be below {frame.total_slots}")
    layout = FeatureLayout(lookback, frame.n_weather_categories)
    x = _assemble(frame, layout, t, _temporal_rows(frame), repeat_across_time(frame.poi, frame.total_slots))
    if standardizer is not None:
        x = standardizer.apply(x)
    targets = frame.target_matrix(target)
    return InputSample(x=x, target=targets[:, t].astype(np.float64), slot_index=t, layout=layout)


def build_samples(frame, lookback, standardizer=None, target='demand'):
    """One sample per slot t in [b, T), all sharing the unmasked layout.

    Args:
        frame: ZoneSlotFrame to read
        lookback: Depth b of the lag window
        standardizer: FeatureStats fitted on training rows, or None for raw values
        target: ``demand`` or ``gap``

    Returns:
        list: InputSample per prediction slot, in chronological order
    """
    _check_lookback(frame, lookback)
    layout = FeatureLayout(lookback, frame.n_weather_categories)
    temporal_rows = _temporal_rows(frame)
    poi_slots = repeat_across_time(frame.poi, frame.total_slots)
    targets = frame.target_matrix(target).astype(np.float64)

    samples = []
    for t in range(lookback, frame.total_slots):
        x = _assemble(frame, layout, t, temporal_rows, poi_slots)
        if standardizer is not None:
            x = standardizer.apply(x)
        samples.append(InputSample(x=x, target=targets[:, t].copy(), slot_index=t, layout=layout))
    return samples


def split_chronological(samples, train_frac, val_frac):
    """Contiguous train/val/test split without shuffling.

    Boundaries are the floors of n * train_frac and n * (train_frac + val_frac),
    so the train and val counts are floored and the remainder goes to test.
    """
    if train_frac <= 0 or val_frac <= 0 or train_frac + val_frac >= 1:
        raise ConfigError(f"Invalid split fractions train={train_frac}, val={val_frac}")
    n = len(samples)
    train_end = math.floor(n * train_frac + 1e-9)
    val_end = math.floor(n * (train_frac + val_frac) + 1e-9)
    train, val, test = samples[:train_end], samples[train_end:val_end], samples[val_end:]
    if not train or not val or not test:
        raise DataError(
            f"Split of {n} samples gives empty partition(s): {len(train)}/{len(val)}/{len(test)}"
        )
    return train, val, test


def fit_feature_stats(train_samples):
    """Per-column mean/std over every zone and training slot."""
    if not train_samples:
        raise DataError("Cannot fit feature statistics on an empty training set")
    layout = train_samples[0].layout
    x = np.stack([s.x for s in train_samples])
    return FeatureStats.fit(x, layout.passthrough)


def standardize_samples(samples, stats):
    return [InputSample(x=stats.apply(s.x), target=s.target.copy(), slot_index=s.slot_index, layout=s.layout)
            for s in samples]


def apply_feature_mask(samples, groups):
    """Restrict samples to the listed variable classes.

    A mask naming every group present returns the input list unchanged.
    """
    if not samples:
        return []
    layout = samples[0].layout
    groups = tuple(groups)
    if set(groups) == set(layout.groups):
        return samples
    masked = layout.masked(groups)
    cols = layout.group_columns(groups)
    return [InputSample(x=s.x[:, cols], target=s.target.copy(), slot_index=s.slot_index, layout=masked)
            for s in samples]


@dataclass(frozen=True, eq=False)
class PreparedDataset:
    """Standardised, masked and split samples of one frame and target."""

    frame: object
    target: str
    layout: FeatureLayout
    stats: FeatureStats
    train: list
    val: list
    test: list

    @property
    def n_zones(self):
        return self.frame.num_zones

    def split(self, name):
        if name not in ('train', 'val', 'test'):
            raise ConfigError(f"Unknown split '{name}'")
        return getattr(self, name)


def prepare_dataset(frame, data_config, model_config, target=None, stats=None):
    """Build, split, standardise (train statistics only) and mask.

    Args:
        frame: ZoneSlotFrame
        data_config: DataConfig with split fractions and the standardise flag
        model_config: ModelConfig providing lookback, target and feature_groups
        target: Overrides model_config.target when given
        stats: Previously fitted FeatureStats (e.g. from a checkpoint) used instead of refitting

    Returns:
        PreparedDataset
    """
    target = target or model_config.target
    raw = build_samples(frame, model_config.lookback, target=target)
    train, val, test = split_chronological(raw, data_config.train_frac, data_config.val_frac)

    if stats is None:
        stats = fit_feature_stats(train)
        if not data_config.standardize:
            stats = FeatureStats(np.zeros_like(stats.mean), np.ones_like(stats.scale), stats.passthrough)
    train, val, test = (standardize_samples(part, stats) for part in (train, val, test))

    groups = model_config.feature_groups
    try:
        train, val, test = (apply_feature_mask(part, groups) for part in (train, val, test))
    except LayoutError as e:
        raise ConfigError(f"Invalid feature_groups {groups}: {e}") from e

    logger.info(
        f"Prepared {target} samples: train={len(train)} val={len(val)} test={len(test)} "
        f"zones={frame.num_zones} features={train[0].layout.n_features}"
    )
    return PreparedDataset(frame, target, train[0].layout, stats, train, val, test)
