"""Feature layout, standardisation statistics and assembled input samples.

Canonical column order of X_t (lag t-1 first everywhere):

    demand lags (b) | supplied lags (b) | gap lags (b) | congestion lags (b)
    | per lag: [weather one-hot (C), temperature, pm25]
    | time-of-day (3) | day-of-week (1) | poi (1)

A masked layout keeps the same order but drops whole variable classes.
"""

from dataclasses import dataclass

import msgspec
import numpy as np

from src.config.run_config import FEATURE_GROUPS
from src.models.grid import TIME_OF_DAY
from src.utils.errors import LayoutError, ShapeError

LAYOUT_VERSION = 1
SPATIOTEMPORAL_VARIABLES = ('demand', 'supplied', 'gap', 'congestion')
CONTEXT_FEATURES = tuple(f"tod_{name}" for name in TIME_OF_DAY) + ('weekend', 'poi')


class FeatureLayout(msgspec.Struct, frozen=True, forbid_unknown_fields=True):
    """Column map of X_t; identical across every sample of a run."""

    lookback: int
    n_weather_categories: int
    groups: tuple[str, ...] = FEATURE_GROUPS
    version: int = LAYOUT_VERSION

    def __post_init__(self):
        if self.lookback < 1:
            raise LayoutError("lookback must be at least 1")
        if self.n_weather_categories < 1:
            raise LayoutError("At least one weather category is required")
        unknown = set(self.groups) - set(FEATURE_GROUPS)
        if unknown or not self.groups:
            raise LayoutError(f"Invalid feature groups {self.groups}")
        if self.version != LAYOUT_VERSION:
            raise LayoutError(f"Unsupported layout version {self.version}")

    # -- group extents -------------------------------------------------

    @property
    def temporal_block(self):
        """Width of one lag block of temporal variables: C one-hot + temperature + pm25."""
        return self.n_weather_categories + 2

    def temporal_variables(self):
        return tuple(f"weather_{c}" for c in range(self.n_weather_categories)) + ('temperature', 'pm25')

    def group_width(self, group):
        b = self.lookback
        return {
            'spatiotemporal': len(SPATIOTEMPORAL_VARIABLES) * b,
            'temporal': self.temporal_block * b,
            'context': len(CONTEXT_FEATURES),
        }[group]

    @property
    def ordered_groups(self):
        return tuple(g for g in FEATURE_GROUPS if g in self.groups)

    @property
    def n_features(self):
        return sum(self.group_width(g) for g in self.ordered_groups)

    def has(self, group):
        return group in self.groups

    def group_slice(self, group):
        """Column range of ``group`` in this (possibly masked) layout."""
        if group not in self.groups:
            raise LayoutError(f"Layout has no '{group}' columns")
        start = 0
        for g in self.ordered_groups:
            if g == group:
                return slice(start, start + self.group_width(g))
            start += self.group_width(g)

    def group_columns(self, groups):
        """Concatenated column indices of several groups, in layout order."""
        cols = [np.arange(self.n_features)[self.group_slice(g)] for g in self.ordered_groups if g in groups]
        return np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)

    # -- names and flags -----------------------------------------------

    def _group_names(self, group):
        b = self.lookback
        if group == 'spatiotemporal':
            return [f"{v}_lag{lag}" for v in SPATIOTEMPORAL_VARIABLES for lag in range(1, b + 1)]
        if group == 'temporal':
            return [f"{v}_lag{lag}" for lag in range(1, b + 1) for v in self.temporal_variables()]
        return list(CONTEXT_FEATURES)

    @property
    def columns(self):
        return tuple(name for g in self.ordered_groups for name in self._group_names(g))

    @property
    def passthrough(self):
        """True for one-hot and binary columns, which are never standardised."""
        flags = []
        for g in self.ordered_groups:
            if g == 'spatiotemporal':
                flags += [False] * self.group_width(g)
            elif g == 'temporal':
                flags += ([True] * self.n_weather_categories + [False, False]) * self.lookback
            else:
                flags += [True] * len(TIME_OF_DAY) + [True, False]
        return np.array(flags, dtype=bool)

    def variable_groups(self):
        """Importance groups: one per variable (its lags collapsed) and one per context feature.

        Returns:
            dict: group name -> column indices in this layout
        """
        b = self.lookback
        out = {}
        if self.has('spatiotemporal'):
            start = self.group_slice('spatiotemporal').start
            for i, name in enumerate(SPATIOTEMPORAL_VARIABLES):
                out[name] = np.arange(start + i * b, start + (i + 1) * b)
        if self.has('temporal'):
            start = self.group_slice('temporal').start
            block = self.temporal_block
            lags = np.arange(b) * block
            out['weather'] = (start + lags[:, None] + np.arange(self.n_weather_categories)[None, :]).ravel()
            out['temperature'] = start + lags + self.n_weather_categories
            out['pm25'] = start + lags + self.n_weather_categories + 1
        if self.has('context'):
            start = self.group_slice('context').start
            out['time_of_day'] = np.arange(start, start + len(TIME_OF_DAY))
            out['day_of_week'] = np.array([start + len(TIME_OF_DAY)])
            out['poi'] = np.array([start + len(TIME_OF_DAY) + 1])
        return out

    # -- recurrent view ------------------------------------------------

    def step_index(self, groups=('spatiotemporal', 'temporal')):
        """Column index of every (variable, step) pair, steps oldest-first.

        Spatio-temporal columns are variable-major (lag within variable); temporal
        columns are lag-major blocks, so both are gathered through one index.

        Returns:
            np.ndarray: int array of shape (n_variables, lookback)
        """
        b = self.lookback
        rows = []
        lags = b - 1 - np.arange(b)  # step s holds lag t-(b-s)
        if 'spatiotemporal' in groups and self.has('spatiotemporal'):
            start = self.group_slice('spatiotemporal').start
            for v in range(len(SPATIOTEMPORAL_VARIABLES)):
                rows.append(start + v * b + lags)
        if 'temporal' in groups and self.has('temporal'):
            start = self.group_slice('temporal').start
            for j in range(self.temporal_block):
                rows.append(start + lags * self.temporal_block + j)
        if not rows:
            return np.zeros((0, b), dtype=np.int64)
        return np.stack(rows).astype(np.int64)

    # -- masking -------------------------------------------------------

    def masked(self, groups):
        """Layout restricted to ``groups`` (kept in canonical order)."""
        missing = [g for g in groups if g not in self.groups]
        if missing:
            raise LayoutError(f"Cannot mask to {missing}: not present in layout")
        kept = tuple(g for g in FEATURE_GROUPS if g in groups)
        return FeatureLayout(self.lookback, self.n_weather_categories, kept, self.version)


@dataclass(frozen=True, eq=False)
class FeatureStats:
    """Per-column standardisation statistics over the unmasked layout."""

    mean: np.ndarray
    scale: np.ndarray
    passthrough: np.ndarray

    @classmethod
    def fit(cls, x, passthrough):
        """Fit over stacked training rows.

        Args:
            x: Array (..., F) of raw features; every leading cell counts once
            passthrough: Boolean flags of one-hot/binary columns

        Returns:
            FeatureStats: mean/std per column; zero-variance columns get divisor 1
        """
        flat = x.reshape(-1, x.shape[-1])
        mean = flat.mean(axis=0)
        std = flat.std(axis=0)
        scale = np.where(std > 0, std, 1.0)
        passthrough = np.asarray(passthrough, dtype=bool)
        mean = np.where(passthrough, 0.0, mean)
        scale = np.where(passthrough, 1.0, scale)
        return cls(mean, scale, passthrough)

    def apply(self, x):
        if x.shape[-1] != self.mean.shape[0]:
            raise ShapeError(f"Statistics cover {self.mean.shape[0]} columns, input has {x.shape[-1]}")
        return (x - self.mean) / self.scale


@dataclass(frozen=True, eq=False)
class InputSample:
    """Feature matrix X_t (N x F) with raw-scale target A_t (N,) for slot t."""

    x: np.ndarray
    target: np.ndarray
    slot_index: int
    layout: FeatureLayout

    def __post_init__(self):
        if self.x.ndim != 2 or self.x.shape[1] != self.layout.n_features:
            raise LayoutError(f"Sample x has shape {self.x.shape}, layout expects {self.layout.n_features} columns")
        if self.target.shape != (self.x.shape[0],):
            raise ShapeError(f"Target shape {self.target.shape} does not match {self.x.shape[0]} zones")
        self.x.setflags(write=False)
        self.target.setflags(write=False)


def stack_samples(samples):
    """Stack samples into (n, N, F) features and (n, N) targets."""
    if not samples:
        raise ShapeError("Cannot stack an empty sample list")
    layout = samples[0].layout
    if any(s.layout != layout for s in samples):
        raise LayoutError("Samples mix different feature layouts")
    x = np.stack([s.x for s in samples])
    y = np.stack([s.target for s in samples])
    return x, y
