"""Space-time grid, raw order records and the aggregated zone/slot frame."""

from dataclasses import dataclass

import numpy as np

from src.utils.errors import DataError, ShapeError

TIME_OF_DAY = ('sleep', 'peak', 'offpeak')


@dataclass(frozen=True)
class SpaceTimeGrid:
    """N zones by T slots of ``slot_minutes`` each, starting at local midnight."""

    num_zones: int
    slot_minutes: int
    num_days: int

    def __post_init__(self):
        if self.num_zones < 1:
            raise DataError(f"Grid needs at least one zone, got {self.num_zones}")
        if self.slot_minutes < 1 or 1440 % self.slot_minutes:
            raise DataError(f"slot_minutes={self.slot_minutes} does not divide a day")
        if self.num_days < 1:
            raise DataError(f"Grid needs at least one day, got {self.num_days}")

    @property
    def slots_per_day(self):
        return 1440 // self.slot_minutes

    @property
    def total_slots(self):
        return self.slots_per_day * self.num_days


@dataclass(frozen=True)
class OrderRecord:
    """One ride request; ``matched`` is False when no driver took it."""

    zone_id: int
    slot_index: int
    matched: bool


def _readonly(array, dtype):
    array = np.array(array, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class ZoneSlotFrame:
    """Per-zone per-slot aggregates plus temporal and context series.

    Matrices are N x T; per-slot series have length T; ``poi`` has length N.
    Arrays are copied and made read-only on construction.
    """

    grid: SpaceTimeGrid
    demand: np.ndarray
    supplied: np.ndarray
    gap: np.ndarray
    congestion: np.ndarray
    weather_category: np.ndarray
    temperature: np.ndarray
    pm25: np.ndarray
    time_of_day: np.ndarray
    day_of_week: np.ndarray
    poi: np.ndarray
    n_weather_categories: int

    def __post_init__(self):
        set_field = object.__setattr__
        for name in ('demand', 'supplied', 'gap', 'congestion'):
            set_field(self, name, _readonly(getattr(self, name), np.int64))
        set_field(self, 'weather_category', _readonly(self.weather_category, np.int64))
        set_field(self, 'time_of_day', _readonly(self.time_of_day, np.float64))
        for name in ('temperature', 'pm25', 'day_of_week', 'poi'):
            set_field(self, name, _readonly(getattr(self, name), np.float64))
        self.validate()

    @property
    def num_zones(self):
        return self.grid.num_zones

    @property
    def total_slots(self):
        return self.grid.total_slots

    def validate(self):
        """Check shapes and the demand/supply/gap invariants."""
        n, t = self.grid.num_zones, self.grid.total_slots
        for name in ('demand', 'supplied', 'gap', 'congestion'):
            if getattr(self, name).shape != (n, t):
                raise ShapeError(f"{name} has shape {getattr(self, name).shape}, expected {(n, t)}")
        for name in ('weather_category', 'temperature', 'pm25', 'day_of_week'):
            if getattr(self, name).shape != (t,):
                raise ShapeError(f"{name} has shape {getattr(self, name).shape}, expected {(t,)}")
        if self.time_of_day.shape != (t, len(TIME_OF_DAY)):
            raise ShapeError(f"time_of_day has shape {self.time_of_day.shape}, expected {(t, 3)}")
        if self.poi.shape != (n,):
            raise ShapeError(f"poi has shape {self.poi.shape}, expected {(n,)}")

        if (self.gap < 0).any() or (self.gap > self.demand).any():
            raise DataError("Frame violates 0 <= gap <= demand")
        if not np.array_equal(self.supplied, self.demand - self.gap):
            raise DataError("Frame violates supplied = demand - gap")
        if (self.congestion < 0).any():
            raise DataError("Frame has negative congestion counts")
        if not np.array_equal(self.time_of_day.sum(axis=1), np.ones(t)):
            raise DataError("time_of_day must be one-hot in every slot")
        if self.n_weather_categories < 1:
            raise DataError("At least one weather category is required")
        if (self.weather_category < 0).any() or (self.weather_category >= self.n_weather_categories).any():
            raise DataError(f"weather_category outside [0, {self.n_weather_categories})")
        if (self.poi < 0).any():
            raise DataError("POI counts must be non-negative")
        for name in ('temperature', 'pm25'):
            if not np.isfinite(getattr(self, name)).all():
                raise DataError(f"{name} contains missing or non-finite values")

    def target_matrix(self, target):
        """Return the N x T ground-truth matrix for ``demand`` or ``gap``."""
        if target == 'demand':
            return self.demand
        if target == 'gap':
            return self.gap
        raise DataError(f"Unknown target '{target}' (expected demand or gap)")
