"""Aggregation of raw records onto the space-time grid and the repeat helpers."""

import logging

import numpy as np

from src.models.grid import TIME_OF_DAY, ZoneSlotFrame
from src.utils.errors import DataError, ShapeError

# Configure logger
logger = logging.getLogger(__name__)


def aggregate_order_arrays(zone_ids, slot_indices, matched, grid):
    """Count demand and unmatched requests per zone and slot.

    Args:
        zone_ids: 0-based zone index per record
        slot_indices: 0-based slot index per record
        matched: Truthy when a driver took the request
        grid: SpaceTimeGrid the indices refer to

    Returns:
        tuple: (demand, supplied, gap) int64 matrices of shape N x T
    """
    zone_ids = np.asarray(zone_ids, dtype=np.int64).ravel()
    slot_indices = np.asarray(slot_indices, dtype=np.int64).ravel()
    matched = np.asarray(matched, dtype=bool).ravel()
    if not zone_ids.shape == slot_indices.shape == matched.shape:
        raise ShapeError("zone_ids, slot_indices and matched must have equal length")

    n, t = grid.num_zones, grid.total_slots
    bad = (zone_ids < 0) | (zone_ids >= n) | (slot_indices < 0) | (slot_indices >= t)
    if bad.any():
        index = int(np.flatnonzero(bad)[0])
        raise DataError(
            f"Order record {index} (zone_id={zone_ids[index]}, slot_index={slot_indices[index]}) "
            f"is outside the {n} x {t} grid"
        )

    flat = zone_ids * t + slot_indices
    demand = np.bincount(flat, minlength=n * t).reshape(n, t).astype(np.int64)
    gap = np.bincount(flat[~matched], minlength=n * t).reshape(n, t).astype(np.int64)
    return demand, demand - gap, gap


def aggregate_orders(records, grid):
    """Aggregate OrderRecords into demand, supplied and gap matrices."""
    records = list(records)
    zone_ids = [r.zone_id for r in records]
    slot_indices = [r.slot_index for r in records]
    matched = [r.matched for r in records]
    return aggregate_order_arrays(zone_ids, slot_indices, matched, grid)


def repeat_across_zones(row, n_zones):
    """Repeat a 1 x M row into an N x M matrix."""
    if n_zones < 1:
        raise ShapeError(f"n_zones must be at least 1, got {n_zones}")
    row = np.asarray(row, dtype=np.float64).reshape(1, -1)
    return np.repeat(row, n_zones, axis=0)


def repeat_across_time(col, n_slots):
    """Repeat a length-N vector into an N x 1 x T tensor."""
    if n_slots < 1:
        raise ShapeError(f"n_slots must be at least 1, got {n_slots}")
    col = np.asarray(col, dtype=np.float64).reshape(-1, 1, 1)
    return np.repeat(col, n_slots, axis=2)


def calendar_context(grid, first_weekday=0):
    """Time-of-day one-hot and weekend flag of every slot.

    The day splits into three equal thirds (sleep, peak, off-peak); slot 0 is
    local midnight of the first data day, whose weekday is ``first_weekday``
    (0 = Monday). Saturday and Sunday map to 1.

    Returns:
        tuple: (time_of_day T x 3, day_of_week T)
    """
    spd = grid.slots_per_day
    slots = np.arange(grid.total_slots)
    third = (slots % spd) * len(TIME_OF_DAY) // spd
    time_of_day = np.eye(len(TIME_OF_DAY))[third]
    weekday = (first_weekday + slots // spd) % 7
    day_of_week = (weekday >= 5).astype(np.float64)
    return time_of_day, day_of_week


def build_frame(grid, demand, gap, congestion, weather_category, temperature, pm25, poi,
                n_weather_categories, first_weekday=0):
    """Assemble a validated ZoneSlotFrame, deriving supply and calendar context."""
    demand = np.asarray(demand, dtype=np.int64)
    gap = np.asarray(gap, dtype=np.int64)
    time_of_day, day_of_week = calendar_context(grid, first_weekday)
    return ZoneSlotFrame(
        grid=grid,
        demand=demand,
        supplied=demand - gap,
        gap=gap,
        congestion=congestion,
        weather_category=weather_category,
        temperature=temperature,
        pm25=pm25,
        time_of_day=time_of_day,
        day_of_week=day_of_week,
        poi=poi,
        n_weather_categories=n_weather_categories,
    )


def frame_summary(frame):
    """Headline numbers of a frame."""
    total = int(frame.demand.sum())
    gap = int(frame.gap.sum())
    return {
        "zones": frame.num_zones,
        "slots": frame.total_slots,
        "days": frame.grid.num_days,
        "total_orders": total,
        "unmatched_orders": gap,
        "gap_fraction": gap / total if total else 0.0,
    }
