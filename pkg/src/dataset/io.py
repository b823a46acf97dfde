"""Reading and writing the four raw delimited files.

    orders.csv      zone_id,slot_index,matched
    congestion.csv  zone_id,slot_index,level1,level2,level3,level4
    weather.csv     slot_index,weather_category,temperature,pm25
    poi.csv         zone_id,poi_count   (extra POI class columns are summed)
"""

import logging
import math
from pathlib import Path

import numpy as np
import pandas as pd

from src.dataset.aggregate import aggregate_order_arrays, build_frame
from src.models.grid import SpaceTimeGrid
from src.utils.errors import DataError

# Configure logger
logger = logging.getLogger(__name__)

ORDERS_FILE = 'orders.csv'
CONGESTION_FILE = 'congestion.csv'
WEATHER_FILE = 'weather.csv'
POI_FILE = 'poi.csv'
CONGESTION_LEVELS = ('level1', 'level2', 'level3', 'level4')


def _read(path, required):
    if not path.is_file():
        raise DataError(f"Missing data file: {path}")
    try:
        table = pd.read_csv(path, float_precision='round_trip')
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise DataError(f"Cannot parse {path}: {e}") from e
    missing = [c for c in required if c not in table.columns]
    if missing:
        raise DataError(f"{path.name} lacks columns {missing}")
    if table[list(required)].isna().any().any() and path.name != WEATHER_FILE:
        raise DataError(f"{path.name} has empty cells")
    return table


def _int_column(table, name, path):
    values = table[name].to_numpy()
    if values.size == 0:
        return np.zeros(0, dtype=np.int64)
    if not np.issubdtype(values.dtype, np.integer):
        raise DataError(f"{path.name}: column {name} must hold integers")
    return values.astype(np.int64)


def _infer_grid(data_config, orders, congestion, weather, poi):
    spd = 1440 // data_config.slot_minutes
    num_zones = data_config.num_zones or int(max(
        orders['zone_id'].max() if len(orders) else -1,
        congestion['zone_id'].max() if len(congestion) else -1,
        poi['zone_id'].max() if len(poi) else -1,
    )) + 1
    max_slot = int(max(
        orders['slot_index'].max() if len(orders) else -1,
        congestion['slot_index'].max() if len(congestion) else -1,
        weather['slot_index'].max() if len(weather) else -1,
    ))
    num_days = data_config.num_days or max(1, math.ceil((max_slot + 1) / spd))
    return SpaceTimeGrid(num_zones=num_zones, slot_minutes=data_config.slot_minutes, num_days=num_days)


def _zone_slot_sum(table, values, grid, path):
    zones = _int_column(table, 'zone_id', path)
    slots = _int_column(table, 'slot_index', path)
    bad = (zones < 0) | (zones >= grid.num_zones) | (slots < 0) | (slots >= grid.total_slots)
    if bad.any():
        index = int(np.flatnonzero(bad)[0])
        raise DataError(f"{path.name} row {index} is outside the grid (zone={zones[index]}, slot={slots[index]})")
    out = np.zeros((grid.num_zones, grid.total_slots), dtype=np.int64)
    np.add.at(out, (zones, slots), values)
    return out


def _weather_series(weather, grid, path):
    slots = _int_column(weather, 'slot_index', path)
    if ((slots < 0) | (slots >= grid.total_slots)).any():
        raise DataError(f"{path.name} has slot indices outside [0, {grid.total_slots})")
    if len(weather) == 0 or weather[['weather_category', 'temperature', 'pm25']].dropna(how='all').empty:
        raise DataError(f"{path.name} has no observations")
    # Forward-fill gaps; the leading gap takes the first observed value
    series = (
        weather.drop_duplicates('slot_index', keep='last')
        .set_index('slot_index')[['weather_category', 'temperature', 'pm25']]
        .reindex(range(grid.total_slots))
        .ffill()
        .bfill()
    )
    return (
        series['weather_category'].to_numpy().astype(np.int64),
        series['temperature'].to_numpy(dtype=np.float64),
        series['pm25'].to_numpy(dtype=np.float64),
    )


def read_raw_dataset(data_dir, data_config):
    """Read the four raw files and aggregate them onto the space-time grid.

    Args:
        data_dir: Directory holding orders/congestion/weather/poi files
        data_config: DataConfig; zero-valued grid fields are inferred

    Returns:
        ZoneSlotFrame: Validated frame
    """
    data_dir = Path(data_dir)
    orders_path, congestion_path = data_dir / ORDERS_FILE, data_dir / CONGESTION_FILE
    weather_path, poi_path = data_dir / WEATHER_FILE, data_dir / POI_FILE

    orders = _read(orders_path, ('zone_id', 'slot_index', 'matched'))
    congestion = _read(congestion_path, ('zone_id', 'slot_index') + CONGESTION_LEVELS)
    weather = _read(weather_path, ('slot_index', 'weather_category', 'temperature', 'pm25'))
    poi = _read(poi_path, ('zone_id',))

    grid = _infer_grid(data_config, orders, congestion, weather, poi)

    matched = _int_column(orders, 'matched', orders_path)
    if not np.isin(matched, (0, 1)).all():
        raise DataError(f"{orders_path.name}: matched must be 0 or 1")
    demand, _, gap = aggregate_order_arrays(
        _int_column(orders, 'zone_id', orders_path),
        _int_column(orders, 'slot_index', orders_path),
        matched.astype(bool),
        grid,
    )

    # The four congestion levels have no documented meaning; they are summed
    levels = congestion[list(CONGESTION_LEVELS)].to_numpy()
    if (levels < 0).any():
        raise DataError(f"{congestion_path.name} has negative congestion counts")
    traffic = _zone_slot_sum(congestion, levels.sum(axis=1).astype(np.int64), grid, congestion_path)

    weather_category, temperature, pm25 = _weather_series(weather, grid, weather_path)
    n_weather = data_config.n_weather_categories or int(weather_category.max()) + 1

    poi_classes = [c for c in poi.columns if c != 'zone_id']
    if not poi_classes:
        raise DataError(f"{poi_path.name} has no POI count column")
    poi_zones = _int_column(poi, 'zone_id', poi_path)
    if ((poi_zones < 0) | (poi_zones >= grid.num_zones)).any():
        raise DataError(f"{poi_path.name} names zones outside [0, {grid.num_zones})")
    poi_counts = np.zeros(grid.num_zones)
    np.add.at(poi_counts, poi_zones, poi[poi_classes].to_numpy(dtype=np.float64).sum(axis=1))

    frame = build_frame(
        grid, demand, gap, traffic, weather_category, temperature, pm25, poi_counts,
        n_weather_categories=n_weather, first_weekday=data_config.first_weekday,
    )
    logger.info(
        f"Read {len(orders)} orders into {grid.num_zones} zones x {grid.total_slots} slots from {data_dir}"
    )
    return frame


def split_congestion_levels(congestion):
    """Deterministic four-way split of summed congestion counts."""
    quarter = congestion // 4
    return np.stack([congestion - 3 * quarter, quarter, quarter, quarter], axis=-1)


def write_raw_dataset(frame, out_dir):
    """Write a frame back out as the four raw files.

    Orders are expanded to one row per request; congestion is split across the
    four levels so that summing them recovers the frame.

    Returns:
        dict: file kind -> written path
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n, t = frame.num_zones, frame.total_slots
    zone_grid, slot_grid = np.meshgrid(np.arange(n), np.arange(t), indexing='ij')

    counts = np.concatenate([frame.supplied.ravel(), frame.gap.ravel()])
    orders = pd.DataFrame({
        'zone_id': np.repeat(np.tile(zone_grid.ravel(), 2), counts),
        'slot_index': np.repeat(np.tile(slot_grid.ravel(), 2), counts),
        'matched': np.repeat(np.r_[np.ones(n * t, dtype=np.int64), np.zeros(n * t, dtype=np.int64)], counts),
    }).sort_values(['slot_index', 'zone_id', 'matched'], ascending=[True, True, False], kind='stable')

    levels = split_congestion_levels(frame.congestion).reshape(n * t, 4)
    congestion = pd.DataFrame({'zone_id': zone_grid.ravel(), 'slot_index': slot_grid.ravel()})
    for i, name in enumerate(CONGESTION_LEVELS):
        congestion[name] = levels[:, i]
    congestion = congestion.sort_values(['slot_index', 'zone_id'], kind='stable')

    weather = pd.DataFrame({
        'slot_index': np.arange(t),
        'weather_category': frame.weather_category,
        'temperature': frame.temperature,
        'pm25': frame.pm25,
    })
    poi = pd.DataFrame({'zone_id': np.arange(n), 'poi_count': frame.poi})

    paths = {
        'orders': out_dir / ORDERS_FILE,
        'congestion': out_dir / CONGESTION_FILE,
        'weather': out_dir / WEATHER_FILE,
        'poi': out_dir / POI_FILE,
    }
    orders.to_csv(paths['orders'], index=False)
    congestion.to_csv(paths['congestion'], index=False)
    weather.to_csv(paths['weather'], index=False)
    poi.to_csv(paths['poi'], index=False)
    logger.info(f"Wrote {len(orders)} orders and {n} zones to {out_dir}")
    return paths
