"""Synthetic anonymised ride-hailing city with planted spatial dependence.

Zones live on a hidden 2D grid with 4-neighbourhoods. Each zone's latent demand
is a seasonal mean plus a deviation that mixes its own previous deviation with
its hidden neighbours' previous deviations. Every zone peaks at its own hour and
the whole city follows a persistent surge factor, so part of the mean is only
visible through lagged demand. Zone ids are shuffled before output, so the
adjacency is not recoverable from the data files.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from src.dataset.aggregate import build_frame
from src.models.grid import SpaceTimeGrid

# Configure logger
logger = logging.getLogger(__name__)

TRUTH_FILE = 'truth.csv'
WEEKEND_FACTOR = 0.8
DAILY_AMPLITUDE = 0.6
WEATHER_PERSISTENCE = 0.9
CONGESTION_PER_ORDER = 0.5
SUPPLY_CONGESTION_SENSITIVITY = 0.1
SURGE_PERSISTENCE = 0.95
POI_PER_ORDER = 0.25
TEMPERATURE_PEAK_DELAY_HOURS = 3.0
TEMPERATURE_DRIFT_PERSISTENCE = 0.98
TEMPERATURE_DRIFT_STD = 1.5


@dataclass(frozen=True, eq=False)
class SynthTruth:
    """Hidden structure behind a generated frame; never read by training code.

    Attributes:
        grid_dims: (rows, cols) of the hidden grid
        cells: N x 2 hidden (row, col) per anonymised zone id
        permutation: hidden zone index -> anonymised zone id
        neighbours: Per anonymised zone id, array of neighbouring anonymised ids
        coefficients: Generating coefficients
    """

    grid_dims: tuple
    cells: np.ndarray
    permutation: np.ndarray
    neighbours: list
    coefficients: dict = field(default_factory=dict)

    def rows(self):
        return [
            {'zone_id': z, 'hidden_row': int(r), 'hidden_col': int(c)}
            for z, (r, c) in enumerate(self.cells)
        ]


def _grid_dims(config):
    if config.hidden_grid_dims is not None:
        return tuple(config.hidden_grid_dims)
    rows = math.ceil(math.sqrt(config.n_zones))
    return rows, math.ceil(config.n_zones / rows)


def _hidden_neighbours(n_zones, cols):
    """4-neighbourhoods of zones placed row-major on the hidden grid."""
    position = {(k // cols, k % cols): k for k in range(n_zones)}
    neighbours = []
    for k in range(n_zones):
        r, c = divmod(k, cols)
        around = [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
        neighbours.append(np.array(sorted(position[p] for p in around if p in position), dtype=np.int64))
    return neighbours


def _mixing_matrix(neighbours):
    n = len(neighbours)
    mix = np.zeros((n, n))
    for k, nbrs in enumerate(neighbours):
        if nbrs.size:
            mix[k, nbrs] = 1.0 / nbrs.size
        else:
            mix[k, k] = 1.0
    return mix


def _seasonality(grid, first_weekday, peak_shift_hours):
    """N x T daily profile; zone p peaks ``peak_shift_hours[p]`` after noon."""
    spd = grid.slots_per_day
    slots = np.arange(grid.total_slots)
    phase = 2.0 * np.pi * (slots % spd) / spd
    shift = 2.0 * np.pi * np.asarray(peak_shift_hours, dtype=np.float64)[:, None] / 24.0
    daily = 1.0 + DAILY_AMPLITUDE * np.sin(phase[None, :] - np.pi / 2.0 - shift)
    weekday = (first_weekday + slots // spd) % 7
    return daily * np.where(weekday >= 5, WEEKEND_FACTOR, 1.0)[None, :], phase


def _ar1(rng, n_slots, persistence, std):
    """Stationary AR(1) path with marginal standard deviation ``std``."""
    steps = rng.normal(0.0, std * math.sqrt(1.0 - persistence ** 2), n_slots)
    path = np.empty(n_slots)
    path[0] = rng.normal(0.0, std)
    for t in range(1, n_slots):
        path[t] = persistence * path[t - 1] + steps[t]
    return path


def _weather(rng, n_slots, n_categories, phase):
    categories = np.empty(n_slots, dtype=np.int64)
    current = int(rng.integers(n_categories))
    for t in range(n_slots):
        if rng.random() > WEATHER_PERSISTENCE:
            current = int(rng.integers(n_categories))
        categories[t] = current
    delay = 2.0 * np.pi * TEMPERATURE_PEAK_DELAY_HOURS / 24.0
    drift = _ar1(rng, n_slots, TEMPERATURE_DRIFT_PERSISTENCE, TEMPERATURE_DRIFT_STD)
    temperature = 15.0 + 8.0 * np.sin(phase - np.pi / 2.0 - delay) + drift + rng.normal(0.0, 0.5, n_slots)
    pm25 = np.abs(60.0 + 20.0 * np.cos(phase) + rng.normal(0.0, 5.0, n_slots))
    return categories, temperature, pm25


def generate(config):
    """Generate a frame and its hidden truth from a SynthConfig.

    Returns:
        tuple: (ZoneSlotFrame, SynthTruth)
    """
    rng = np.random.default_rng(config.seed)
    n = config.n_zones
    grid = SpaceTimeGrid(n, config.slot_minutes, config.n_days)
    n_slots = grid.total_slots
    rows, cols = _grid_dims(config)

    hidden_nbrs = _hidden_neighbours(n, cols)
    mix = _mixing_matrix(hidden_nbrs)
    base = config.base_demand_scale * rng.uniform(0.25, 1.75, n)
    peak_shift = rng.uniform(-config.peak_spread_hours, config.peak_spread_hours, n)
    season, phase = _seasonality(grid, config.first_weekday, peak_shift)
    weather_category, temperature, pm25 = _weather(rng, n_slots, config.n_weather_categories, phase)
    surge = np.maximum(0.0, 1.0 + _ar1(rng, n_slots, SURGE_PERSISTENCE, config.surge_std))

    weather_scale = np.ones(n_slots)
    if config.n_weather_categories > 1:
        weather_scale = 1.0 - config.weather_effect * weather_category / (config.n_weather_categories - 1)
    mean = base[:, None] * season * (weather_scale * surge)[None, :]

    rho, phi = config.spatial_diffusion_coeff, config.temporal_ar_coeff
    noise = config.noise_std * np.sqrt(np.maximum(mean, 1.0)) * rng.standard_normal((n, n_slots))
    deviation = np.zeros((n, n_slots))
    deviation[:, 0] = noise[:, 0]
    for t in range(1, n_slots):
        prev = deviation[:, t - 1]
        deviation[:, t] = (1.0 - rho) * phi * prev + rho * (mix @ prev) + noise[:, t]
    demand = np.rint(np.maximum(0.0, mean + deviation)).astype(np.int64)

    coupling = config.congestion_coupling
    independent = rng.poisson(CONGESTION_PER_ORDER * mean.mean(axis=1, keepdims=True), size=(n, n_slots))
    congestion = np.rint(coupling * CONGESTION_PER_ORDER * demand + (1.0 - coupling) * independent).astype(np.int64)

    spread = congestion.std(axis=1, keepdims=True)
    z = (congestion - congestion.mean(axis=1, keepdims=True)) / np.where(spread > 0, spread, 1.0)
    rate = np.clip(config.supply_ratio_mean * (1.0 - SUPPLY_CONGESTION_SENSITIVITY * z), 0.05, 1.0)
    supplied = rng.binomial(demand, rate)
    gap = demand - supplied
    poi = rng.poisson(POI_PER_ORDER * base)

    # anonymise: row j of the output holds hidden zone order[j]
    permutation = rng.permutation(n)
    order = np.argsort(permutation)
    frame = build_frame(
        grid,
        demand=demand[order],
        gap=gap[order],
        congestion=congestion[order],
        weather_category=weather_category,
        temperature=temperature,
        pm25=pm25,
        poi=poi[order],
        n_weather_categories=config.n_weather_categories,
        first_weekday=config.first_weekday,
    )
    truth = SynthTruth(
        grid_dims=(rows, cols),
        cells=np.array([divmod(int(k), cols) for k in order], dtype=np.int64).reshape(n, 2),
        permutation=permutation,
        neighbours=[np.sort(permutation[hidden_nbrs[k]]) for k in order],
        coefficients={
            'spatial_diffusion_coeff': rho,
            'temporal_ar_coeff': phi,
            'noise_std': config.noise_std,
            'supply_ratio_mean': config.supply_ratio_mean,
            'congestion_coupling': coupling,
            'base_demand': base[order].tolist(),
            'peak_shift_hours': peak_shift[order].tolist(),
            'surge_std': config.surge_std,
        },
    )
    logger.info(f"Generated {n} zones x {n_slots} slots ({int(frame.demand.sum())} orders) on a {rows}x{cols} hidden grid")
    return frame, truth


def write_truth(truth, path):
    """Write ``zone_id,hidden_row,hidden_col``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(truth.rows(), columns=['zone_id', 'hidden_row', 'hidden_col']).to_csv(path, index=False)
    return path
