"""Data controller: synthetic generation and raw-data ingestion."""

import logging
from pathlib import Path

import msgspec
import numpy as np

from src.dataset import frame_summary, read_raw_dataset, write_raw_dataset
from src.synthgen import TRUTH_FILE, generate, planted_signal_score, write_truth
from src.utils.errors import ConfigError
from src.utils.tables import write_table

# Configure logger
logger = logging.getLogger(__name__)

ZONE_TOTALS_FILE = 'zone_totals.csv'


def resolve_data_config(data_config, frame):
    """Data config with the grid settings the frame actually has."""
    return msgspec.structs.replace(
        data_config,
        num_zones=frame.num_zones,
        n_weather_categories=frame.n_weather_categories,
    )


def load_frame(run_config, data_dir):
    """Read the raw files under ``data_dir`` with the run's data settings."""
    if data_dir is None:
        raise ConfigError("A data directory is required (--data or FOCIRNET_DATA_DIR)")
    frame = read_raw_dataset(Path(data_dir), run_config.data)
    logger.info(f"Loaded frame from {data_dir}: {frame_summary(frame)}")
    return frame


def cmd_synth(run_config, out_dir):
    """Generate a synthetic city and write the four data files plus the truth file.

    Args:
        run_config: RunConfig whose [synth] section drives the generator
        out_dir: Output directory

    Returns:
        dict: Result with the frame summary and written paths
    """
    frame, truth = generate(run_config.synth)
    paths = write_raw_dataset(frame, out_dir)
    paths['truth'] = write_truth(truth, Path(out_dir) / TRUTH_FILE)
    summary = frame_summary(frame)
    if frame.total_slots >= 3:
        summary['planted_signal_score'] = planted_signal_score(frame, truth)
    return {
        "success": True,
        "summary": summary,
        "paths": {kind: str(path) for kind, path in paths.items()},
    }


def cmd_ingest(run_config, data_dir, out=None):
    """Aggregate the raw files and report per-zone totals.

    Returns:
        dict: Result with the frame summary, per-zone rows and the output path
    """
    frame = load_frame(run_config, data_dir)
    rows = [
        {
            'zone_id': zone,
            'demand': int(frame.demand[zone].sum()),
            'supplied': int(frame.supplied[zone].sum()),
            'gap': int(frame.gap[zone].sum()),
            'congestion': int(frame.congestion[zone].sum()),
            'poi': float(frame.poi[zone]),
        }
        for zone in range(frame.num_zones)
    ]
    result = {
        "success": True,
        "summary": frame_summary(frame),
        "zones": rows,
        "weather_categories": int(frame.n_weather_categories),
        "mean_temperature": float(np.mean(frame.temperature)),
    }
    if out is not None:
        result["path"] = str(write_table(rows, out))
    return result
