"""Shared fixtures: a tiny synthetic city, its run config and a trained checkpoint."""

import logging
from types import SimpleNamespace

import numpy as np
import pytest

from src.config import load_run_config
from src.controllers import cmd_synth, cmd_train
from src.dataset import build_frame, prepare_dataset
from src.models import SpaceTimeGrid
from src.synthgen import generate

TINY_CONFIG = """\
[data]
slot_minutes = 120
n_weather_categories = 3

[model]
lookback = 2
conv_filters = [3, 3]
filter_length = 3
indrnn_hidden = 3
indrnn_layers = 2
dense_layers = 1
dense_units = 4

[train]
learning_rate = 0.01
batch_size = 8
max_epochs = 3
patience = 3
log_every = 1

[synth]
n_zones = 4
n_days = 2
slot_minutes = 120
n_weather_categories = 3
seed = 3
"""


@pytest.fixture(autouse=True)
def reset_package_logger():
    """Drop console handlers bound to a captured stream once a test is done."""
    yield
    logger = logging.getLogger('src')
    for handler in list(logger.handlers):
        if getattr(handler, '_focirnet', False):
            logger.removeHandler(handler)


@pytest.fixture(scope='session')
def config_path(tmp_path_factory):
    path = tmp_path_factory.mktemp('config') / 'run.toml'
    path.write_text(TINY_CONFIG)
    return path


@pytest.fixture(scope='session')
def run_config(config_path):
    return load_run_config(config_path)


@pytest.fixture(scope='session')
def tiny_frame(run_config):
    frame, _ = generate(run_config.synth)
    return frame


@pytest.fixture(scope='session')
def tiny_dataset(tiny_frame, run_config):
    return prepare_dataset(tiny_frame, run_config.data, run_config.model)


@pytest.fixture(scope='session')
def workspace(tmp_path_factory, config_path, run_config):
    """Synthetic data directory plus a FOCIR checkpoint trained on it."""
    root = tmp_path_factory.mktemp('workspace')
    data_dir = root / 'data'
    cmd_synth(run_config, data_dir)
    checkpoint = root / 'focir.json'
    cmd_train(run_config, data_dir, checkpoint)
    return SimpleNamespace(
        root=root,
        config_path=config_path,
        run_config=run_config,
        data_dir=data_dir,
        checkpoint=checkpoint,
    )


def make_frame(demand, gap=None, congestion=None, weather_category=None, temperature=None,
               pm25=None, poi=None, slot_minutes=480, n_weather_categories=2, first_weekday=0):
    """Hand-built frame; unspecified series default to zeros."""
    demand = np.asarray(demand, dtype=np.int64)
    n, t = demand.shape
    spd = 1440 // slot_minutes
    grid = SpaceTimeGrid(num_zones=n, slot_minutes=slot_minutes, num_days=t // spd)
    return build_frame(
        grid,
        demand=demand,
        gap=np.zeros((n, t), dtype=np.int64) if gap is None else gap,
        congestion=np.zeros((n, t), dtype=np.int64) if congestion is None else congestion,
        weather_category=np.zeros(t, dtype=np.int64) if weather_category is None else weather_category,
        temperature=np.zeros(t) if temperature is None else temperature,
        pm25=np.zeros(t) if pm25 is None else pm25,
        poi=np.zeros(n) if poi is None else poi,
        n_weather_categories=n_weather_categories,
        first_weekday=first_weekday,
    )


@pytest.fixture
def frame_factory():
    return make_frame
