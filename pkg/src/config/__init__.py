"""Configuration package."""

from src.config.config import config, get_env
from src.config.run_config import (
    DataConfig,
    ModelConfig,
    RunConfig,
    SynthConfig,
    TrainConfig,
    apply_overrides,
    load_run_config,
)

__all__ = [
    'config', 'get_env', 'DataConfig', 'ModelConfig', 'RunConfig', 'SynthConfig',
    'TrainConfig', 'apply_overrides', 'load_run_config',
]
