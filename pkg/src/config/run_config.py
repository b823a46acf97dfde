"""Run-configuration file schema.

A run config is a TOML document with the sections ``[data]``, ``[model]``,
``[train]`` and ``[synth]``. Absent keys take the defaults below (the published
hyperparameter table where one exists); unknown keys are rejected.
"""

import logging
from pathlib import Path
from typing import Annotated, Literal, Optional

import msgspec
from msgspec import Meta, Struct, field

from src.utils.errors import ConfigError

# Configure logger
logger = logging.getLogger(__name__)

VARIANTS = ('FOCIR', 'OCIR', 'FOC', 'FIR', 'FIN', 'CNN_ONLY', 'INDRNN_ONLY')
FEATURE_GROUPS = ('spatiotemporal', 'temporal', 'context')
TARGETS = ('demand', 'gap')

Variant = Literal['FOCIR', 'OCIR', 'FOC', 'FIR', 'FIN', 'CNN_ONLY', 'INDRNN_ONLY']
Activation = Literal['sigmoid', 'linear', 'relu', 'tanh']
RecurrentActivation = Literal['relu', 'tanh']
Target = Literal['demand', 'gap']
FeatureGroup = Literal['spatiotemporal', 'temporal', 'context']

PositiveInt = Annotated[int, Meta(ge=1)]
NonNegativeInt = Annotated[int, Meta(ge=0)]
PositiveFloat = Annotated[float, Meta(gt=0)]
NonNegativeFloat = Annotated[float, Meta(ge=0)]
Fraction = Annotated[float, Meta(gt=0, lt=1)]


class DataConfig(Struct, frozen=True, forbid_unknown_fields=True, kw_only=True):
    """Space-time grid and split settings. Zero means "infer from the data"."""

    slot_minutes: PositiveInt = 10
    num_zones: NonNegativeInt = 0
    num_days: NonNegativeInt = 0
    n_weather_categories: NonNegativeInt = 0
    first_weekday: Annotated[int, Meta(ge=0, le=6)] = 0
    train_frac: Fraction = 0.70
    val_frac: Fraction = 0.15
    standardize: bool = True

    def __post_init__(self):
        if 1440 % self.slot_minutes:
            raise ConfigError(f"slot_minutes={self.slot_minutes} does not divide a day (1440 min)")
        if self.train_frac + self.val_frac >= 1:
            raise ConfigError("train_frac + val_frac must be below 1 to leave a test split")


class ModelConfig(Struct, frozen=True, forbid_unknown_fields=True, kw_only=True):
    """Network architecture settings."""

    variant: Variant = 'FOCIR'
    lookback: PositiveInt = 6
    conv_filters: tuple[PositiveInt, ...] = (200, 400)
    filter_length: Annotated[int, Meta(ge=3, le=13)] = 5
    indrnn_hidden: PositiveInt = 32
    indrnn_layers: PositiveInt = 2
    dense_layers: NonNegativeInt = 2
    dense_units: PositiveInt = 4
    fi_activation: Activation = 'sigmoid'
    indrnn_activation: RecurrentActivation = 'relu'
    conv_activation: Activation = 'relu'
    dense_hidden_activation: Activation = 'relu'
    output_activation: Literal['linear'] = 'linear'
    target: Target = 'demand'
    feature_groups: tuple[FeatureGroup, ...] = FEATURE_GROUPS
    seed: int = 0

    def __post_init__(self):
        if self.filter_length % 2 == 0:
            raise ConfigError(f"filter_length must be odd, got {self.filter_length}")
        if not 3 <= self.filter_length <= 13:
            raise ConfigError(f"filter_length must lie in [3, 13], got {self.filter_length}")
        if self.lookback < 1:
            raise ConfigError("lookback must be at least 1")
        if not self.conv_filters:
            raise ConfigError("conv_filters needs at least one layer")
        if not self.feature_groups or len(set(self.feature_groups)) != len(self.feature_groups):
            raise ConfigError(f"feature_groups must be a non-empty set, got {self.feature_groups}")


class TrainConfig(Struct, frozen=True, forbid_unknown_fields=True, kw_only=True):
    """Optimiser, regularisation and early-stopping settings."""

    learning_rate: PositiveFloat = 0.001
    batch_size: PositiveInt = 32
    l2_alpha: NonNegativeFloat = 0.001
    l1_beta: NonNegativeFloat = 0.001
    patience: PositiveInt = 100
    max_epochs: PositiveInt = 2000
    seed: int = 0
    adam_beta1: Fraction = 0.9
    adam_beta2: Fraction = 0.999
    adam_eps: PositiveFloat = 1e-8
    log_every: PositiveInt = 10

    def __post_init__(self):
        if self.patience > self.max_epochs:
            raise ConfigError(f"patience ({self.patience}) exceeds max_epochs ({self.max_epochs})")


class SynthConfig(Struct, frozen=True, forbid_unknown_fields=True, kw_only=True):
    """Synthetic city generator settings."""

    n_zones: PositiveInt = 20
    n_days: NonNegativeInt = 10
    slot_minutes: PositiveInt = 10
    hidden_grid_dims: Optional[tuple[PositiveInt, PositiveInt]] = None
    base_demand_scale: PositiveFloat = 20.0
    spatial_diffusion_coeff: Annotated[float, Meta(ge=0, lt=1)] = 0.4
    temporal_ar_coeff: Annotated[float, Meta(gt=-1, lt=1)] = 0.5
    supply_ratio_mean: Annotated[float, Meta(gt=0, le=1)] = 0.8
    noise_std: NonNegativeFloat = 1.0
    n_weather_categories: PositiveInt = 3
    weather_effect: NonNegativeFloat = 0.1
    congestion_coupling: Annotated[float, Meta(ge=0, le=1)] = 1.0
    peak_spread_hours: Annotated[float, Meta(ge=0, le=12)] = 8.0
    surge_std: NonNegativeFloat = 0.3
    first_weekday: Annotated[int, Meta(ge=0, le=6)] = 0
    seed: int = 0

    def __post_init__(self):
        if self.n_days < 1:
            raise ConfigError("n_days must be at least 1")
        if 1440 % self.slot_minutes:
            raise ConfigError(f"slot_minutes={self.slot_minutes} does not divide a day (1440 min)")
        if not 0 <= self.spatial_diffusion_coeff < 1:
            raise ConfigError("spatial_diffusion_coeff must lie in [0, 1)")
        if not -1 < self.temporal_ar_coeff < 1:
            raise ConfigError("temporal_ar_coeff must lie in (-1, 1)")
        if not 0 < self.supply_ratio_mean <= 1:
            raise ConfigError("supply_ratio_mean must lie in (0, 1]")
        if not 0 <= self.peak_spread_hours <= 12:
            raise ConfigError("peak_spread_hours must lie in [0, 12]")
        if self.hidden_grid_dims is not None:
            rows, cols = self.hidden_grid_dims
            if rows * cols < self.n_zones:
                raise ConfigError(f"hidden grid {rows}x{cols} cannot hold {self.n_zones} zones")


class RunConfig(Struct, frozen=True, forbid_unknown_fields=True, kw_only=True):
    """One file drives every command."""

    data: DataConfig = field(default_factory=DataConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)


def _parse_value(raw):
    """Parse an override value with TOML value syntax, falling back to a bare string."""
    try:
        return msgspec.toml.decode(f"v = {raw}".encode())['v']
    except msgspec.DecodeError:
        return raw


def apply_overrides(run_config, overrides):
    """Apply ``section.key=value`` overrides on top of a run config.

    Args:
        run_config: RunConfig to start from
        overrides: Iterable of ``section.key=value`` strings

    Returns:
        RunConfig: New validated config
    """
    overrides = list(overrides or ())
    if not overrides:
        return run_config

    document = msgspec.to_builtins(run_config)
    for item in overrides:
        if '=' not in item or '.' not in item.split('=', 1)[0]:
            raise ConfigError(f"Override '{item}' is not of the form section.key=value")
        dotted, raw = item.split('=', 1)
        section, key = dotted.strip().split('.', 1)
        if section not in document:
            raise ConfigError(f"Unknown config section '{section}'")
        document[section][key] = _parse_value(raw.strip())
        logger.debug(f"Override {section}.{key} = {document[section][key]!r}")

    return convert_run_config(document)


def convert_run_config(document):
    """Validate a plain dict into a RunConfig."""
    try:
        return msgspec.convert(document, RunConfig)
    except msgspec.ValidationError as e:
        raise ConfigError(f"Invalid run config: {e}") from e


def load_run_config(path=None, overrides=()):
    """Load a run config file, apply overrides and validate.

    Args:
        path: TOML file path; None gives the defaults
        overrides: ``section.key=value`` strings, applied after the file

    Returns:
        RunConfig: The validated configuration
    """
    if path is None:
        run_config = RunConfig()
    else:
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Run config not found: {path}")
        try:
            run_config = msgspec.toml.decode(path.read_bytes(), type=RunConfig)
        except (msgspec.ValidationError, msgspec.DecodeError) as e:
            raise ConfigError(f"Invalid run config {path}: {e}") from e
        logger.info(f"Loaded run config from {path}")

    return apply_overrides(run_config, overrides)
