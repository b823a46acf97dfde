"""Experiment controller: ablations, hyperparameter sweeps and gradient checks."""

import logging

import msgspec
import numpy as np

from src.config.run_config import VARIANTS, ModelConfig, TrainConfig
from src.controllers.data_controller import load_frame
from src.dataset import prepare_dataset
from src.evaluation import evaluate, run_feature_ablation, run_model_ablation
from src.focirnet import build
from src.models.sample import FeatureLayout
from src.training import network_gradient_errors, train
from src.utils.errors import ConfigError, NumericalError
from src.utils.tables import write_table

# Configure logger
logger = logging.getLogger(__name__)

ABLATION_MODES = ('model', 'feature')
SWEEP_PARAMETERS = {
    'filter_length': int,
    'indrnn_activation': str,
}
GRADCHECK_TOLERANCE = 1e-5


def cmd_ablate(run_config, data_dir, mode, out=None):
    """Run the model or feature ablation and tabulate one row per configuration."""
    if mode not in ABLATION_MODES:
        raise ConfigError(f"Ablation mode must be one of {ABLATION_MODES}, got '{mode}'")
    frame = load_frame(run_config, data_dir)
    run = run_model_ablation if mode == 'model' else run_feature_ablation
    matrix = run(frame, run_config.data, run_config.model, run_config.train)
    rows = matrix.table()
    result = {"success": True, "mode": mode, "rows": rows}
    if out is not None:
        result["path"] = str(write_table(rows, out))
    return result


def parse_sweep_values(param, values):
    if param not in SWEEP_PARAMETERS:
        raise ConfigError(f"Sweep parameter must be one of {sorted(SWEEP_PARAMETERS)}, got '{param}'")
    try:
        return [SWEEP_PARAMETERS[param](v) for v in values]
    except ValueError as e:
        raise ConfigError(f"Invalid {param} value: {e}") from e


def cmd_sweep(run_config, data_dir, param, values, out=None):
    """Train one model per value of ``param`` and pick the best by validation loss.

    Args:
        run_config: RunConfig
        data_dir: Directory holding the raw files
        param: ``filter_length`` or ``indrnn_activation``
        values: Raw values, e.g. ``['3', '5', '7']`` or ``['relu', 'tanh']``
        out: Optional CSV output path

    Returns:
        dict: Result with one row per value and the selected value
    """
    values = parse_sweep_values(param, values)
    if not values:
        raise ConfigError("Sweep needs at least one value")
    frame = load_frame(run_config, data_dir)
    dataset = prepare_dataset(frame, run_config.data, run_config.model)

    rows = []
    for value in values:
        try:
            model_cfg = msgspec.structs.replace(run_config.model, **{param: value})
            model_cfg = msgspec.convert(msgspec.to_builtins(model_cfg), ModelConfig)
        except msgspec.ValidationError as e:
            raise ConfigError(f"Invalid {param}={value!r}: {e}") from e
        logger.info(f"Sweep {param}={value}")
        net = build(model_cfg, dataset.n_zones, dataset.layout, dataset.stats)
        _, log = train(net, dataset.train, dataset.val, run_config.train)
        metrics = evaluate(net, dataset.test, target=dataset.target, model_id=f"{param}={value}")
        rows.append({
            'value': value,
            'best_val_loss': log.best_val_loss,
            'epochs': len(log.epochs),
            'mae': metrics.mae,
            'rmse': metrics.rmse,
            'smape': metrics.smape,
        })

    best = min(rows, key=lambda r: r['best_val_loss'])
    result = {"success": True, "param": param, "rows": rows, "best": best['value']}
    if out is not None:
        result["path"] = str(write_table(rows, out))
    return result


def gradcheck_instance(variant, activation='tanh', seed=0):
    """Tiny network and batch used by the gradient check.

    N=3 zones, lookback 2, two weather categories, IndRNN width 2, two conv
    layers of 2 filters of length 3, two dense layers of 4 units.
    """
    model_cfg = ModelConfig(
        variant=variant,
        lookback=2,
        conv_filters=(2, 2),
        filter_length=3,
        indrnn_hidden=2,
        indrnn_layers=2,
        conv_activation=activation,
        dense_hidden_activation=activation,
        indrnn_activation=activation if activation in ('relu', 'tanh') else 'tanh',
        seed=seed,
    )
    layout = FeatureLayout(lookback=2, n_weather_categories=2)
    net = build(model_cfg, 3, layout)
    rng = np.random.default_rng(seed)
    for array in net.named_arrays().values():
        array += rng.normal(0.0, 0.1, array.shape)
    for params in net.indrnn_params():
        np.clip(params.recurrent_weights, -params.recurrent_bound, params.recurrent_bound, out=params.recurrent_weights)
    x = rng.standard_normal((2, 3, layout.n_features))
    y = rng.standard_normal((2, 3))
    return net, x, y


def cmd_gradcheck(variants=VARIANTS, eps=1e-6, tolerance=GRADCHECK_TOLERANCE, activation='tanh', seed=0):
    """Finite-difference check of the full training objective for each variant.

    Raises:
        NumericalError: Some variant exceeds ``tolerance``
    """
    train_cfg = TrainConfig()
    rows = []
    for variant in variants:
        net, x, y = gradcheck_instance(variant, activation, seed)
        errors = network_gradient_errors(net, x, y, train_cfg, eps)
        worst_name = max(errors, key=errors.get)
        rows.append({'variant': variant, 'max_relative_error': errors[worst_name], 'worst_array': worst_name})
        logger.info(f"Gradient check {variant}: {errors[worst_name]:.3e} ({worst_name})")

    failed = [r['variant'] for r in rows if r['max_relative_error'] > tolerance]
    if failed:
        raise NumericalError(f"Gradient check above {tolerance:g} for {failed}")
    return {"success": True, "tolerance": tolerance, "rows": rows}
