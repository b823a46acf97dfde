"""Test-set evaluation and the model / feature ablation runs."""

import logging

import msgspec
import numpy as np

from src.config.run_config import VARIANTS
from src.dataset.samples import prepare_dataset
from src.evaluation.forecasters import NetworkForecaster
from src.evaluation.metrics import mae, rmse, smape
from src.focirnet import Network, build
from src.models.reports import AblationMatrix, MetricsReport
from src.training import train
from src.utils.errors import DataError

# Configure logger
logger = logging.getLogger(__name__)

FEATURE_COMBINATIONS = (
    ('spatiotemporal+temporal', ('spatiotemporal', 'temporal')),
    ('spatiotemporal+context', ('spatiotemporal', 'context')),
    ('temporal+context', ('temporal', 'context')),
    ('spatiotemporal', ('spatiotemporal',)),
    ('temporal', ('temporal',)),
    ('context', ('context',)),
)


def evaluate(forecaster, test_samples, target='demand', model_id=None):
    """Metrics of raw-scale predictions over every test slot and zone.

    Args:
        forecaster: Network or any object with ``predict(samples)``
        test_samples: List of InputSample
        target: Target kind recorded in the report
        model_id: Report label; defaults to the forecaster's name

    Returns:
        MetricsReport
    """
    if isinstance(forecaster, Network):
        forecaster = NetworkForecaster(forecaster)
    if not test_samples:
        raise DataError("No test samples to evaluate")
    preds = np.asarray(forecaster.predict(test_samples), dtype=np.float64)
    targets = np.stack([s.target for s in test_samples])
    report = MetricsReport(
        model_id=model_id or getattr(forecaster, 'name', type(forecaster).__name__),
        target=target,
        mae=mae(preds, targets),
        rmse=rmse(preds, targets),
        smape=smape(preds, targets),
        n_slots=targets.shape[0],
        n_zones=targets.shape[1],
    )
    logger.info(f"{report.model_id} ({target}): MAE={report.mae:.4f} RMSE={report.rmse:.4f} sMAPE={report.smape:.4f}")
    return report


def _train_and_score(dataset, model_config, train_config, label):
    net = build(model_config, dataset.n_zones, dataset.layout, dataset.stats)
    train(net, dataset.train, dataset.val, train_config)
    return evaluate(net, dataset.test, target=dataset.target, model_id=label)


def run_model_ablation(frame, data_config, model_config, train_config, target=None, variants=VARIANTS):
    """Train and test every variant on one shared split; row i uses seed master + i."""
    dataset = prepare_dataset(frame, data_config, model_config, target)
    matrix = AblationMatrix(mode='model')
    for i, variant in enumerate(variants):
        model_cfg = msgspec.structs.replace(model_config, variant=variant, seed=model_config.seed + i)
        train_cfg = msgspec.structs.replace(train_config, seed=train_config.seed + i)
        logger.info(f"Model ablation {i + 1}/{len(variants)}: {variant} (seed {model_cfg.seed})")
        matrix.add(variant, model_cfg.seed, _train_and_score(dataset, model_cfg, train_cfg, variant))
    return matrix


def run_feature_ablation(frame, data_config, model_config, train_config, target=None,
                         combinations=FEATURE_COMBINATIONS):
    """Train and test the configured variant under each feature mask; row i uses seed master + i."""
    matrix = AblationMatrix(mode='feature')
    for i, (label, groups) in enumerate(combinations):
        model_cfg = msgspec.structs.replace(model_config, feature_groups=tuple(groups), seed=model_config.seed + i)
        train_cfg = msgspec.structs.replace(train_config, seed=train_config.seed + i)
        dataset = prepare_dataset(frame, data_config, model_cfg, target)
        logger.info(f"Feature ablation {i + 1}/{len(combinations)}: {label} ({dataset.layout.n_features} columns)")
        matrix.add(label, model_cfg.seed, _train_and_score(dataset, model_cfg, train_cfg, label))
    return matrix
