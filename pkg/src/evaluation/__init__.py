"""Metrics, baselines, evaluation and ablation runs."""

from src.evaluation.forecasters import (
    BaselineForecast,
    NetworkForecaster,
    historical_average_baseline,
    persistence_baseline,
)
from src.evaluation.harness import FEATURE_COMBINATIONS, evaluate, run_feature_ablation, run_model_ablation
from src.evaluation.metrics import mae, rmse, smape

__all__ = [
    'BaselineForecast', 'NetworkForecaster', 'historical_average_baseline', 'persistence_baseline',
    'FEATURE_COMBINATIONS', 'evaluate', 'run_feature_ablation', 'run_model_ablation', 'mae',
    'rmse', 'smape',
]
