"""Feature importance gate: X o sigma(W) with one weight per zone and feature."""

from dataclasses import dataclass

import numpy as np

from src.nnkernel.activations import activation_apply, activation_grad
from src.nnkernel.tensor import ensure_finite
from src.utils.errors import MissingCacheError, ShapeError


@dataclass
class FeatureImportanceParams:
    weights: np.ndarray  # N x F
    activation: str = 'sigmoid'

    def arrays(self):
        return {'weights': self.weights}


def _check(x, params):
    if x.shape[-2:] != params.weights.shape:
        raise ShapeError(f"Feature importance weights {params.weights.shape} do not match input {x.shape}")


def feature_importance_scores(params):
    """Importance scores sigma(W)."""
    return activation_apply(params.activation, params.weights)


def feature_importance_forward(x, params):
    """Gate every input cell by its activated weight.

    Args:
        x: Input of shape (..., N, F)
        params: FeatureImportanceParams

    Returns:
        tuple: (weighted input, scores N x F)
    """
    _check(x, params)
    scores = feature_importance_scores(params)
    weighted = ensure_finite(x * scores, 'feature importance output')
    return weighted, scores


def feature_importance_backward(grad_out, x, params):
    """Gradients of the gate.

    Returns:
        tuple: (grad_x, {'weights': grad_W}); grad_W sums over leading batch axes
    """
    if x is None:
        raise MissingCacheError("feature_importance_backward needs the forward input")
    _check(x, params)
    scores = feature_importance_scores(params)
    grad_x = grad_out * scores
    local = (grad_out * x).reshape(-1, *params.weights.shape).sum(axis=0)
    grad_w = local * activation_grad(params.activation, params.weights)
    return ensure_finite(grad_x, 'feature importance grad'), {'weights': ensure_finite(grad_w, 'feature importance grad')}
