"""Per-zone fully connected layer with weights shared by every zone."""

from dataclasses import dataclass

import numpy as np

from src.nnkernel.activations import activation_apply, activation_grad
from src.nnkernel.tensor import check_last_dim, ensure_finite
from src.utils.errors import MissingCacheError, ShapeError


@dataclass
class DenseParams:
    weights: np.ndarray  # H_out x F_in
    bias: np.ndarray  # H_out
    activation: str = 'relu'

    def __post_init__(self):
        if self.weights.ndim != 2 or self.bias.shape != (self.weights.shape[0],):
            raise ShapeError(f"Dense weights {self.weights.shape} and bias {self.bias.shape} disagree")

    def arrays(self):
        return {'weights': self.weights, 'bias': self.bias}


@dataclass(frozen=True)
class DenseCache:
    x: np.ndarray
    pre: np.ndarray


def dense_forward(x, params):
    """out[..., p, :] = sigma(W x[..., p, :] + b)."""
    check_last_dim(x, params.weights.shape[1], 'dense_forward')
    pre = x @ params.weights.T + params.bias
    out = ensure_finite(activation_apply(params.activation, pre), 'dense output')
    return out, DenseCache(x=x, pre=pre)


def dense_backward(grad_out, cache, params):
    if cache is None:
        raise MissingCacheError("dense_backward called without a forward cache")
    d_pre = grad_out * activation_grad(params.activation, cache.pre)
    h_out, f_in = params.weights.shape
    flat = d_pre.reshape(-1, h_out)
    grad_w = flat.T @ cache.x.reshape(-1, f_in)
    grad_b = flat.sum(axis=0)
    grad_x = d_pre @ params.weights
    ensure_finite(grad_w, 'dense grad')
    return ensure_finite(grad_x, 'dense grad'), {'weights': grad_w, 'bias': grad_b}
