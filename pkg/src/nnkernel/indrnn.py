"""Independently recurrent cell, distributed over zones with shared parameters.

h_s = sigma(U x_s + w * h_{s-1} + b), steps oldest-first, h_0 = 0.
"""

import logging
from dataclasses import dataclass

import numpy as np

from src.nnkernel.activations import activation_apply, activation_grad
from src.nnkernel.tensor import ensure_finite
from src.utils.errors import ConfigError, MissingCacheError, ShapeError

# Configure logger
logger = logging.getLogger(__name__)

RECURRENT_ACTIVATIONS = ('relu', 'tanh')


def recurrent_bound(activation, lookback):
    """Largest allowed |w| for the recurrent weights.

    Args:
        activation: 'relu' or 'tanh'
        lookback: Number of unrolled steps b

    Returns:
        float: 2 ** (1 / b) for relu, 1.0 for tanh
    """
    if lookback < 1:
        raise ConfigError("lookback must be at least 1")
    if activation == 'relu':
        return float(2.0 ** (1.0 / lookback))
    if activation == 'tanh':
        return 1.0
    raise ConfigError(f"IndRNN activation must be one of {RECURRENT_ACTIVATIONS}, got '{activation}'")


@dataclass
class IndRNNParams:
    input_weights: np.ndarray  # H x F_in
    recurrent_weights: np.ndarray  # H
    bias: np.ndarray  # H
    activation: str = 'relu'
    recurrent_bound: float = 1.0

    def __post_init__(self):
        if self.activation not in RECURRENT_ACTIVATIONS:
            raise ConfigError(f"IndRNN activation must be one of {RECURRENT_ACTIVATIONS}, got '{self.activation}'")
        h = self.input_weights.shape[0]
        if self.recurrent_weights.shape != (h,) or self.bias.shape != (h,):
            raise ShapeError(f"IndRNN vectors must have length {h}")
        if self.recurrent_bound <= 0:
            raise ConfigError("recurrent_bound must be positive")
        if np.any(np.abs(self.recurrent_weights) > self.recurrent_bound):
            raise ConfigError(f"Recurrent weights exceed bound {self.recurrent_bound}")

    @property
    def hidden(self):
        return self.input_weights.shape[0]

    def arrays(self):
        return {'input_weights': self.input_weights, 'recurrent_weights': self.recurrent_weights, 'bias': self.bias}


@dataclass(frozen=True)
class IndRNNCache:
    inputs: list  # per layer: (..., N, F_in, b)
    pre: list  # per layer: (..., N, H, b)
    states: list  # per layer: (..., N, H, b)


def indrnn_step(x_t, h_prev, params):
    """One recurrence step for any leading shape: x_t (..., F_in), h_prev (..., H)."""
    if x_t.shape[-1] != params.input_weights.shape[1] or h_prev.shape[-1] != params.hidden:
        raise ShapeError(f"indrnn_step: got x {x_t.shape}, h {h_prev.shape} for U {params.input_weights.shape}")
    pre = x_t @ params.input_weights.T + params.recurrent_weights * h_prev + params.bias
    return activation_apply(params.activation, pre)


def _layer_forward(x, params):
    steps = x.shape[-1]
    h = np.zeros((*x.shape[:-2], params.hidden))
    pre = np.empty((*x.shape[:-2], params.hidden, steps))
    states = np.empty_like(pre)
    for s in range(steps):
        pre[..., s] = x[..., s] @ params.input_weights.T + params.recurrent_weights * h + params.bias
        h = activation_apply(params.activation, pre[..., s])
        states[..., s] = h
    return pre, states


def zone_distributed_indrnn_forward(x, stack):
    """Run the stacked cell over every zone independently.

    Args:
        x: Steps tensor (..., N, F_in, b), step axis oldest-first
        stack: List of IndRNNParams, bottom layer first

    Returns:
        tuple: (last-step top-layer state (..., N, H), IndRNNCache)
    """
    if not stack:
        raise ConfigError("IndRNN stack is empty")
    if x.ndim < 3 or x.shape[-1] == 0:
        raise ShapeError(f"IndRNN input must be (..., N, F_in, b) with b >= 1, got {x.shape}")
    inputs, pres, states = [], [], []
    layer_in = x
    for params in stack:
        if layer_in.shape[-2] != params.input_weights.shape[1]:
            raise ShapeError(f"IndRNN layer expects {params.input_weights.shape[1]} inputs, got {layer_in.shape[-2]}")
        pre, hs = _layer_forward(layer_in, params)
        inputs.append(layer_in)
        pres.append(pre)
        states.append(hs)
        layer_in = hs
    out = ensure_finite(states[-1][..., -1], 'IndRNN output')
    return out, IndRNNCache(inputs=inputs, pre=pres, states=states)


def _layer_backward(grad_states, x, pre, states, params):
    steps = x.shape[-1]
    grad_x = np.empty_like(x)
    grad_u = np.zeros_like(params.input_weights)
    grad_w = np.zeros_like(params.recurrent_weights)
    grad_b = np.zeros_like(params.bias)
    carry = np.zeros(grad_states.shape[:-1])
    for s in reversed(range(steps)):
        d_h = grad_states[..., s] + carry
        d_pre = d_h * activation_grad(params.activation, pre[..., s])
        flat = d_pre.reshape(-1, params.hidden)
        grad_u += flat.T @ x[..., s].reshape(-1, x.shape[-2])
        if s > 0:
            grad_w += (d_pre * states[..., s - 1]).reshape(-1, params.hidden).sum(axis=0)
        grad_b += flat.sum(axis=0)
        grad_x[..., s] = d_pre @ params.input_weights
        carry = d_pre * params.recurrent_weights
    return grad_x, {'input_weights': grad_u, 'recurrent_weights': grad_w, 'bias': grad_b}


def zone_distributed_indrnn_backward(grad_out, cache, stack):
    """Backpropagation through time over the b steps, summed over zones and batch.

    Args:
        grad_out: Gradient w.r.t. the last-step top-layer state (..., N, H)
        cache: IndRNNCache from the forward pass
        stack: The same IndRNNParams list

    Returns:
        tuple: (grad_x (..., N, F_in, b), list of per-layer gradient dicts)
    """
    if cache is None:
        raise MissingCacheError("zone_distributed_indrnn_backward called without a forward cache")
    grads = [None] * len(stack)
    grad_states = np.zeros_like(cache.states[-1])
    grad_states[..., -1] = grad_out
    for i in reversed(range(len(stack))):
        grad_in, grads[i] = _layer_backward(grad_states, cache.inputs[i], cache.pre[i], cache.states[i], stack[i])
        grad_states = grad_in
    for layer in grads:
        for name, g in layer.items():
            ensure_finite(g, f'IndRNN grad {name}')
    return ensure_finite(grad_states, 'IndRNN input grad'), grads
