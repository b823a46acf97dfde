"""Elementwise activations and their derivatives."""

import numpy as np

from src.utils.errors import ConfigError


def _sigmoid(x):
    # tanh form never overflows
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def _sigmoid_grad(x):
    s = _sigmoid(x)
    return s * (1.0 - s)


def _relu(x):
    return np.maximum(x, 0.0)


def _relu_grad(x):
    return (x > 0).astype(np.float64)


def _tanh_grad(x):
    return 1.0 - np.tanh(x) ** 2


def _linear(x):
    return np.array(x, dtype=np.float64, copy=True)


def _linear_grad(x):
    return np.ones_like(x, dtype=np.float64)


ACTIVATIONS = {
    'sigmoid': (_sigmoid, _sigmoid_grad),
    'relu': (_relu, _relu_grad),
    'tanh': (np.tanh, _tanh_grad),
    'linear': (_linear, _linear_grad),
}


def _lookup(kind):
    try:
        return ACTIVATIONS[kind]
    except KeyError:
        raise ConfigError(f"Unknown activation '{kind}' (expected one of {sorted(ACTIVATIONS)})") from None


def activation_apply(kind, x):
    """sigma(x) elementwise."""
    return _lookup(kind)[0](np.asarray(x, dtype=np.float64))


def activation_grad(kind, x):
    """sigma'(x) elementwise, evaluated at the pre-activation ``x``."""
    return _lookup(kind)[1](np.asarray(x, dtype=np.float64))
