"""Seeded uniform parameter initialisation."""

import logging

import numpy as np

from src.nnkernel import Conv1DParams, DenseParams, FeatureImportanceParams, IndRNNParams

# Configure logger
logger = logging.getLogger(__name__)

FI_INIT_RANGE = 0.05


def glorot_limit(fan_in, fan_out):
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def init_weights(net, seed):
    """Draw every parameter of ``net`` in place from ``np.random.default_rng(seed)``.

    Feature importance weights ~ U(-0.05, 0.05), recurrent weights ~ U(0, bound),
    other weight matrices ~ U(-L, L) with the Glorot limit, biases zero.
    Groups are visited in their fixed order so a seed fully determines the draw.
    """
    rng = np.random.default_rng(seed)
    for name, params in net.parameter_groups():
        if isinstance(params, FeatureImportanceParams):
            params.weights[...] = rng.uniform(-FI_INIT_RANGE, FI_INIT_RANGE, params.weights.shape)
        elif isinstance(params, Conv1DParams):
            k, length, f_in = params.filters.shape
            limit = glorot_limit(length * f_in, length * k)
            params.filters[...] = rng.uniform(-limit, limit, params.filters.shape)
            params.bias[...] = 0.0
        elif isinstance(params, IndRNNParams):
            h, f_in = params.input_weights.shape
            limit = glorot_limit(f_in, h)
            params.input_weights[...] = rng.uniform(-limit, limit, params.input_weights.shape)
            params.recurrent_weights[...] = rng.uniform(0.0, params.recurrent_bound, h)
            params.bias[...] = 0.0
        elif isinstance(params, DenseParams):
            h_out, f_in = params.weights.shape
            limit = glorot_limit(f_in, h_out)
            params.weights[...] = rng.uniform(-limit, limit, params.weights.shape)
            params.bias[...] = 0.0
        else:
            raise TypeError(f"Cannot initialise parameter group '{name}' of type {type(params).__name__}")
    logger.debug(f"Initialised {len(net.parameter_groups())} parameter groups with seed {seed}")
