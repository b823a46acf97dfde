"""Regularised mean squared error and its gradients."""

import numpy as np

from src.nnkernel import ensure_finite, relative_errors
from src.utils.errors import NumericalError, ShapeError

FI_GROUP = 'feature_importance'


def _is_fi(name):
    return name.split('.', 1)[0] == FI_GROUP


def data_loss(pred, target):
    """Mean squared error over every zone-slot cell."""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ShapeError(f"Prediction shape {pred.shape} does not match target shape {target.shape}")
    return float(np.mean((pred - target) ** 2))


def regularization(net, config):
    """alpha * sum of squared non-FI parameters (biases included) + beta * sum |W_FI|."""
    l2 = 0.0
    l1 = 0.0
    for name, array in net.named_arrays().items():
        if _is_fi(name):
            l1 += float(np.abs(array).sum())
        else:
            l2 += float(np.square(array).sum())
    return config.l2_alpha * l2 + config.l1_beta * l1


def loss(pred, target, net, config):
    """Training objective of one batch."""
    total = data_loss(pred, target)
    if net is not None:
        total += regularization(net, config)
    return total


def loss_and_gradients(net, x, y, config):
    """Objective and its gradient w.r.t. every named parameter.

    Args:
        net: Network
        x: Standardised features (n, N, F)
        y: Raw-scale targets (n, N)
        config: TrainConfig

    Returns:
        tuple: (total loss, data term, grads dict keyed like net.named_arrays())
    """
    pred, cache = net.forward_batch(x)
    if pred.shape != y.shape:
        raise ShapeError(f"Prediction shape {pred.shape} does not match target shape {y.shape}")
    diff = pred - y
    data = float(np.mean(diff ** 2))
    grads, _ = net.backward(2.0 * diff / diff.size, cache)

    for name, array in net.named_arrays().items():
        if _is_fi(name):
            grads[name] = grads[name] + config.l1_beta * np.sign(array)
        else:
            grads[name] = grads[name] + 2.0 * config.l2_alpha * array
        ensure_finite(grads[name], f'gradient of {name}')

    total = data + regularization(net, config)
    if not np.isfinite(total):
        raise NumericalError(f"Loss diverged (total={total}, data={data})")
    return total, data, grads


def network_gradient_errors(net, x, y, config, eps=1e-6):
    """Relative error of every parameter gradient of the training objective.

    Returns:
        dict: ``group.array`` -> relative error against central differences
    """
    _, _, grads = loss_and_gradients(net, x, y, config)

    def objective():
        pred, _ = net.forward_batch(x)
        return loss(pred, y, net, config)

    return relative_errors(objective, net.named_arrays(), grads, eps)
