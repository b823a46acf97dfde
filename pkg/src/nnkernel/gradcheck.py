"""Central finite-difference checks of analytic gradients."""

import logging

import numpy as np

from src.utils.errors import ShapeError

# Configure logger
logger = logging.getLogger(__name__)


def numerical_gradient(loss_fn, array, eps):
    """Central differences of ``loss_fn()`` w.r.t. every coordinate of ``array``.

    ``array`` is perturbed in place and restored; ``loss_fn`` must read it.
    """
    grad = np.zeros_like(array)
    for idx in np.ndindex(array.shape):
        original = array[idx]
        array[idx] = original + eps
        plus = loss_fn()
        array[idx] = original - eps
        minus = loss_fn()
        array[idx] = original
        grad[idx] = (plus - minus) / (2.0 * eps)
    return grad


def relative_error(analytic, numeric):
    """||a - n|| / (||a|| + ||n||); zero when both gradients vanish."""
    denom = np.linalg.norm(analytic) + np.linalg.norm(numeric)
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(analytic - numeric) / denom)


def relative_errors(loss_fn, arrays, analytic, eps=1e-6):
    """Per-array relative errors.

    Args:
        loss_fn: Zero-argument callable returning the scalar loss
        arrays: dict name -> ndarray read by ``loss_fn`` (perturbed in place)
        analytic: dict name -> analytic gradient of the same shape
        eps: Finite-difference step

    Returns:
        dict: name -> relative error
    """
    errors = {}
    for name, array in arrays.items():
        if name not in analytic:
            raise ShapeError(f"No analytic gradient for '{name}'")
        if analytic[name].shape != array.shape:
            raise ShapeError(f"Gradient of '{name}' has shape {analytic[name].shape}, expected {array.shape}")
        errors[name] = relative_error(analytic[name], numerical_gradient(loss_fn, array, eps))
    return errors


def finite_difference_check(loss_fn, arrays, analytic, eps=1e-6):
    """Worst relative deviation between analytic and central-difference gradients."""
    errors = relative_errors(loss_fn, arrays, analytic, eps)
    worst = max(errors.values()) if errors else 0.0
    logger.debug(f"Gradient check over {len(errors)} arrays: worst relative error {worst:.3e}")
    return worst


def layer_gradcheck(forward, backward, x, arrays, eps=1e-6, seed=0):
    """Check one layer under a random linear read-out L = sum(out * r).

    Args:
        forward: Callable x -> (out, cache) closing over ``arrays``
        backward: Callable (grad_out, cache) -> (grad_x, grads dict keyed like ``arrays``)
        x: Layer input (checked as the 'input' entry)
        arrays: dict of parameter arrays
        eps: Finite-difference step
        seed: Seed of the read-out weights

    Returns:
        float: worst relative error over the input and every parameter
    """
    out, cache = forward(x)
    readout = np.random.default_rng(seed).standard_normal(out.shape)
    grad_x, grads = backward(readout, cache)

    def loss_fn():
        return float(np.sum(forward(x)[0] * readout))

    return finite_difference_check(loss_fn, {'input': x, **arrays}, {'input': grad_x, **grads}, eps)
