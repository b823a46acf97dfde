"""Column juxtaposition and the matrix <-> step-tensor reshapes."""

import numpy as np

from src.utils.errors import ShapeError


def concatenate(parts):
    """Join (..., N, M_i) blocks along the feature axis in argument order."""
    if not parts:
        raise ShapeError("Nothing to concatenate")
    lead = parts[0].shape[:-1]
    for part in parts:
        if part.shape[:-1] != lead:
            raise ShapeError(f"Cannot concatenate {part.shape} with leading shape {lead}")
    return np.concatenate(parts, axis=-1)


def split_columns(x, widths):
    """Inverse of concatenate for known block widths."""
    if sum(widths) != x.shape[-1]:
        raise ShapeError(f"Widths {list(widths)} do not cover {x.shape[-1]} columns")
    bounds = np.cumsum(widths)[:-1]
    return np.split(x, bounds, axis=-1)


def gather_steps(x, index):
    """Pick columns into a step tensor.

    Args:
        x: Matrix (..., N, F)
        index: Int array (V, b) of column indices, step axis oldest-first

    Returns:
        np.ndarray: (..., N, V, b)
    """
    if index.size and index.max() >= x.shape[-1]:
        raise ShapeError(f"Step index refers to column {index.max()} of a {x.shape[-1]}-column input")
    return x[..., index]


def scatter_steps(grad_steps, index, n_columns):
    """Adjoint of gather_steps: route step gradients back to their columns."""
    out = np.zeros((*grad_steps.shape[:-2], n_columns))
    for (v, s), column in np.ndenumerate(index):
        out[..., column] += grad_steps[..., v, s]
    return out


def _variable_major_index(n_vars, lookback):
    v = np.arange(n_vars)[:, None]
    s = np.arange(lookback)[None, :]
    return v * lookback + (lookback - 1 - s)


def reshape_to_steps(x, n_vars, lookback):
    """(..., N, B*b) variable-major, lag t-1 first -> (..., N, B, b) oldest-first."""
    if x.shape[-1] != n_vars * lookback:
        raise ShapeError(f"Expected {n_vars} x {lookback} columns, got {x.shape[-1]}")
    return gather_steps(x, _variable_major_index(n_vars, lookback))


def flatten_steps(steps):
    """Inverse of reshape_to_steps."""
    n_vars, lookback = steps.shape[-2:]
    out = np.empty((*steps.shape[:-2], n_vars * lookback))
    out[..., _variable_major_index(n_vars, lookback)] = steps
    return out
