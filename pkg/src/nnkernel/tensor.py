"""Dense float64 tensors are plain numpy arrays; these helpers guard them."""

import numpy as np

from src.utils.errors import NumericalError, ShapeError


def ensure_finite(x, where):
    """Raise NumericalError if ``x`` holds NaN or Inf."""
    if not np.isfinite(x).all():
        raise NumericalError(f"Non-finite values in {where}")
    return x


def check_last_dim(x, expected, what):
    if x.ndim < 2 or x.shape[-1] != expected:
        raise ShapeError(f"{what}: expected (..., {expected}) input, got shape {x.shape}")
