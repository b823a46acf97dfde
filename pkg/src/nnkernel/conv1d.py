"""1D convolution sliding over the zone axis with same zero padding, stride one, no pooling.

Implemented as cross-correlation:
    out[p, k] = sigma(sum_{e, f} x_pad[p + e, f] * W[k, e, f] + bias[k])
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from src.nnkernel.activations import activation_apply, activation_grad
from src.nnkernel.tensor import check_last_dim, ensure_finite
from src.utils.errors import MissingCacheError, ShapeError


@dataclass
class Conv1DParams:
    filters: np.ndarray  # K x E x F_in
    bias: np.ndarray  # K, one scalar per filter shared by every zone
    activation: str = 'relu'

    def __post_init__(self):
        if self.filters.ndim != 3:
            raise ShapeError(f"Conv filters must be K x E x F_in, got {self.filters.shape}")
        if self.filters.shape[1] % 2 == 0:
            raise ShapeError(f"Filter length must be odd, got {self.filters.shape[1]}")
        if self.bias.shape != (self.filters.shape[0],):
            raise ShapeError(f"Conv bias {self.bias.shape} does not match {self.filters.shape[0]} filters")

    @property
    def n_filters(self):
        return self.filters.shape[0]

    @property
    def filter_length(self):
        return self.filters.shape[1]

    def arrays(self):
        return {'filters': self.filters, 'bias': self.bias}


@dataclass(frozen=True)
class Conv1DCache:
    columns: np.ndarray  # (..., N, E * F_in) unfolded windows
    pre: np.ndarray  # (..., N, K)
    n_zones: int


def _unfold(x, length):
    pad = (length - 1) // 2
    widths = [(0, 0)] * (x.ndim - 2) + [(pad, pad), (0, 0)]
    padded = np.pad(x, widths)
    windows = sliding_window_view(padded, length, axis=-2)  # (..., N, F, E)
    return np.swapaxes(windows, -1, -2).reshape(*x.shape[:-1], length * x.shape[-1])


def conv1d_forward(x, params):
    """Convolve (..., N, F_in) into (..., N, K); zone extent is preserved.

    Returns:
        tuple: (output, Conv1DCache)
    """
    k, length, f_in = params.filters.shape
    check_last_dim(x, f_in, 'conv1d_forward')
    columns = _unfold(x, length)
    pre = columns @ params.filters.reshape(k, length * f_in).T + params.bias
    out = ensure_finite(activation_apply(params.activation, pre), 'conv1d output')
    return out, Conv1DCache(columns=columns, pre=pre, n_zones=x.shape[-2])


def conv1d_backward(grad_out, cache, params):
    """Adjoint of conv1d_forward; parameter gradients accumulate over zones and batch.

    Returns:
        tuple: (grad_x, {'filters': ..., 'bias': ...})
    """
    if cache is None:
        raise MissingCacheError("conv1d_backward called without a forward cache")
    k, length, f_in = params.filters.shape
    n = cache.n_zones
    pad = (length - 1) // 2

    d_pre = grad_out * activation_grad(params.activation, cache.pre)
    flat_pre = d_pre.reshape(-1, k)
    grad_filters = (flat_pre.T @ cache.columns.reshape(-1, length * f_in)).reshape(k, length, f_in)
    grad_bias = flat_pre.sum(axis=0)

    d_cols = (d_pre @ params.filters.reshape(k, length * f_in)).reshape(*d_pre.shape[:-1], length, f_in)
    grad_padded = np.zeros((*d_pre.shape[:-2], n + 2 * pad, f_in))
    for e in range(length):
        grad_padded[..., e:e + n, :] += d_cols[..., e, :]
    grad_x = grad_padded[..., pad:pad + n, :]

    ensure_finite(grad_filters, 'conv1d grad')
    return ensure_finite(grad_x, 'conv1d grad'), {'filters': grad_filters, 'bias': grad_bias}
