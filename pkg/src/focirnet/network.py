"""Network assembly for FOCIR-Net and its ablation variants.

Wiring, per zone with shared weights everywhere:

    X --(feature importance gate)--> G
    G[spatio-temporal]               --> conv stack        --\
    G[spatio-temporal + temporal]    --> steps --> IndRNN  ---+--> concat --> dense stack --> output
    G[columns no branch consumes]    -------------------------/
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from src.config.run_config import VARIANTS
from src.models.sample import FeatureLayout, FeatureStats
from src.nnkernel import (
    Conv1DParams,
    DenseParams,
    FeatureImportanceParams,
    IndRNNParams,
    concatenate,
    conv1d_backward,
    conv1d_forward,
    dense_backward,
    dense_forward,
    feature_importance_backward,
    feature_importance_forward,
    gather_steps,
    recurrent_bound,
    scatter_steps,
    split_columns,
    zone_distributed_indrnn_backward,
    zone_distributed_indrnn_forward,
)
from src.training.initialization import init_weights
from src.utils.errors import LayoutError, MissingCacheError, ShapeError, VariantError

# Configure logger
logger = logging.getLogger(__name__)

VARIANT_COMPONENTS = {
    'FOCIR': ('fi', 'conv', 'indrnn'),
    'OCIR': ('conv', 'indrnn'),
    'FOC': ('fi', 'conv'),
    'FIR': ('fi', 'indrnn'),
    'FIN': ('fi',),
    'CNN_ONLY': ('conv',),
    'INDRNN_ONLY': ('indrnn',),
}

RECURRENT_GROUPS = ('spatiotemporal', 'temporal')


@dataclass
class NetworkCache:
    x: np.ndarray
    gated: np.ndarray
    conv: list = field(default_factory=list)
    indrnn: Optional[object] = None
    dense: list = field(default_factory=list)
    output: Optional[object] = None


@dataclass
class Network:
    """Assembled network; components absent from the variant are None."""

    config: object
    layout: FeatureLayout
    n_zones: int
    stats: Optional[FeatureStats] = None
    fi: Optional[FeatureImportanceParams] = None
    conv_stack: Optional[list] = None
    indrnn_stack: Optional[list] = None
    dense_stack: list = field(default_factory=list)
    output_layer: Optional[DenseParams] = None
    conv_columns: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    step_index: np.ndarray = field(default_factory=lambda: np.zeros((0, 1), dtype=np.int64))
    passthrough_columns: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def n_features(self):
        return self.layout.n_features

    @property
    def components(self):
        """Present components in workflow order."""
        present = []
        if self.fi is not None:
            present.append('fi')
        if self.conv_stack:
            present.append('conv')
        if self.indrnn_stack:
            present.append('indrnn')
        return tuple(present)

    def parameter_groups(self):
        """Ordered (group name, params) pairs of every trainable component."""
        groups = []
        if self.fi is not None:
            groups.append(('feature_importance', self.fi))
        for i, params in enumerate(self.conv_stack or ()):
            groups.append((f'conv_{i}', params))
        for i, params in enumerate(self.indrnn_stack or ()):
            groups.append((f'indrnn_{i}', params))
        for i, params in enumerate(self.dense_stack):
            groups.append((f'dense_{i}', params))
        groups.append(('output', self.output_layer))
        return groups

    def named_arrays(self):
        """Flat ``group.array`` -> ndarray view of every parameter (shared, not copied)."""
        return {f'{group}.{name}': array for group, params in self.parameter_groups() for name, array in params.arrays().items()}

    def indrnn_params(self):
        return list(self.indrnn_stack or ())

    # -- forward / backward -----------------------------------------------

    def forward_batch(self, x):
        """Predict every zone of a stack of samples.

        Args:
            x: Feature tensor (..., N, F) laid out as ``self.layout``

        Returns:
            tuple: (predictions (..., N), NetworkCache)
        """
        if x.ndim < 2 or x.shape[-2:] != (self.n_zones, self.n_features):
            raise LayoutError(f"Network expects (..., {self.n_zones}, {self.n_features}) input, got {x.shape}")
        cache = NetworkCache(x=x, gated=x)
        gated = x
        if self.fi is not None:
            gated, _ = feature_importance_forward(x, self.fi)
            cache.gated = gated

        parts = []
        if self.conv_stack:
            h = gated[..., self.conv_columns]
            for params in self.conv_stack:
                h, conv_cache = conv1d_forward(h, params)
                cache.conv.append(conv_cache)
            parts.append(h)
        if self.indrnn_stack:
            steps = gather_steps(gated, self.step_index)
            h, cache.indrnn = zone_distributed_indrnn_forward(steps, self.indrnn_stack)
            parts.append(h)
        if self.passthrough_columns.size:
            parts.append(gated[..., self.passthrough_columns])

        z = concatenate(parts)
        for params in self.dense_stack:
            z, dense_cache = dense_forward(z, params)
            cache.dense.append(dense_cache)
        out, cache.output = dense_forward(z, self.output_layer)
        return out[..., 0], cache

    def _part_widths(self):
        widths = []
        if self.conv_stack:
            widths.append(self.conv_stack[-1].n_filters)
        if self.indrnn_stack:
            widths.append(self.indrnn_stack[-1].hidden)
        if self.passthrough_columns.size:
            widths.append(self.passthrough_columns.size)
        return widths

    def backward(self, grad_pred, cache):
        """Gradients of a scalar loss given d loss / d prediction.

        Args:
            grad_pred: Gradient w.r.t. the predictions, shape (..., N)
            cache: NetworkCache from forward_batch

        Returns:
            tuple: (grads dict keyed like named_arrays(), grad w.r.t. the input)
        """
        if cache is None or cache.output is None:
            raise MissingCacheError("Network backward called without a forward cache")
        grads = {}

        def store(group, layer_grads):
            for name, g in layer_grads.items():
                grads[f'{group}.{name}'] = g

        grad_z, layer_grads = dense_backward(grad_pred[..., None], cache.output, self.output_layer)
        store('output', layer_grads)
        for i in reversed(range(len(self.dense_stack))):
            grad_z, layer_grads = dense_backward(grad_z, cache.dense[i], self.dense_stack[i])
            store(f'dense_{i}', layer_grads)

        pieces = iter(split_columns(grad_z, self._part_widths()))
        grad_gated = np.zeros_like(cache.gated)
        if self.conv_stack:
            grad_h = next(pieces)
            for i in reversed(range(len(self.conv_stack))):
                grad_h, layer_grads = conv1d_backward(grad_h, cache.conv[i], self.conv_stack[i])
                store(f'conv_{i}', layer_grads)
            grad_gated[..., self.conv_columns] += grad_h
        if self.indrnn_stack:
            grad_steps, layer_grads = zone_distributed_indrnn_backward(next(pieces), cache.indrnn, self.indrnn_stack)
            for i, g in enumerate(layer_grads):
                store(f'indrnn_{i}', g)
            grad_gated += scatter_steps(grad_steps, self.step_index, self.n_features)
        if self.passthrough_columns.size:
            grad_gated[..., self.passthrough_columns] += next(pieces)

        if self.fi is not None:
            grad_x, layer_grads = feature_importance_backward(grad_gated, cache.x, self.fi)
            store('feature_importance', layer_grads)
        else:
            grad_x = grad_gated
        return grads, grad_x


def _wiring(components, layout):
    conv_columns = np.zeros(0, dtype=np.int64)
    step_index = np.zeros((0, layout.lookback), dtype=np.int64)
    if 'conv' in components and layout.has('spatiotemporal'):
        conv_columns = layout.group_columns(('spatiotemporal',))
    if 'indrnn' in components:
        step_index = layout.step_index(RECURRENT_GROUPS)
    consumed = set(conv_columns.tolist()) | set(step_index.ravel().tolist())
    passthrough = np.array([c for c in range(layout.n_features) if c not in consumed], dtype=np.int64)
    return conv_columns, step_index, passthrough


def build(config, n_zones, layout, stats=None, seed=None):
    """Assemble and initialise a network for ``config.variant``.

    A declared branch is dropped when the layout leaves it no input columns.

    Args:
        config: ModelConfig
        n_zones: Number of zones N
        layout: FeatureLayout of the (possibly masked) samples
        stats: FeatureStats of the unmasked layout, stored for prediction
        seed: Initialisation seed, defaults to ``config.seed``

    Returns:
        Network: Freshly initialised network
    """
    if config.variant not in VARIANT_COMPONENTS:
        raise VariantError(f"Unknown variant '{config.variant}' (expected one of {VARIANTS})")
    if n_zones < 1:
        raise ShapeError("A network needs at least one zone")
    if layout.lookback != config.lookback:
        raise LayoutError(f"Layout lookback {layout.lookback} does not match model lookback {config.lookback}")

    components = VARIANT_COMPONENTS[config.variant]
    conv_columns, step_index, passthrough = _wiring(components, layout)
    n_features = layout.n_features
    net = Network(
        config=config,
        layout=layout,
        n_zones=n_zones,
        stats=stats,
        conv_columns=conv_columns,
        step_index=step_index,
        passthrough_columns=passthrough,
    )

    if 'fi' in components:
        net.fi = FeatureImportanceParams(np.zeros((n_zones, n_features)), config.fi_activation)

    width = 0
    if conv_columns.size:
        net.conv_stack = []
        f_in = conv_columns.size
        for k in config.conv_filters:
            net.conv_stack.append(
                Conv1DParams(np.zeros((k, config.filter_length, f_in)), np.zeros(k), config.conv_activation)
            )
            f_in = k
        width += f_in
    if step_index.shape[0]:
        net.indrnn_stack = []
        bound = recurrent_bound(config.indrnn_activation, config.lookback)
        f_in = step_index.shape[0]
        for _ in range(config.indrnn_layers):
            h = config.indrnn_hidden
            net.indrnn_stack.append(
                IndRNNParams(np.zeros((h, f_in)), np.zeros(h), np.zeros(h), config.indrnn_activation, bound)
            )
            f_in = h
        width += f_in
    width += passthrough.size

    for _ in range(config.dense_layers):
        net.dense_stack.append(
            DenseParams(np.zeros((config.dense_units, width)), np.zeros(config.dense_units), config.dense_hidden_activation)
        )
        width = config.dense_units
    net.output_layer = DenseParams(np.zeros((1, width)), np.zeros(1), config.output_activation)

    dropped = [c for c in components if c not in net.components]
    if dropped:
        logger.info(f"Variant {config.variant}: no input columns for {dropped} under groups {layout.groups}, dropped")

    init_weights(net, config.seed if seed is None else seed)
    logger.debug(f"Built {config.variant} network: {[name for name, _ in net.parameter_groups()]}")
    return net


def forward(net, sample):
    """Raw (unclamped) prediction O_t of one InputSample, length N."""
    if sample.layout != net.layout:
        raise LayoutError(f"Sample layout {sample.layout.groups} does not match network layout {net.layout.groups}")
    pred, _ = net.forward_batch(sample.x)
    return pred


def forward_batch(net, x):
    return net.forward_batch(x)


def backward(net, grad_pred, cache):
    return net.backward(grad_pred, cache)


def parameter_groups(net):
    return net.parameter_groups()
