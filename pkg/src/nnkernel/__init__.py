"""Forward and backward passes of every layer, on numpy float64 arrays."""

from src.nnkernel.activations import ACTIVATIONS, activation_apply, activation_grad
from src.nnkernel.adapters import (
    concatenate,
    flatten_steps,
    gather_steps,
    reshape_to_steps,
    scatter_steps,
    split_columns,
)
from src.nnkernel.conv1d import Conv1DParams, conv1d_backward, conv1d_forward
from src.nnkernel.dense import DenseParams, dense_backward, dense_forward
from src.nnkernel.feature_importance import (
    FeatureImportanceParams,
    feature_importance_backward,
    feature_importance_forward,
    feature_importance_scores,
)
from src.nnkernel.gradcheck import finite_difference_check, layer_gradcheck, relative_errors
from src.nnkernel.indrnn import (
    IndRNNParams,
    indrnn_step,
    recurrent_bound,
    zone_distributed_indrnn_backward,
    zone_distributed_indrnn_forward,
)
from src.nnkernel.tensor import ensure_finite

__all__ = [
    'ACTIVATIONS', 'activation_apply', 'activation_grad', 'concatenate', 'flatten_steps',
    'gather_steps', 'reshape_to_steps', 'scatter_steps', 'split_columns', 'Conv1DParams',
    'conv1d_backward', 'conv1d_forward', 'DenseParams', 'dense_backward', 'dense_forward',
    'FeatureImportanceParams', 'feature_importance_backward', 'feature_importance_forward',
    'feature_importance_scores', 'finite_difference_check', 'layer_gradcheck',
    'relative_errors', 'IndRNNParams', 'indrnn_step', 'recurrent_bound',
    'zone_distributed_indrnn_backward', 'zone_distributed_indrnn_forward', 'ensure_finite',
]
