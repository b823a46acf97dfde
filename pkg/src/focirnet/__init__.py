"""FOCIR-Net assembly, prediction, importance extraction and checkpoints."""

from src.focirnet.checkpoint import load_checkpoint, save_checkpoint
from src.focirnet.importance import extract_importance, importance_from_scores
from src.focirnet.network import (
    VARIANT_COMPONENTS,
    Network,
    backward,
    build,
    forward,
    forward_batch,
    parameter_groups,
)

__all__ = [
    'load_checkpoint', 'save_checkpoint', 'extract_importance', 'importance_from_scores',
    'VARIANT_COMPONENTS', 'Network', 'backward', 'build', 'forward', 'forward_batch',
    'parameter_groups',
]
