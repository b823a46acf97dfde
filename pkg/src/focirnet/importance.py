"""Importance scores read from a trained feature importance layer.

Signed gates (linear, tanh) are compared by magnitude, so every average is taken
over absolute scores. A row with no weight at all shares importance equally.
"""

import numpy as np

from src.models.reports import ImportanceReport
from src.nnkernel import feature_importance_scores
from src.utils.errors import ShapeError, VariantError


def _normalise(values, axis=-1):
    total = values.sum(axis=axis, keepdims=True)
    uniform = np.full_like(values, 1.0 / values.shape[axis])
    return np.where(total > 0, values / np.where(total > 0, total, 1.0), uniform)


def importance_from_scores(raw_scores, feature_names, groups):
    """Spatial and per-zone group averages of an N x F score matrix.

    Args:
        raw_scores: N x F activated feature importance weights, possibly signed
        feature_names: Length-F column names
        groups: dict group name -> column indices

    Returns:
        ImportanceReport
    """
    raw_scores = np.asarray(raw_scores, dtype=np.float64)
    if raw_scores.ndim != 2 or raw_scores.shape[1] != len(feature_names):
        raise ShapeError(f"Scores {raw_scores.shape} do not match {len(feature_names)} feature names")

    magnitude = np.abs(raw_scores)
    spatial_avg = _normalise(magnitude.mean(axis=0))
    group_names = tuple(groups)
    group_means = np.stack([magnitude[:, np.asarray(groups[g])].mean(axis=1) for g in group_names], axis=1)
    temporal_avg = _normalise(group_means, axis=1)
    order = np.argsort(-spatial_avg, kind='stable')
    return ImportanceReport(
        raw_scores=raw_scores,
        feature_names=tuple(feature_names),
        spatial_avg=spatial_avg,
        group_names=group_names,
        temporal_avg=temporal_avg,
        ranking=tuple(feature_names[i] for i in order),
        group_spatial_avg=_normalise(group_means.mean(axis=0)),
    )


def extract_importance(net):
    """ImportanceReport of a network's feature importance layer.

    Raises:
        VariantError: The variant has no feature importance layer
    """
    if net.fi is None:
        raise VariantError(f"Variant {net.config.variant} has no feature importance layer")
    return importance_from_scores(feature_importance_scores(net.fi), net.layout.columns, net.layout.variable_groups())
