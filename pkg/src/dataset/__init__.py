"""Raw record ingestion, space-time aggregation and sample assembly."""

from src.dataset.aggregate import (
    aggregate_order_arrays,
    aggregate_orders,
    build_frame,
    calendar_context,
    frame_summary,
    repeat_across_time,
    repeat_across_zones,
)
from src.dataset.io import read_raw_dataset, write_raw_dataset
from src.dataset.samples import (
    PreparedDataset,
    apply_feature_mask,
    build_sample,
    build_samples,
    fit_feature_stats,
    prepare_dataset,
    split_chronological,
    standardize_samples,
)

__all__ = [
    'aggregate_order_arrays', 'aggregate_orders', 'build_frame', 'calendar_context',
    'frame_summary', 'repeat_across_time', 'repeat_across_zones', 'read_raw_dataset',
    'write_raw_dataset', 'PreparedDataset', 'apply_feature_mask', 'build_sample',
    'build_samples', 'fit_feature_stats', 'prepare_dataset', 'split_chronological',
    'standardize_samples',
]
