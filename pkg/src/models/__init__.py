"""Models package."""

from src.models.grid import OrderRecord, SpaceTimeGrid, ZoneSlotFrame
from src.models.reports import AblationMatrix, ImportanceReport, MetricsReport, TrainLog
from src.models.sample import FeatureLayout, FeatureStats, InputSample, stack_samples

__all__ = [
    'OrderRecord', 'SpaceTimeGrid', 'ZoneSlotFrame', 'AblationMatrix', 'ImportanceReport',
    'MetricsReport', 'TrainLog', 'FeatureLayout', 'FeatureStats', 'InputSample', 'stack_samples',
]
