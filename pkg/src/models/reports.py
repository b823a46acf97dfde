"""Training logs, metric reports, ablation matrices and importance reports."""

from dataclasses import dataclass, field
from typing import Optional

import msgspec
import numpy as np


class EpochRecord(msgspec.Struct, frozen=True):
    epoch: int
    train_loss: float
    val_loss: float


class TrainLog(msgspec.Struct):
    """Per-epoch losses; ``best_val_loss`` is the minimum logged validation loss."""

    epochs: list[EpochRecord] = msgspec.field(default_factory=list)
    best_epoch: int = 0
    best_val_loss: float = float('inf')
    stop_reason: str = ''

    def record(self, epoch, train_loss, val_loss):
        """Append an epoch and report whether it is a new best."""
        self.epochs.append(EpochRecord(epoch, float(train_loss), float(val_loss)))
        if val_loss < self.best_val_loss:
            self.best_val_loss = float(val_loss)
            self.best_epoch = epoch
            return True
        return False

    def rows(self):
        return [msgspec.structs.asdict(e) for e in self.epochs]


class MetricsReport(msgspec.Struct, frozen=True):
    """MAE/RMSE/sMAPE over every zone-slot cell of one evaluation."""

    model_id: str
    target: str
    mae: float
    rmse: float
    smape: float
    n_slots: int
    n_zones: int

    def row(self):
        return {
            'model': self.model_id,
            'target': self.target,
            'mae': self.mae,
            'rmse': self.rmse,
            'smape': self.smape,
        }


class AblationRow(msgspec.Struct, frozen=True):
    configuration: str
    seed: int
    metrics: MetricsReport


@dataclass
class AblationMatrix:
    """One row per model variant or feature combination."""

    mode: str
    rows: list = field(default_factory=list)

    def add(self, configuration, seed, metrics):
        self.rows.append(AblationRow(configuration, seed, metrics))

    def table(self):
        return [{'configuration': r.configuration, 'seed': r.seed, **r.metrics.row()} for r in self.rows]

    def __len__(self):
        return len(self.rows)


@dataclass(frozen=True, eq=False)
class ImportanceReport:
    """Feature importance scores read from the feature importance layer.

    Attributes:
        raw_scores: N x F activated weights
        feature_names: Column names of the layout
        spatial_avg: Length-F mean score magnitude over zones, normalised to sum 1
        group_names: Names of the G variable groups
        temporal_avg: N x G per-zone group mean magnitudes, each row normalised to sum 1
        ranking: Feature names sorted by spatial_avg, descending
    """

    raw_scores: np.ndarray
    feature_names: tuple
    spatial_avg: np.ndarray
    group_names: tuple
    temporal_avg: np.ndarray
    ranking: tuple
    group_spatial_avg: Optional[np.ndarray] = None

    def spatial_rows(self):
        order = np.argsort(-self.spatial_avg, kind='stable')
        return [{'feature': self.feature_names[i], 'score': float(self.spatial_avg[i])} for i in order]

    def temporal_rows(self):
        return [
            {'zone': zone, 'group': group, 'score': float(self.temporal_avg[zone, g])}
            for zone in range(self.temporal_avg.shape[0])
            for g, group in enumerate(self.group_names)
        ]
