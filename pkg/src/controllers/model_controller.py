"""Model controller: training, evaluation, importance and prediction."""

import logging
from pathlib import Path

import msgspec
import numpy as np

from src.controllers.data_controller import load_frame, resolve_data_config
from src.dataset import apply_feature_mask, build_sample, prepare_dataset, read_raw_dataset
from src.evaluation import evaluate, historical_average_baseline, persistence_baseline
from src.focirnet import build, extract_importance, forward, load_checkpoint, save_checkpoint
from src.training import train
from src.utils.errors import ConfigError
from src.utils.tables import write_table

# Configure logger
logger = logging.getLogger(__name__)

METRIC_COLUMNS = ['model', 'target', 'mae', 'rmse', 'smape']
SPATIAL_IMPORTANCE_FILE = 'importance_spatial.csv'
TEMPORAL_IMPORTANCE_FILE = 'importance_temporal.csv'


def cmd_train(run_config, data_dir, out_checkpoint, log_path=None):
    """Train the configured variant and checkpoint the best-validation parameters.

    Args:
        run_config: RunConfig (target, variant and seeds already overridden)
        data_dir: Directory holding the raw files
        out_checkpoint: Checkpoint path to write
        log_path: Optional ``epoch,train_loss,val_loss`` file; defaults next to the checkpoint

    Returns:
        dict: Result with the train log summary and written paths
    """
    frame = load_frame(run_config, data_dir)
    dataset = prepare_dataset(frame, run_config.data, run_config.model)
    net = build(run_config.model, dataset.n_zones, dataset.layout, dataset.stats)
    net, log = train(net, dataset.train, dataset.val, run_config.train)

    checkpoint = save_checkpoint(net, out_checkpoint, resolve_data_config(run_config.data, frame))
    log_path = Path(log_path) if log_path else Path(out_checkpoint).with_suffix('.log.csv')
    write_table(log.rows(), log_path, columns=['epoch', 'train_loss', 'val_loss'])
    return {
        "success": True,
        "variant": run_config.model.variant,
        "target": dataset.target,
        "epochs": len(log.epochs),
        "best_epoch": log.best_epoch,
        "best_val_loss": log.best_val_loss,
        "stop_reason": log.stop_reason,
        "checkpoint": str(checkpoint),
        "log": str(log_path),
    }


def _checkpoint_dataset(net, data_config, data_dir):
    frame = read_raw_dataset(Path(data_dir), data_config)
    return frame, prepare_dataset(frame, data_config, net.config, stats=net.stats)


def cmd_evaluate(checkpoint, data_dir, out=None, split='test'):
    """Score a checkpoint and both baselines on the same split.

    Returns:
        dict: Result with one metrics row per model
    """
    net, data_config = load_checkpoint(checkpoint)
    frame, dataset = _checkpoint_dataset(net, data_config, data_dir)
    samples = dataset.split(split)
    target = dataset.target
    train_end = dataset.train[-1].slot_index + 1

    forecasters = [
        (net, net.config.variant),
        (persistence_baseline(frame, target, net.config.lookback), 'persistence'),
        (historical_average_baseline(frame, target, train_end), 'historical_average'),
    ]
    reports = [evaluate(f, samples, target=target, model_id=name) for f, name in forecasters]
    rows = [r.row() for r in reports]
    result = {"success": True, "split": split, "n_slots": len(samples), "metrics": rows}
    if out is not None:
        result["path"] = str(write_table(rows, out, columns=METRIC_COLUMNS))
    return result


def importance_tables(net):
    """Spatial ranking rows and per-zone group rows of a network's importance report."""
    report = extract_importance(net)
    return report, report.spatial_rows(), report.temporal_rows()


def cmd_importance(checkpoint, out_dir=None):
    """Write ``feature,score`` and ``zone,group,score`` importance files.

    Raises:
        VariantError: The checkpointed variant has no feature importance layer
    """
    net, _ = load_checkpoint(checkpoint)
    report, spatial, temporal = importance_tables(net)
    result = {
        "success": True,
        "variant": net.config.variant,
        "ranking": list(report.ranking),
        "spatial": spatial,
        "groups": dict(zip(report.group_names, report.group_spatial_avg.tolist())),
    }
    if out_dir is not None:
        out_dir = Path(out_dir)
        result["paths"] = {
            "spatial": str(write_table(spatial, out_dir / SPATIAL_IMPORTANCE_FILE, columns=['feature', 'score'])),
            "temporal": str(write_table(temporal, out_dir / TEMPORAL_IMPORTANCE_FILE, columns=['zone', 'group', 'score'])),
        }
    return result


def predict_slot(net, frame, slot, clamp_zero=False):
    """Per-zone prediction of ``slot`` from the raw frame.

    The sample is assembled on the full layout, standardised with the stored
    statistics and then restricted to the network's feature groups. Slot
    ``lookback`` is the first predictable slot; earlier slots raise ConfigError.
    """
    lookback = net.config.lookback
    if not lookback <= slot < frame.total_slots:
        raise ConfigError(f"Slot {slot} needs {lookback} previous slots and must lie in [{lookback}, {frame.total_slots})")
    if frame.num_zones != net.n_zones:
        raise ConfigError(f"Data has {frame.num_zones} zones, the model was trained on {net.n_zones}")
    sample = build_sample(frame, slot, lookback, standardizer=net.stats, target=net.config.target)
    sample = apply_feature_mask([sample], net.layout.groups)[0]
    pred = forward(net, sample)
    if clamp_zero:
        pred = np.maximum(pred, 0.0)
    return pred, sample


def cmd_predict(checkpoint, data_dir, slot, clamp_zero=False, out=None):
    """Predict every zone for one slot.

    Returns:
        dict: Result with ``zone,prediction,actual`` rows
    """
    net, data_config = load_checkpoint(checkpoint)
    frame = read_raw_dataset(Path(data_dir), msgspec.structs.replace(data_config, num_days=0))
    pred, sample = predict_slot(net, frame, slot, clamp_zero)
    rows = [
        {'zone': zone, 'prediction': float(pred[zone]), 'actual': float(sample.target[zone])}
        for zone in range(len(pred))
    ]
    result = {"success": True, "slot": slot, "target": net.config.target, "clamped": clamp_zero, "predictions": rows}
    if out is not None:
        result["path"] = str(write_table(rows, out, columns=['zone', 'prediction', 'actual']))
    return result
