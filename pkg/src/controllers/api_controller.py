"""API controller for the read-only prediction service."""

import logging

from flask import abort, current_app, jsonify, request

from src.controllers.model_controller import importance_tables, predict_slot

# Configure logger
logger = logging.getLogger(__name__)

EXTENSION_KEY = 'focirnet'


def _store():
    store = current_app.extensions.get(EXTENSION_KEY)
    if not store:
        abort(503, description="No model loaded; start the service with a checkpoint and data directory")
    return store


def model_info():
    """Configuration and layout of the served model."""
    store = _store()
    net = store['net']
    return jsonify({
        "success": True,
        "checkpoint": store['checkpoint'],
        "variant": net.config.variant,
        "target": net.config.target,
        "lookback": net.config.lookback,
        "zones": net.n_zones,
        "feature_groups": list(net.layout.groups),
        "features": list(net.layout.columns),
        "components": list(net.components),
        "parameter_groups": [name for name, _ in net.parameter_groups()],
        "slots": store['frame'].total_slots,
    })


def predict(slot):
    """Per-zone prediction of one slot; ``?clamp_zero=1`` clamps at zero."""
    store = _store()
    clamp_zero = request.args.get('clamp_zero', default=0, type=int) == 1
    pred, sample = predict_slot(store['net'], store['frame'], slot, clamp_zero)
    logger.info(f"Predicted slot {slot} for {len(pred)} zones")
    return jsonify({
        "success": True,
        "slot": slot,
        "target": store['net'].config.target,
        "clamped": clamp_zero,
        "predictions": pred.tolist(),
        "actual": sample.target.tolist(),
    })


def importance():
    """Spatially averaged feature importance ranking and group shares."""
    store = _store()
    report, spatial, _ = importance_tables(store['net'])
    return jsonify({
        "success": True,
        "ranking": list(report.ranking),
        "spatial": spatial,
        "groups": dict(zip(report.group_names, report.group_spatial_avg.tolist())),
    })
