"""System routes for health checks."""

from datetime import datetime, timezone

from flask import current_app, jsonify

from src.controllers.api_controller import EXTENSION_KEY
from src.routes import system


@system.route('/health')
def health():
    """Health check endpoint for monitoring."""
    store = current_app.extensions.get(EXTENSION_KEY)
    return jsonify({
        "status": "ok",
        "service": current_app.config.get('APP_NAME', 'FOCIR-Net'),
        "version": current_app.config.get('VERSION'),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "host": {
            "bind_address": current_app.config.get('HOST', '127.0.0.1'),
            "port": current_app.config.get('PORT', 20001),
        },
        "model_loaded": bool(store),
        "variant": store['net'].config.variant if store else None,
    })
