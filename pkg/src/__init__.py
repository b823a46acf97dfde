"""FOCIR-Net forecasting toolkit and its read-only prediction service."""

import logging
from pathlib import Path

import msgspec
from dotenv import load_dotenv
from flask import Flask

# Load environment variables from .env file if it exists
load_dotenv()

# Configure logger
logger = logging.getLogger(__name__)


def load_model_store(checkpoint, data_dir):
    """Load a checkpoint and the raw data it predicts from.

    Returns:
        dict: ``net``, ``frame`` and ``checkpoint`` path
    """
    from src.dataset import read_raw_dataset
    from src.focirnet import load_checkpoint

    net, data_config = load_checkpoint(checkpoint)
    frame = read_raw_dataset(Path(data_dir), msgspec.structs.replace(data_config, num_days=0))
    return {'net': net, 'frame': frame, 'checkpoint': str(checkpoint)}


def create_app(config_name='default', checkpoint=None, data_dir=None):
    """Create Flask application using the application factory pattern.

    Args:
        config_name: The configuration to use
        checkpoint: Model checkpoint to serve; defaults to FOCIRNET_CHECKPOINT
        data_dir: Raw data directory; defaults to FOCIRNET_DATA_DIR

    Returns:
        Flask: The configured Flask application
    """
    app = Flask(__name__)

    # Load configuration
    from src.config import config as app_config
    app.config.from_object(app_config[config_name])
    app.json.sort_keys = app.config.get('JSON_SORT_KEYS', False)

    from src.utils.logger import setup_logger as setup_package_logger
    setup_package_logger('src', app.config.get('LOG_LEVEL'))

    # Setup middleware
    from src.middleware import setup_error_handlers, setup_logger
    setup_error_handlers(app)
    setup_logger(app)

    # Register blueprints
    from src.routes import api, system
    app.register_blueprint(api)
    app.register_blueprint(system)

    # Load the served model
    checkpoint = checkpoint or app.config.get('CHECKPOINT')
    data_dir = data_dir or app.config.get('DATA_DIR')
    if checkpoint and data_dir:
        from src.controllers.api_controller import EXTENSION_KEY
        app.extensions[EXTENSION_KEY] = load_model_store(checkpoint, data_dir)
        app.logger.info(f"Serving {app.extensions[EXTENSION_KEY]['net'].config.variant} model from {checkpoint}")
    else:
        app.logger.warning("No checkpoint/data directory configured; prediction endpoints return 503")

    # Log application startup
    app.logger.info(f"Application {app.config.get('APP_NAME')} started in {config_name} mode")

    return app
