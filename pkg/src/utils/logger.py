"""Logger utility."""

import logging
import os


def setup_logger(app_name="src", level=None):
    """Set up the package logger.

    Args:
        app_name: Name of the logger to configure (the package root by default)
        level: Explicit level name, overrides the LOG_LEVEL environment variable

    Returns:
        logging.Logger: Configured logger
    """
    logger = logging.getLogger(app_name)

    # Set log level from argument, environment or default to INFO
    log_level = (level or os.environ.get('LOG_LEVEL', 'INFO')).upper()
    logger.setLevel(getattr(logging, log_level, logging.INFO))

    # Calling twice must not duplicate output
    if not any(getattr(h, '_focirnet', False) for h in logger.handlers):
        console_handler = logging.StreamHandler()
        console_handler._focirnet = True
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    for handler in logger.handlers:
        handler.setLevel(logger.level)

    return logger
