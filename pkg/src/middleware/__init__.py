"""Middleware package."""

from src.middleware.error_handler import setup_error_handlers
from src.middleware.logger import setup_logger

__all__ = ['setup_error_handlers', 'setup_logger']
