"""Utilities package."""

from src.utils.errors import (
    ConfigError,
    DataError,
    FocirError,
    LayoutError,
    MissingCacheError,
    NumericalError,
    ShapeError,
    VariantError,
)
from src.utils.logger import setup_logger

__all__ = [
    'ConfigError', 'DataError', 'FocirError', 'LayoutError', 'MissingCacheError',
    'NumericalError', 'ShapeError', 'VariantError', 'setup_logger',
]
