"""Delimited text output of report rows."""

import logging
from pathlib import Path

import pandas as pd

# Configure logger
logger = logging.getLogger(__name__)


def write_table(rows, path, columns=None):
    """Write a list of dict rows as CSV.

    Args:
        rows: Sequence of dicts sharing the same keys
        path: Output file
        columns: Column order; defaults to the keys of the first row

    Returns:
        Path: The written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame(list(rows), columns=columns)
    frame.to_csv(path, index=False)
    logger.info(f"Wrote {len(frame)} rows to {path}")
    return path
