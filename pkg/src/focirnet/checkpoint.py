"""Versioned JSON checkpoints.

Arrays are stored as shape plus base64 little-endian float64 bytes, so a
write-then-read reproduces every parameter bitwise.
"""

import logging
from pathlib import Path
from typing import Optional

import msgspec
import numpy as np

from src.config.run_config import DataConfig, ModelConfig
from src.focirnet.network import build
from src.models.sample import FeatureLayout, FeatureStats
from src.utils.errors import DataError

# Configure logger
logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = 'focirnet-checkpoint'
CHECKPOINT_VERSION = 1
ARRAY_DTYPE = '<f8'


class ArrayRecord(msgspec.Struct, frozen=True):
    shape: list[int]
    data: bytes
    dtype: str = ARRAY_DTYPE

    @classmethod
    def from_array(cls, array):
        array = np.ascontiguousarray(array, dtype=ARRAY_DTYPE)
        return cls(shape=list(array.shape), data=array.tobytes())

    def to_array(self):
        if self.dtype != ARRAY_DTYPE:
            raise DataError(f"Unsupported array dtype '{self.dtype}' in checkpoint")
        array = np.frombuffer(self.data, dtype=ARRAY_DTYPE)
        if array.size != int(np.prod(self.shape)):
            raise DataError(f"Array data of {array.size} values does not fit shape {self.shape}")
        return array.reshape(self.shape).astype(np.float64)


class StatsRecord(msgspec.Struct, frozen=True):
    mean: ArrayRecord
    scale: ArrayRecord
    passthrough: list[bool]


class CheckpointDocument(msgspec.Struct, frozen=True):
    model: ModelConfig
    data: DataConfig
    layout: FeatureLayout
    n_zones: int
    arrays: dict[str, ArrayRecord]
    stats: Optional[StatsRecord] = None
    format: str = CHECKPOINT_FORMAT
    version: int = CHECKPOINT_VERSION


def save_checkpoint(net, path, data_config=None):
    """Write ``net`` (config, layout, statistics and every parameter) to ``path``.

    Returns:
        Path: The written file
    """
    stats = None
    if net.stats is not None:
        stats = StatsRecord(
            mean=ArrayRecord.from_array(net.stats.mean),
            scale=ArrayRecord.from_array(net.stats.scale),
            passthrough=[bool(v) for v in net.stats.passthrough],
        )
    document = CheckpointDocument(
        model=net.config,
        data=data_config or DataConfig(),
        layout=net.layout,
        n_zones=net.n_zones,
        arrays={name: ArrayRecord.from_array(a) for name, a in net.named_arrays().items()},
        stats=stats,
    )
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(msgspec.json.encode(document))
    logger.info(f"Saved checkpoint to {path}")
    return path


def load_checkpoint(path):
    """Rebuild a network from a checkpoint file.

    Returns:
        tuple: (Network, DataConfig)
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"Checkpoint not found: {path}")
    try:
        document = msgspec.json.decode(path.read_bytes(), type=CheckpointDocument)
    except (msgspec.ValidationError, msgspec.DecodeError) as e:
        raise DataError(f"Invalid checkpoint {path}: {e}") from e
    if document.format != CHECKPOINT_FORMAT or document.version != CHECKPOINT_VERSION:
        raise DataError(f"Unsupported checkpoint {document.format} v{document.version}")

    stats = None
    if document.stats is not None:
        stats = FeatureStats(
            document.stats.mean.to_array(),
            document.stats.scale.to_array(),
            np.array(document.stats.passthrough, dtype=bool),
        )
    net = build(document.model, document.n_zones, document.layout, stats)
    arrays = net.named_arrays()
    if set(arrays) != set(document.arrays):
        raise DataError(f"Checkpoint parameters {sorted(document.arrays)} do not match the network {sorted(arrays)}")
    for name, target in arrays.items():
        values = document.arrays[name].to_array()
        if values.shape != target.shape:
            raise DataError(f"Checkpoint array '{name}' has shape {values.shape}, expected {target.shape}")
        target[...] = values
    logger.info(f"Loaded {document.model.variant} checkpoint from {path}")
    return net, document.data
