"""Synthetic datasets with planted spatio-temporal structure."""

from src.synthgen.generator import TRUTH_FILE, SynthTruth, generate, write_truth
from src.synthgen.signal import (
    deseasonalise,
    neighbour_lag_correlation,
    planted_signal_score,
    random_permutation_score,
)

__all__ = [
    'TRUTH_FILE', 'SynthTruth', 'generate', 'write_truth', 'deseasonalise',
    'neighbour_lag_correlation', 'planted_signal_score', 'random_permutation_score',
]
