"""How strongly zones follow their hidden neighbours' previous slot."""

import numpy as np

from src.utils.errors import DataError


def deseasonalise(values, slots_per_day):
    """Subtract each zone's mean per slot of the day."""
    values = np.asarray(values, dtype=np.float64)
    slot_of_day = np.arange(values.shape[1]) % slots_per_day
    out = values.copy()
    for s in range(min(slots_per_day, values.shape[1])):
        cols = slot_of_day == s
        out[:, cols] -= values[:, cols].mean(axis=1, keepdims=True)
    return out


def neighbour_lag_correlation(values, neighbours):
    """Mean over zones of corr(x_p[t], mean of neighbours' x[t-1]).

    Zones without neighbours or with a constant series are skipped.
    """
    if values.shape[1] < 3:
        raise DataError("Need at least three slots to correlate lagged series")
    scores = []
    for p, nbrs in enumerate(neighbours):
        if len(nbrs) == 0:
            continue
        own = values[p, 1:]
        lagged = values[np.asarray(nbrs), :-1].mean(axis=0)
        if own.std() == 0 or lagged.std() == 0:
            continue
        scores.append(np.corrcoef(own, lagged)[0, 1])
    if not scores:
        raise DataError("No zone has a usable neighbourhood")
    return float(np.mean(scores))


def planted_signal_score(frame, truth, variable='demand'):
    """Lagged neighbour correlation of the deseasonalised series under the true adjacency."""
    values = deseasonalise(frame.target_matrix(variable), frame.grid.slots_per_day)
    return neighbour_lag_correlation(values, truth.neighbours)


def random_permutation_score(frame, truth, variable='demand', n_permutations=5, seed=0):
    """The same statistic with the adjacency relabelled by random zone permutations."""
    values = deseasonalise(frame.target_matrix(variable), frame.grid.slots_per_day)
    rng = np.random.default_rng(seed)
    n = frame.num_zones
    scores = []
    for _ in range(n_permutations):
        relabel = rng.permutation(n)
        neighbours = [relabel[truth.neighbours[p]] for p in np.argsort(relabel)]
        scores.append(neighbour_lag_correlation(values, neighbours))
    return float(np.mean(scores))
