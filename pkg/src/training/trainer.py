"""Mini-batch training with early stopping on the validation loss."""

import logging
import time

import numpy as np

from src.models.reports import TrainLog
from src.models.sample import stack_samples
from src.training.loss import data_loss, loss_and_gradients
from src.training.optimizer import AdamState, adam_step
from src.utils.errors import DataError, LayoutError, NumericalError

# Configure logger
logger = logging.getLogger(__name__)


def _stack(samples, net, name):
    if not samples:
        raise DataError(f"The {name} set is empty")
    if samples[0].layout != net.layout:
        raise LayoutError(f"{name} samples do not follow the network layout {net.layout.groups}")
    return stack_samples(samples)


def evaluate_loss(net, x, y):
    """Data term (MSE) of ``net`` on stacked samples."""
    pred, _ = net.forward_batch(x)
    value = data_loss(pred, y)
    if not np.isfinite(value):
        raise NumericalError("Validation loss is not finite")
    return value


def train(net, train_set, val_set, config):
    """Fit ``net`` in place.

    Each epoch visits the training samples in a fresh seeded order, in batches
    of ``batch_size`` samples. Training stops once the validation loss has not
    improved for ``patience`` epochs (or at ``max_epochs``); the parameters of
    the best validation epoch are restored.

    Args:
        net: Network built for the samples' layout
        train_set: List of InputSample
        val_set: List of InputSample
        config: TrainConfig

    Returns:
        tuple: (net, TrainLog)
    """
    x_train, y_train = _stack(train_set, net, 'training')
    x_val, y_val = _stack(val_set, net, 'validation')
    n = x_train.shape[0]

    rng = np.random.default_rng(config.seed)
    state = AdamState.for_arrays(net.named_arrays())
    log = TrainLog()
    best = {name: a.copy() for name, a in net.named_arrays().items()}
    since_best = 0
    start = time.time()

    logger.info(
        f"Training {net.config.variant} on {n} samples ({x_train.shape[1]} zones, {x_train.shape[2]} features), "
        f"{len(val_set)} validation samples"
    )

    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(n)
        weighted = 0.0
        for lo in range(0, n, config.batch_size):
            idx = order[lo:lo + config.batch_size]
            _, data, grads = loss_and_gradients(net, x_train[idx], y_train[idx], config)
            adam_step(net, grads, state, config)
            weighted += data * idx.size
        train_loss = weighted / n
        val_loss = evaluate_loss(net, x_val, y_val)

        if log.record(epoch, train_loss, val_loss):
            best = {name: a.copy() for name, a in net.named_arrays().items()}
            since_best = 0
        else:
            since_best += 1

        if epoch % config.log_every == 0:
            logger.info(f"Epoch {epoch}: train={train_loss:.6f} val={val_loss:.6f} best={log.best_val_loss:.6f}@{log.best_epoch}")

        if since_best >= config.patience:
            log.stop_reason = 'early_stopping'
            break
    else:
        log.stop_reason = 'max_epochs'

    for name, array in net.named_arrays().items():
        array[...] = best[name]

    duration = time.time() - start
    logger.info(
        f"Stopped after {len(log.epochs)} epochs ({log.stop_reason}) in {duration:.1f}s; "
        f"restored epoch {log.best_epoch} with val={log.best_val_loss:.6f}"
    )
    return net, log
