"""Loss, initialisation, optimiser and the training loop."""

from src.training.initialization import FI_INIT_RANGE, glorot_limit, init_weights
from src.training.loss import data_loss, loss, loss_and_gradients, network_gradient_errors, regularization
from src.training.optimizer import AdamState, adam_step, adam_update, constrain_recurrent
from src.training.trainer import evaluate_loss, train

__all__ = [
    'FI_INIT_RANGE', 'glorot_limit', 'init_weights', 'data_loss', 'loss', 'loss_and_gradients',
    'network_gradient_errors', 'regularization', 'AdamState', 'adam_step', 'adam_update', 'constrain_recurrent',
    'evaluate_loss', 'train',
]
