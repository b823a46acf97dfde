"""Adam with the recurrent-weight constraint applied after every step."""

from dataclasses import dataclass, field

import numpy as np

from src.utils.errors import ShapeError


@dataclass
class AdamState:
    """First/second moment estimates and the step counter."""

    m: dict = field(default_factory=dict)
    v: dict = field(default_factory=dict)
    t: int = 0

    @classmethod
    def for_arrays(cls, arrays):
        return cls(
            m={name: np.zeros_like(a) for name, a in arrays.items()},
            v={name: np.zeros_like(a) for name, a in arrays.items()},
        )


def adam_update(arrays, grads, state, config):
    """One bias-corrected Adam update of ``arrays`` in place."""
    state.t += 1
    lr = config.learning_rate
    b1, b2 = config.adam_beta1, config.adam_beta2
    correction1 = 1.0 - b1 ** state.t
    correction2 = 1.0 - b2 ** state.t
    for name, array in arrays.items():
        grad = grads[name]
        if name not in state.m:
            state.m[name] = np.zeros_like(array)
            state.v[name] = np.zeros_like(array)
        if grad.shape != array.shape or state.m[name].shape != array.shape:
            raise ShapeError(f"Adam: '{name}' has shape {array.shape}, gradient {grad.shape}, state {state.m[name].shape}")
        state.m[name] = b1 * state.m[name] + (1.0 - b1) * grad
        state.v[name] = b2 * state.v[name] + (1.0 - b2) * grad * grad
        m_hat = state.m[name] / correction1
        v_hat = state.v[name] / correction2
        array -= lr * m_hat / (np.sqrt(v_hat) + config.adam_eps)


def constrain_recurrent(params):
    """Clip recurrent weights into [-bound, bound] in place."""
    np.clip(params.recurrent_weights, -params.recurrent_bound, params.recurrent_bound, out=params.recurrent_weights)


def adam_step(net, grads, state, config):
    """Adam over every parameter of ``net``, then constrain each IndRNN layer."""
    adam_update(net.named_arrays(), grads, state, config)
    for params in net.indrnn_params():
        constrain_recurrent(params)
