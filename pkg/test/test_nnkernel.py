import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.nnkernel import (
    Conv1DParams,
    DenseParams,
    FeatureImportanceParams,
    IndRNNParams,
    activation_apply,
    activation_grad,
    concatenate,
    conv1d_backward,
    conv1d_forward,
    dense_backward,
    dense_forward,
    ensure_finite,
    feature_importance_backward,
    feature_importance_forward,
    finite_difference_check,
    flatten_steps,
    gather_steps,
    indrnn_step,
    layer_gradcheck,
    recurrent_bound,
    reshape_to_steps,
    scatter_steps,
    split_columns,
    zone_distributed_indrnn_backward,
    zone_distributed_indrnn_forward,
)
from src.utils.errors import ConfigError, MissingCacheError, NumericalError, ShapeError

GRAD_TOLERANCE = 1e-5


@pytest.fixture
def rng():
    return np.random.default_rng(7)


class TestActivations:
    def test_reference_values(self):
        assert activation_apply('sigmoid', 0.0) == 0.5
        assert activation_apply('relu', -3.0) == 0.0
        assert activation_grad('relu', -3.0) == 0.0
        assert activation_apply('tanh', 1.0) == pytest.approx(0.7615941559557649, abs=1e-15)
        assert activation_grad('linear', 4.0) == 1.0

    def test_sigmoid_saturates_without_overflow(self):
        values = activation_apply('sigmoid', np.array([-1000.0, 1000.0]))
        assert_array_equal(values, [0.0, 1.0])

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            activation_apply('softplus', 1.0)


class TestFeatureImportance:
    def test_zero_weights_halve_the_input(self, rng):
        x = rng.standard_normal((3, 4))
        params = FeatureImportanceParams(np.zeros((3, 4)))
        weighted, scores = feature_importance_forward(x, params)
        assert_allclose(weighted, 0.5 * x)
        assert_array_equal(scores, np.full((3, 4), 0.5))

    def test_zero_input_is_absorbing(self, rng):
        params = FeatureImportanceParams(rng.standard_normal((2, 3)))
        weighted, _ = feature_importance_forward(np.zeros((2, 3)), params)
        assert not weighted.any()

    def test_hand_value(self):
        params = FeatureImportanceParams(np.array([[math.log(3.0)]]))
        weighted, scores = feature_importance_forward(np.array([[2.0]]), params)
        assert scores[0, 0] == pytest.approx(0.75, abs=1e-15)
        assert weighted[0, 0] == pytest.approx(1.5, abs=1e-15)

    def test_backward_examples(self, rng):
        x = rng.standard_normal((2, 3))
        params = FeatureImportanceParams(np.zeros((2, 3)))
        grad_x, grads = feature_importance_backward(np.zeros((2, 3)), x, params)
        assert not grad_x.any() and not grads['weights'].any()
        grad_out = rng.standard_normal((2, 3))
        grad_x, _ = feature_importance_backward(grad_out, x, params)
        assert_allclose(grad_x, 0.5 * grad_out)

    def test_gradcheck(self, rng):
        x = rng.standard_normal((2, 3, 4))
        params = FeatureImportanceParams(rng.standard_normal((3, 4)))
        error = layer_gradcheck(
            lambda inp: feature_importance_forward(inp, params),
            lambda grad, _: feature_importance_backward(grad, x, params),
            x, params.arrays(),
        )
        assert error < GRAD_TOLERANCE

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            feature_importance_forward(np.zeros((2, 3)), FeatureImportanceParams(np.zeros((3, 3))))


class TestConv1D:
    def test_zero_input_zero_bias(self, rng):
        params = Conv1DParams(rng.standard_normal((2, 3, 2)), np.zeros(2), 'linear')
        out, _ = conv1d_forward(np.zeros((5, 2)), params)
        assert not out.any()

    def test_pointwise_filter(self):
        params = Conv1DParams(np.full((1, 1, 1), 2.0), np.array([1.0]), 'linear')
        out, _ = conv1d_forward(np.array([[1.0], [2.0], [3.0]]), params)
        assert_array_equal(out[:, 0], [3.0, 5.0, 7.0])

    def test_same_padding(self):
        params = Conv1DParams(np.ones((1, 3, 1)), np.zeros(1), 'linear')
        out, _ = conv1d_forward(np.ones((3, 1)), params)
        assert_array_equal(out[:, 0], [2.0, 3.0, 2.0])

    def test_zone_extent_preserved_with_batch_axes(self, rng):
        params = Conv1DParams(rng.standard_normal((4, 5, 3)), rng.standard_normal(4), 'relu')
        out, _ = conv1d_forward(rng.standard_normal((2, 6, 7, 3)), params)
        assert out.shape == (2, 6, 7, 4)

    def test_even_filter_length_is_rejected(self):
        with pytest.raises(ShapeError):
            Conv1DParams(np.zeros((1, 2, 1)), np.zeros(1))

    def test_zero_upstream_gradient(self, rng):
        params = Conv1DParams(rng.standard_normal((2, 3, 2)), rng.standard_normal(2), 'tanh')
        out, cache = conv1d_forward(rng.standard_normal((4, 2)), params)
        grad_x, grads = conv1d_backward(np.zeros_like(out), cache, params)
        assert not grad_x.any()
        assert not grads['filters'].any() and not grads['bias'].any()

    @pytest.mark.parametrize('activation', ['linear', 'tanh', 'sigmoid'])
    def test_gradcheck(self, rng, activation):
        params = Conv1DParams(rng.standard_normal((2, 3, 3)), rng.standard_normal(2), activation)
        x = rng.standard_normal((2, 5, 3))
        error = layer_gradcheck(
            lambda inp: conv1d_forward(inp, params),
            lambda grad, cache: conv1d_backward(grad, cache, params),
            x, params.arrays(),
        )
        assert error < GRAD_TOLERANCE

    def test_interior_shift_equivariance(self, rng):
        params = Conv1DParams(rng.standard_normal((3, 3, 2)), rng.standard_normal(3), 'tanh')
        x = rng.standard_normal((8, 2))
        out, _ = conv1d_forward(x, params)
        shifted, _ = conv1d_forward(np.roll(x, 1, axis=0), params)
        assert_allclose(shifted[2:7], out[1:6], rtol=0, atol=1e-12)

    def test_missing_cache(self, rng):
        params = Conv1DParams(np.zeros((1, 3, 1)), np.zeros(1))
        with pytest.raises(MissingCacheError):
            conv1d_backward(np.zeros((3, 1)), None, params)


class TestIndRNN:
    def test_step_with_identity_recurrence(self):
        params = IndRNNParams(np.zeros((2, 1)), np.ones(2), np.zeros(2), 'relu', 1.0)
        h = indrnn_step(np.array([5.0]), np.array([2.0, -1.0]), params)
        assert_array_equal(h, [2.0, 0.0])

    def test_step_from_zero_state(self, rng):
        params = IndRNNParams(rng.standard_normal((3, 2)), np.full(3, 0.9), rng.standard_normal(3), 'tanh', 1.0)
        x = rng.standard_normal(2)
        assert_allclose(indrnn_step(x, np.zeros(3), params), np.tanh(params.input_weights @ x + params.bias))

    def test_all_zero_params(self):
        params = IndRNNParams(np.zeros((2, 2)), np.zeros(2), np.zeros(2), 'tanh', 1.0)
        assert_array_equal(indrnn_step(np.ones(2), np.ones(2), params), [0.0, 0.0])

    def test_recurrent_bound(self):
        assert recurrent_bound('relu', 6) == pytest.approx(1.122462048309373, rel=1e-12)
        assert recurrent_bound('tanh', 6) == 1.0
        with pytest.raises(ConfigError):
            recurrent_bound('sigmoid', 6)

    def test_weights_outside_bound_are_rejected(self):
        with pytest.raises(ConfigError):
            IndRNNParams(np.zeros((1, 1)), np.array([1.5]), np.zeros(1), 'tanh', 1.0)

    def _stack(self, rng, f_in=4, hidden=3, activation='tanh'):
        return [
            IndRNNParams(rng.standard_normal((hidden, f_in)), rng.uniform(-1, 1, hidden), rng.standard_normal(hidden),
                         activation, 1.0),
            IndRNNParams(rng.standard_normal((hidden, hidden)), rng.uniform(-1, 1, hidden),
                         rng.standard_normal(hidden), activation, 1.0),
        ]

    def test_identical_zones_give_identical_rows(self, rng):
        stack = self._stack(rng)
        row = rng.standard_normal((4, 2))
        out, _ = zone_distributed_indrnn_forward(np.stack([row, row, row]), stack)
        assert out.shape == (3, 3)
        assert_array_equal(out[0], out[1])
        assert_array_equal(out[1], out[2])

    def test_zone_permutation_equivariance(self, rng):
        stack = self._stack(rng)
        x = rng.standard_normal((6, 4, 3))
        perm = rng.permutation(6)
        out, _ = zone_distributed_indrnn_forward(x, stack)
        permuted, _ = zone_distributed_indrnn_forward(x[perm], stack)
        assert_allclose(permuted, out[perm], rtol=0, atol=1e-12)

    def test_zero_upstream_gradient(self, rng):
        stack = self._stack(rng)
        out, cache = zone_distributed_indrnn_forward(rng.standard_normal((3, 4, 2)), stack)
        grad_x, grads = zone_distributed_indrnn_backward(np.zeros_like(out), cache, stack)
        assert not grad_x.any()
        assert all(not g.any() for layer in grads for g in layer.values())

    def test_gradcheck(self, rng):
        stack = self._stack(rng)
        arrays = {f'{i}.{name}': a for i, params in enumerate(stack) for name, a in params.arrays().items()}

        def backward(grad, cache):
            grad_x, layers = zone_distributed_indrnn_backward(grad, cache, stack)
            return grad_x, {f'{i}.{name}': g for i, layer in enumerate(layers) for name, g in layer.items()}

        x = rng.standard_normal((2, 3, 4, 3))
        error = layer_gradcheck(lambda inp: zone_distributed_indrnn_forward(inp, stack), backward, x, arrays)
        assert error < GRAD_TOLERANCE

    def test_empty_steps(self, rng):
        with pytest.raises(ShapeError):
            zone_distributed_indrnn_forward(np.zeros((3, 4, 0)), self._stack(rng))


class TestDense:
    def test_identity_weights(self, rng):
        x = rng.standard_normal((4, 3))
        out, _ = dense_forward(x, DenseParams(np.eye(3), np.zeros(3), 'linear'))
        assert_array_equal(out, x)

    def test_zero_weights_repeat_the_bias(self, rng):
        out, _ = dense_forward(rng.standard_normal((3, 2)), DenseParams(np.zeros((2, 2)), np.array([0.0, 1.0]), 'sigmoid'))
        assert_allclose(out, np.tile(activation_apply('sigmoid', np.array([0.0, 1.0])), (3, 1)))

    def test_linear_gradcheck_is_exact(self, rng):
        params = DenseParams(rng.standard_normal((3, 4)), rng.standard_normal(3), 'linear')
        x = rng.standard_normal((2, 5, 4))
        error = layer_gradcheck(
            lambda inp: dense_forward(inp, params),
            lambda grad, cache: dense_backward(grad, cache, params),
            x, params.arrays(), eps=1e-4,
        )
        assert error < 1e-8

    def test_sigmoid_gradcheck(self, rng):
        params = DenseParams(rng.standard_normal((3, 4)), rng.standard_normal(3), 'sigmoid')
        x = rng.standard_normal((5, 4))
        error = layer_gradcheck(
            lambda inp: dense_forward(inp, params),
            lambda grad, cache: dense_backward(grad, cache, params),
            x, params.arrays(),
        )
        assert error < GRAD_TOLERANCE

    def test_corrupted_gradient_is_caught(self, rng):
        params = DenseParams(rng.standard_normal((3, 4)), rng.standard_normal(3), 'sigmoid')
        x = rng.standard_normal((5, 4))
        readout = rng.standard_normal((5, 3))
        out, cache = dense_forward(x, params)
        _, grads = dense_backward(readout, cache, params)
        corrupted = {name: 1.5 * g for name, g in grads.items()}

        def loss_fn():
            return float(np.sum(dense_forward(x, params)[0] * readout))

        assert finite_difference_check(loss_fn, params.arrays(), corrupted) > 1e-2


class TestAdapters:
    def test_concatenate_and_split(self, rng):
        a, b = rng.standard_normal((4, 2)), rng.standard_normal((4, 3))
        joined = concatenate([a, b])
        assert_array_equal(joined[:, :2], a)
        assert_array_equal(joined[:, 2:], b)
        left, right = split_columns(joined, [2, 3])
        assert_array_equal(left, a)
        assert_array_equal(right, b)
        assert_array_equal(concatenate([a]), a)

    def test_concatenate_rejects_mismatched_zones(self, rng):
        with pytest.raises(ShapeError):
            concatenate([np.zeros((3, 2)), np.zeros((4, 2))])

    def test_reshape_to_steps_hand_case(self):
        d1, d2, s1, s2 = 1.0, 2.0, 3.0, 4.0
        steps = reshape_to_steps(np.array([[d1, d2, s1, s2]]), n_vars=2, lookback=2)
        assert steps.shape == (1, 2, 2)
        assert_array_equal(np.swapaxes(steps, -1, -2)[0], [[d2, s2], [d1, s1]])
        assert_array_equal(flatten_steps(steps), [[d1, d2, s1, s2]])

    def test_single_variable_single_step(self, rng):
        x = rng.standard_normal((3, 1))
        assert_array_equal(reshape_to_steps(x, 1, 1)[..., 0], x)

    def test_scatter_is_adjoint_of_gather(self, rng):
        index = np.array([[4, 0], [5, 1], [6, 2]])
        x = rng.standard_normal((2, 3, 7))
        g = rng.standard_normal((2, 3, 3, 2))
        lhs = np.sum(gather_steps(x, index) * g)
        rhs = np.sum(x * scatter_steps(g, index, 7))
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_ensure_finite():
    with pytest.raises(NumericalError):
        ensure_finite(np.array([1.0, np.nan]), 'test')
    with pytest.raises(NumericalError):
        ensure_finite(np.array([np.inf]), 'test')
