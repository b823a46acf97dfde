from types import SimpleNamespace

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from src.config import TrainConfig
from src.config.run_config import FEATURE_GROUPS, VARIANTS
from src.dataset import build_samples, prepare_dataset
from src.evaluation import (
    FEATURE_COMBINATIONS,
    evaluate,
    historical_average_baseline,
    mae,
    persistence_baseline,
    rmse,
    run_feature_ablation,
    run_model_ablation,
    smape,
)
from src.utils.errors import DataError, ShapeError

TINY_TRAIN = TrainConfig(max_epochs=2, patience=2, batch_size=8)


def brute_force(preds, targets):
    """Cell-by-cell MAE, RMSE and sMAPE."""
    abs_sum = sq_sum = sym_sum = 0.0
    count = 0
    for i in range(preds.shape[0]):
        for j in range(preds.shape[1]):
            o, a = float(preds[i, j]), float(targets[i, j])
            abs_sum += abs(o - a)
            sq_sum += (o - a) ** 2
            sym_sum += abs(o - a) / (abs(o) + abs(a) + 1.0)
            count += 1
    return abs_sum / count, (sq_sum / count) ** 0.5, sym_sum / count


class FixedForecaster:
    name = 'fixed'

    def __init__(self, predictions):
        self.predictions = np.asarray(predictions, dtype=np.float64)

    def predict(self, samples):
        return self.predictions


class TestMetrics:
    def test_identical_inputs_score_zero(self):
        values = np.array([[1.0, 2.0], [3.0, 0.0]])
        assert (mae(values, values), rmse(values, values), smape(values, values)) == (0.0, 0.0, 0.0)

    def test_hand_values(self):
        assert mae([[1.0, 2.0]], [[0.0, 4.0]]) == 1.5
        assert rmse([3.0, 4.0], [0.0, 0.0]) == pytest.approx(3.5355339059327378, abs=1e-15)
        assert smape([[0.0]], [[0.0]]) == 0.0
        assert smape([[1.0]], [[0.0]]) == 0.5

    def test_brute_force_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            shape = tuple(rng.integers(1, 6, size=2))
            preds = rng.normal(0.0, 10.0, shape)
            targets = rng.poisson(5.0, shape).astype(np.float64)
            expected = brute_force(preds, targets)
            assert mae(preds, targets) == pytest.approx(expected[0], rel=0, abs=1e-12)
            assert rmse(preds, targets) == pytest.approx(expected[1], rel=0, abs=1e-12)
            assert smape(preds, targets) == pytest.approx(expected[2], rel=0, abs=1e-12)
            assert rmse(preds, targets) >= mae(preds, targets)
            assert 0.0 <= smape(preds, targets) < 1.0

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            mae(np.zeros((2, 2)), np.zeros((2, 3)))
        with pytest.raises(ShapeError):
            rmse(np.zeros((0,)), np.zeros((0,)))


class TestBaselines:
    def test_persistence_on_constant_series(self, frame_factory):
        frame = frame_factory(demand=np.full((2, 6), 4), slot_minutes=240)
        samples = build_samples(frame, lookback=1)
        report = evaluate(persistence_baseline(frame, 'demand'), samples)
        assert (report.mae, report.rmse, report.smape) == (0.0, 0.0, 0.0)

    def test_persistence_on_a_step(self, frame_factory):
        frame = frame_factory(demand=[[0, 0, 0, 10, 10, 10]], slot_minutes=240)
        predictions = persistence_baseline(frame, 'demand').predict(build_samples(frame, lookback=1))
        assert_array_equal(predictions[:, 0], [0, 0, 0, 10, 10])
        errors = predictions[:, 0] - frame.demand[0, 1:]
        assert_array_equal(errors, [0, 0, -10, 0, 0])

    def test_persistence_on_a_random_walk(self, frame_factory):
        steps = np.random.default_rng(3).integers(0, 4, size=12)
        walk = np.cumsum(steps)[None, :]
        frame = frame_factory(demand=walk, slot_minutes=120)
        samples = build_samples(frame, lookback=1)
        predictions = persistence_baseline(frame, 'demand').predict(samples)
        targets = np.stack([s.target for s in samples])
        assert_array_equal(targets - predictions, steps[1:, None])

    def test_persistence_is_undefined_inside_the_lookback(self, frame_factory):
        frame = frame_factory(demand=np.ones((1, 6), dtype=np.int64), slot_minutes=240)
        baseline = persistence_baseline(frame, 'demand', lookback=3)
        with pytest.raises(DataError):
            baseline.predict(build_samples(frame, lookback=2))

    def test_historical_average_on_daily_seasonality(self, frame_factory):
        day = np.array([[1, 5, 9, 4], [0, 2, 2, 7]])
        frame = frame_factory(demand=np.tile(day, 3), slot_minutes=360)
        baseline = historical_average_baseline(frame, 'demand', train_end=8)
        test = [s for s in build_samples(frame, lookback=1) if s.slot_index >= 8]
        assert (evaluate(baseline, test).mae, evaluate(baseline, test).rmse) == (0.0, 0.0)

    def test_historical_average_of_a_shifted_series_has_constant_bias(self, frame_factory):
        day = np.array([[3, 6, 2, 8]])
        frame = frame_factory(demand=np.hstack([day, day, day + 2]), slot_minutes=360)
        baseline = historical_average_baseline(frame, 'demand', train_end=8)
        test = [s for s in build_samples(frame, lookback=1) if s.slot_index >= 8]
        errors = np.stack([s.target for s in test]) - baseline.predict(test)
        assert_array_equal(errors, np.full((4, 1), 2.0))

    def test_historical_average_rejects_empty_training_period(self, frame_factory):
        frame = frame_factory(demand=np.ones((1, 3), dtype=np.int64))
        with pytest.raises(DataError):
            historical_average_baseline(frame, 'demand', train_end=0)


class TestEvaluate:
    def test_two_by_two_hand_case(self):
        samples = [SimpleNamespace(target=np.array([1.0, 1.0])), SimpleNamespace(target=np.array([1.0, 5.0]))]
        report = evaluate(FixedForecaster([[1.0, 2.0], [3.0, 4.0]]), samples, target='gap')
        assert report.model_id == 'fixed'
        assert report.target == 'gap'
        assert report.mae == 1.0
        assert report.rmse == pytest.approx(1.5 ** 0.5, abs=1e-15)
        assert report.smape == pytest.approx(0.1875, abs=1e-15)
        assert (report.n_slots, report.n_zones) == (2, 2)
        assert list(report.row()) == ['model', 'target', 'mae', 'rmse', 'smape']

    def test_perfect_predictor(self, tiny_dataset):
        targets = np.stack([s.target for s in tiny_dataset.test])
        report = evaluate(FixedForecaster(targets), tiny_dataset.test)
        assert (report.mae, report.rmse, report.smape) == (0.0, 0.0, 0.0)

    def test_order_invariance(self, tiny_frame, tiny_dataset):
        baseline = persistence_baseline(tiny_frame, 'demand', lookback=2)
        forward = evaluate(baseline, tiny_dataset.test)
        backward = evaluate(baseline, tiny_dataset.test[::-1])
        assert forward.mae == pytest.approx(backward.mae, abs=1e-12)
        assert forward.rmse == pytest.approx(backward.rmse, abs=1e-12)
        assert forward.smape == pytest.approx(backward.smape, abs=1e-12)

    def test_no_samples(self):
        with pytest.raises(DataError):
            evaluate(FixedForecaster([[0.0]]), [])


class TestAblation:
    def test_model_ablation_has_one_row_per_variant(self, tiny_frame, run_config):
        matrix = run_model_ablation(tiny_frame, run_config.data, run_config.model, TINY_TRAIN)
        assert len(matrix) == 7
        assert [r.configuration for r in matrix.rows] == list(VARIANTS)
        assert [r.seed for r in matrix.rows] == [run_config.model.seed + i for i in range(7)]
        n_test = len(prepare_dataset(tiny_frame, run_config.data, run_config.model).test)
        assert {r.metrics.n_slots for r in matrix.rows} == {n_test}

    def test_model_ablation_is_reproducible(self, tiny_frame, run_config):
        variants = ('FOCIR', 'FIN')
        first = run_model_ablation(tiny_frame, run_config.data, run_config.model, TINY_TRAIN, variants=variants)
        second = run_model_ablation(tiny_frame, run_config.data, run_config.model, TINY_TRAIN, variants=variants)
        assert first.table() == second.table()

    def test_feature_ablation_has_six_rows(self, tiny_frame, run_config):
        matrix = run_feature_ablation(tiny_frame, run_config.data, run_config.model, TINY_TRAIN)
        assert len(matrix) == 6
        assert [r.configuration for r in matrix.rows] == [label for label, _ in FEATURE_COMBINATIONS]
        table = matrix.table()
        assert list(table[0]) == ['configuration', 'seed', 'model', 'target', 'mae', 'rmse', 'smape']

    def test_full_feature_run_equals_the_unmasked_model(self, tiny_frame, run_config):
        features = run_feature_ablation(
            tiny_frame, run_config.data, run_config.model, TINY_TRAIN, combinations=(('all', FEATURE_GROUPS),),
        )
        models = run_model_ablation(
            tiny_frame, run_config.data, run_config.model, TINY_TRAIN, variants=(run_config.model.variant,),
        )
        a, b = features.rows[0].metrics, models.rows[0].metrics
        assert (a.mae, a.rmse, a.smape) == (b.mae, b.rmse, b.smape)
