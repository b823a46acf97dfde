import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.config import DataConfig, ModelConfig
from src.dataset import (
    aggregate_order_arrays,
    aggregate_orders,
    apply_feature_mask,
    build_sample,
    build_samples,
    calendar_context,
    fit_feature_stats,
    frame_summary,
    prepare_dataset,
    read_raw_dataset,
    repeat_across_time,
    repeat_across_zones,
    split_chronological,
    write_raw_dataset,
)
from src.models import FeatureLayout, FeatureStats, OrderRecord, SpaceTimeGrid
from src.utils.errors import DataError, LayoutError


@pytest.fixture
def grid():
    return SpaceTimeGrid(num_zones=2, slot_minutes=480, num_days=1)


class TestAggregation:
    def test_empty_input_gives_zero_matrices(self, grid):
        demand, supplied, gap = aggregate_order_arrays([], [], [], grid)
        for matrix in (demand, supplied, gap):
            assert matrix.shape == (2, 3)
            assert not matrix.any()

    def test_unmatched_requests_form_the_gap(self, grid):
        records = [OrderRecord(0, 0, True), OrderRecord(0, 0, False), OrderRecord(0, 0, True)]
        demand, supplied, gap = aggregate_orders(records, grid)
        assert (demand[0, 0], supplied[0, 0], gap[0, 0]) == (3, 2, 1)
        assert demand.sum() == 3

    def test_every_zone_once_all_matched(self, grid):
        demand, _, gap = aggregate_order_arrays([0, 1], [2, 2], [True, True], grid)
        assert_array_equal(demand[:, 2], [1, 1])
        assert not gap.any()

    def test_out_of_grid_record_is_named(self, grid):
        with pytest.raises(DataError, match="Order record 1"):
            aggregate_order_arrays([0, 5], [0, 0], [True, True], grid)

    def test_repeat_across_zones(self):
        assert_array_equal(repeat_across_zones([5.0], 3), [[5], [5], [5]])
        assert_array_equal(repeat_across_zones([1, 0, 0], 2), [[1, 0, 0], [1, 0, 0]])
        assert_array_equal(repeat_across_zones([-2.5, 7.0], 1), [[-2.5, 7.0]])

    def test_repeat_across_time(self):
        out = repeat_across_time([1, 2], 2)
        assert out.shape == (2, 1, 2)
        for t in range(2):
            assert_array_equal(out[:, :, t], [[1], [2]])
        assert not repeat_across_time([0], 5).any()
        assert_array_equal(repeat_across_time([9], 1), [[[9]]])

    def test_calendar_context(self):
        grid = SpaceTimeGrid(num_zones=1, slot_minutes=480, num_days=7)
        time_of_day, day_of_week = calendar_context(grid, first_weekday=0)
        assert_array_equal(time_of_day[:3], np.eye(3))
        assert_array_equal(time_of_day.sum(axis=1), np.ones(21))
        assert_array_equal(day_of_week[::3], [0, 0, 0, 0, 0, 1, 1])

    def test_frame_rejects_gap_above_demand(self, frame_factory):
        with pytest.raises(DataError):
            frame_factory(demand=[[1, 1, 1]], gap=[[0, 2, 0]])

    def test_frame_summary(self, frame_factory):
        frame = frame_factory(demand=[[2, 2, 0], [4, 0, 0]], gap=[[1, 0, 0], [1, 0, 0]])
        summary = frame_summary(frame)
        assert summary['total_orders'] == 8
        assert summary['unmatched_orders'] == 2
        assert summary['gap_fraction'] == 0.25


class TestSamples:
    def test_hand_built_sample_matches_layout(self, frame_factory):
        frame = frame_factory(
            demand=[[3, 4, 5], [1, 0, 2]],
            gap=[[1, 0, 2], [0, 0, 1]],
            congestion=[[7, 8, 9], [0, 1, 2]],
            weather_category=[1, 0, 1],
            temperature=[10.0, 11.0, 12.0],
            pm25=[50.0, 60.0, 70.0],
            poi=[3.0, 4.0],
            first_weekday=5,
        )
        sample = build_sample(frame, 1, lookback=1)
        assert sample.layout.columns == (
            'demand_lag1', 'supplied_lag1', 'gap_lag1', 'congestion_lag1',
            'weather_0_lag1', 'weather_1_lag1', 'temperature_lag1', 'pm25_lag1',
            'tod_sleep', 'tod_peak', 'tod_offpeak', 'weekend', 'poi',
        )
        assert_array_equal(sample.x, [
            [3, 2, 1, 7, 0, 1, 10, 50, 0, 1, 0, 1, 3],
            [1, 1, 0, 0, 0, 1, 10, 50, 0, 1, 0, 1, 4],
        ])
        assert_array_equal(sample.target, [4, 0])
        assert sample.slot_index == 1

    def test_gap_target(self, frame_factory):
        frame = frame_factory(demand=[[3, 4, 5]], gap=[[1, 2, 2]])
        sample = build_sample(frame, 2, lookback=2, target='gap')
        assert_array_equal(sample.target, [2])
        # lag t-1 comes first within each variable
        assert_array_equal(sample.x[0, :2], [4, 3])

    def test_sample_count_and_slots(self, frame_factory):
        frame = frame_factory(demand=np.ones((2, 5), dtype=np.int64), slot_minutes=288)
        samples = build_samples(frame, lookback=2)
        assert [s.slot_index for s in samples] == [2, 3, 4]

    def test_lookback_must_be_below_horizon(self, frame_factory):
        frame = frame_factory(demand=np.ones((1, 3), dtype=np.int64))
        with pytest.raises(DataError):
            build_samples(frame, lookback=3)

    def test_build_samples_is_pure(self, tiny_frame):
        first = build_samples(tiny_frame, 2)
        second = build_samples(tiny_frame, 2)
        for a, b in zip(first, second):
            assert_array_equal(a.x, b.x)
            assert_array_equal(a.target, b.target)

    def test_constant_frame_standardises_to_zero(self, frame_factory):
        k = 4
        frame = frame_factory(
            demand=np.full((2, 6), k),
            gap=np.full((2, 6), k),
            congestion=np.full((2, 6), k),
            temperature=np.full(6, 20.0),
            pm25=np.full(6, 30.0),
            poi=np.full(2, 2.0),
            slot_minutes=240,
            n_weather_categories=1,
        )
        samples = build_samples(frame, lookback=2)
        stats = fit_feature_stats(samples)
        continuous = ~samples[0].layout.passthrough
        for sample in samples:
            assert not stats.apply(sample.x)[:, continuous].any()

    def test_layout_arithmetic(self):
        layout = FeatureLayout(lookback=6, n_weather_categories=3)
        assert layout.n_features == 4 * 6 + 5 * 6 + 5
        assert layout.step_index().shape == (4 + 5, 6)
        masked = layout.masked(('spatiotemporal',))
        assert masked.n_features == 4 * 6
        with pytest.raises(LayoutError):
            masked.masked(('temporal',))

    def test_step_index_is_oldest_first(self):
        layout = FeatureLayout(lookback=2, n_weather_categories=1)
        index = layout.step_index()
        # demand: lag t-2 (column 1) then lag t-1 (column 0)
        assert_array_equal(index[0], [1, 0])
        # temporal block starts at 8; lag-major blocks of width 3
        assert_array_equal(index[4], [11, 8])


class TestSplitAndStandardise:
    @pytest.mark.parametrize('n, train_frac, val_frac, sizes', [
        (100, 0.70, 0.15, (70, 15, 15)),
        (10, 0.70, 0.15, (7, 1, 2)),
        (3, 0.34, 0.33, (1, 1, 1)),
    ])
    def test_split_sizes(self, n, train_frac, val_frac, sizes):
        train, val, test = split_chronological(list(range(n)), train_frac, val_frac)
        assert (len(train), len(val), len(test)) == sizes
        assert train + val + test == list(range(n))

    def test_empty_partition_is_rejected(self):
        with pytest.raises(DataError):
            split_chronological(list(range(2)), 0.70, 0.15)

    def test_constant_column(self):
        x = np.full((4, 1), 3.0)
        stats = FeatureStats.fit(x, [False])
        assert stats.mean[0] == 3.0
        assert stats.scale[0] == 1.0
        assert stats.apply(x)[0, 0] == 0.0

    def test_two_value_column(self):
        stats = FeatureStats.fit(np.array([[0.0], [2.0]]), [False])
        assert stats.mean[0] == 1.0
        assert stats.scale[0] == 1.0

    def test_one_hot_column_passes_through(self):
        x = np.array([[0.0, 5.0], [1.0, 7.0]])
        stats = FeatureStats.fit(x, [True, False])
        assert_array_equal(stats.apply(x)[:, 0], x[:, 0])

    def test_prepare_dataset_fits_on_training_rows_only(self, tiny_frame, run_config):
        dataset = prepare_dataset(tiny_frame, run_config.data, run_config.model)
        n = tiny_frame.total_slots - run_config.model.lookback
        assert len(dataset.train) + len(dataset.val) + len(dataset.test) == n
        raw = build_samples(tiny_frame, run_config.model.lookback)[:len(dataset.train)]
        assert_allclose(dataset.stats.mean, fit_feature_stats(raw).mean)
        # targets stay on the raw scale
        assert_array_equal(dataset.test[-1].target, tiny_frame.demand[:, -1])

    def test_prepare_dataset_without_standardisation(self, tiny_frame, run_config):
        data_config = DataConfig(slot_minutes=120, standardize=False)
        dataset = prepare_dataset(tiny_frame, data_config, run_config.model)
        raw = build_samples(tiny_frame, run_config.model.lookback)
        assert_array_equal(dataset.train[0].x, raw[0].x)

    def test_feature_mask(self, tiny_dataset):
        samples = tiny_dataset.train
        assert apply_feature_mask(samples, samples[0].layout.groups) is samples
        masked = apply_feature_mask(samples, ('spatiotemporal',))
        b = samples[0].layout.lookback
        assert masked[0].x.shape == (samples[0].x.shape[0], 4 * b)
        assert_array_equal(masked[0].x, samples[0].x[:, :4 * b])

    def test_masked_prepare_dataset(self, tiny_frame, run_config):
        model_config = ModelConfig(lookback=2, feature_groups=('temporal', 'context'))
        dataset = prepare_dataset(tiny_frame, run_config.data, model_config)
        assert dataset.layout.groups == ('temporal', 'context')
        assert dataset.stats.mean.shape == (FeatureLayout(2, 3).n_features,)


class TestRawFiles:
    def test_write_then_read_recovers_the_frame(self, tiny_frame, tmp_path):
        write_raw_dataset(tiny_frame, tmp_path)
        data_config = DataConfig(slot_minutes=120, n_weather_categories=tiny_frame.n_weather_categories)
        frame = read_raw_dataset(tmp_path, data_config)
        for name in ('demand', 'supplied', 'gap', 'congestion', 'weather_category', 'day_of_week', 'time_of_day'):
            assert_array_equal(getattr(frame, name), getattr(tiny_frame, name))
        for name in ('temperature', 'pm25', 'poi'):
            assert_allclose(getattr(frame, name), getattr(tiny_frame, name), rtol=0, atol=1e-12)

    def test_reader_sums_levels_and_poi_classes_and_fills_weather(self, tmp_path):
        pd.DataFrame({'zone_id': [0, 0, 1], 'slot_index': [0, 2, 1], 'matched': [1, 0, 1]}).to_csv(
            tmp_path / 'orders.csv', index=False)
        pd.DataFrame({
            'zone_id': [0, 1], 'slot_index': [0, 2],
            'level1': [1, 0], 'level2': [2, 0], 'level3': [0, 4], 'level4': [0, 1],
        }).to_csv(tmp_path / 'congestion.csv', index=False)
        pd.DataFrame({
            'slot_index': [1], 'weather_category': [1], 'temperature': [12.5], 'pm25': [40.0],
        }).to_csv(tmp_path / 'weather.csv', index=False)
        pd.DataFrame({'zone_id': [0, 1], 'class_a': [2, 0], 'class_b': [1, 5]}).to_csv(
            tmp_path / 'poi.csv', index=False)

        frame = read_raw_dataset(tmp_path, DataConfig(slot_minutes=480))
        assert frame.num_zones == 2
        assert frame.total_slots == 3
        assert_array_equal(frame.demand, [[1, 0, 1], [0, 1, 0]])
        assert_array_equal(frame.gap, [[0, 0, 1], [0, 0, 0]])
        assert_array_equal(frame.congestion, [[3, 0, 0], [0, 0, 5]])
        assert_array_equal(frame.poi, [3, 5])
        assert_array_equal(frame.temperature, [12.5, 12.5, 12.5])
        assert frame.n_weather_categories == 2

    def test_missing_file_is_a_data_error(self, tmp_path):
        with pytest.raises(DataError, match="Missing data file"):
            read_raw_dataset(tmp_path, DataConfig())

    def test_invalid_matched_flag(self, tiny_frame, tmp_path):
        write_raw_dataset(tiny_frame, tmp_path)
        orders = pd.read_csv(tmp_path / 'orders.csv')
        orders.loc[0, 'matched'] = 2
        orders.to_csv(tmp_path / 'orders.csv', index=False)
        with pytest.raises(DataError, match="matched"):
            read_raw_dataset(tmp_path, DataConfig(slot_minutes=120))
