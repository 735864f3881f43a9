"""
Unit tests for foraging and flocking metrics, checked against brute-force references
"""

import math

import numpy as np
import pandas as pd
import pytest

from src.core.geometry import WorldGeometry, subtract_headings
from src.metrics import reference
from src.metrics.aggregate import aggregate_column, aggregate_runs
from src.metrics.flocking import (
    heading_difference_series,
    heading_differences,
    pairwise_series,
    pairwise_stats,
)
from src.metrics.foraging import (
    STAT_COLUMNS,
    describe_steps,
    events_frame,
    extract_searches,
    extract_trips,
    food_timeseries,
    search_statistics,
    trip_statistics,
)
from src.utils.errors import InvalidArgumentError

TORUS = WorldGeometry(35, wrap=True)


@pytest.fixture
def events():
    return events_frame([
        {'tick': 3, 'agent_id': 0, 'event': 'pickup', 'patch_id': 1},
        {'tick': 5, 'agent_id': 1, 'event': 'pickup', 'patch_id': 1},
        {'tick': 10, 'agent_id': 0, 'event': 'drop', 'patch_id': 1},
        {'tick': 10, 'agent_id': 0, 'event': 'pickup', 'patch_id': 2},
        {'tick': 14, 'agent_id': 1, 'event': 'drop', 'patch_id': 1},
        {'tick': 20, 'agent_id': 0, 'event': 'drop', 'patch_id': 2},
    ])


class TestForaging:
    def test_food_is_a_staircase_over_every_tick(self, events):
        series = food_timeseries(events, 22)
        assert series['tick'].tolist() == list(range(1, 23))
        food = series.set_index('tick')['food']
        assert food[9] == 0 and food[10] == 1 and food[14] == 2 and food[22] == 3
        assert food.is_monotonic_increasing

    def test_empty_log_gives_flat_zero(self):
        series = food_timeseries(events_frame([]), 5)
        assert series['food'].tolist() == [0] * 5

    def test_trips_pair_pickup_with_next_drop(self, events):
        trips = extract_trips(events)
        assert sorted((t.agent_id, t.patch_id, t.steps) for t in trips) == [(0, 1, 7), (0, 2, 10), (1, 1, 9)]

    def test_searches_start_at_spawn_or_previous_drop(self, events):
        searches = extract_searches(events)
        # ant 0 drops and picks up again in the same tick: a zero-step search
        assert sorted((s.agent_id, s.start_tick, s.steps) for s in searches) == [(0, 0, 3), (0, 10, 0), (1, 0, 5)]

    def test_drop_without_pickup_is_ignored(self):
        frame = events_frame([{'tick': 4, 'agent_id': 2, 'event': 'drop', 'patch_id': 3}])
        assert extract_trips(frame) == []

    def test_statistics_per_patch(self, events):
        table = trip_statistics(extract_trips(events))
        assert table['patch'].tolist() == [1, 2]
        row = table.set_index('patch').loc[1]
        assert row['count'] == 2
        assert row['mean'] == pytest.approx(8.0)
        assert row['std'] == pytest.approx(1.0)
        assert list(search_statistics(extract_searches(events)).columns) == ['patch'] + STAT_COLUMNS

    def test_describe_matches_reference(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            values = rng.integers(1, 500, size=int(rng.integers(1, 51))).astype(float).tolist()
            expected = reference.describe(values)
            actual = describe_steps(values)
            for key in STAT_COLUMNS:
                assert actual[key] == pytest.approx(expected[key], rel=1e-9, abs=1e-9)

    def test_percentiles_interpolate_linearly(self):
        stats = describe_steps([10, 20, 30, 40, 50])
        assert stats['p20'] == pytest.approx(18.0)
        assert stats['p25'] == pytest.approx(20.0)
        assert stats['p75'] == pytest.approx(40.0)
        assert stats['std'] == pytest.approx(math.sqrt(200))

    def test_describe_empty(self):
        with pytest.raises(InvalidArgumentError):
            describe_steps([])


class TestFlockingMetrics:
    def test_heading_differences_simple(self):
        mean, std = heading_differences(np.array([0.0, 10.0, 350.0]), [0])
        assert mean == pytest.approx(10.0)
        assert std == pytest.approx(0.0)

    def test_heading_differences_match_reference(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            headings = rng.uniform(0, 360, size=30)
            members = sorted(rng.choice(30, size=int(rng.integers(1, 30)), replace=False).tolist())
            mean, std = heading_differences(headings, members)
            ref_mean, ref_std = reference.heading_differences(headings.tolist(), members)
            assert mean == pytest.approx(ref_mean, abs=1e-9)
            assert std == pytest.approx(ref_std, abs=1e-9)

    def test_heading_differences_ignore_a_global_rotation(self):
        rng = np.random.default_rng(21)
        for _ in range(500):
            headings = rng.integers(0, 360, size=20).astype(float)
            members = sorted(rng.choice(20, size=int(rng.integers(1, 20)), replace=False).tolist())
            rotated = (headings + rng.uniform(0, 360)) % 360.0
            mean, std = heading_differences(headings, members)
            rot_mean, rot_std = heading_differences(rotated, members)
            assert rot_mean == pytest.approx(mean, abs=1e-9)
            assert rot_std == pytest.approx(std, abs=1e-9)

    def test_pair_difference_is_symmetric(self):
        rng = np.random.default_rng(22)
        a = rng.uniform(0, 360, 5000)
        b = rng.uniform(0, 360, 5000)
        for x, y in zip(a.tolist(), b.tolist()):
            forward = subtract_headings(x, y)
            backward = subtract_headings(y, x)
            if abs(forward) == 180.0:
                assert backward == 180.0
            else:
                assert forward == pytest.approx(-backward, abs=1e-9)
            assert heading_differences(np.array([x, y]), [0])[0] == pytest.approx(abs(forward), abs=1e-9)
        assert subtract_headings(10.0, 190.0) == subtract_headings(190.0, 10.0) == 180.0

    def test_single_bird_has_no_difference(self):
        assert heading_differences(np.array([5.0]), [0]) is None

    def test_pairwise_worked_cases(self):
        positions = np.array([[0.0, 0.0], [0.5, 0.0], [3.0, 0.0], [-34.9, 20.0], [34.9, 20.0]])
        headings = np.array([0.0, 90.0, 10.0, 0.0, 20.0])
        stats = pairwise_stats(positions, headings, TORUS)
        # (0, 1) collide; (3, 4) are 1.2 apart across the seam but 20 degrees off
        assert stats.collisions == 1
        assert stats.neighbor_counts.tolist() == [1, 0, 1, 0, 0]

    def test_pairwise_matches_reference(self):
        rng = np.random.default_rng(8)
        for _ in range(1000):
            n = int(rng.integers(2, 51))
            positions = rng.uniform(-35.5, 35.5, size=(n, 2))
            # crowd some birds so that collisions and neighbors occur
            positions[: n // 2] = rng.uniform(-3, 3, size=(n // 2, 2))
            headings = rng.uniform(0, 40, size=n)
            stats = pairwise_stats(positions, headings, TORUS)
            collisions, counts, mean_distance = reference.pairwise(positions.tolist(), headings.tolist(), TORUS)
            assert stats.collisions == collisions
            assert stats.neighbor_counts.tolist() == counts
            assert stats.mean_distance == pytest.approx(mean_distance, abs=1e-9)

    def test_series_groups_and_empty_llm_group(self):
        positions = {1: np.array([[0.0, 0.0], [0.5, 0.0]]), 2: np.array([[0.0, 0.0], [2.0, 0.0]])}
        headings = {1: np.array([0.0, 0.0]), 2: np.array([0.0, 0.0])}
        frame = pairwise_series(positions, headings, np.array([False, False]), TORUS)
        assert frame['collisions'].tolist() == [1, 0]
        assert frame['cumulative_collisions'].tolist() == [1, 1]
        assert frame['mean_neighbors_llm'].isna().all()
        assert frame['mean_neighbors_rule'].tolist() == [0.0, 1.0]

    def test_heading_difference_series_rows(self):
        frame = heading_difference_series(
            {1: np.array([0.0, 90.0, 180.0]), 2: np.array([0.0, 0.0, 0.0])},
            {'hybrid_rule': [0, 1], 'hybrid_llm': [2]},
        )
        assert frame[['tick', 'group']].values.tolist() == [
            [1, 'hybrid_rule'], [1, 'hybrid_llm'], [2, 'hybrid_rule'], [2, 'hybrid_llm'],
        ]
        assert frame.iloc[1]['mean'] == pytest.approx(135.0)
        assert frame.iloc[3]['mean'] == 0.0


class TestAggregate:
    def test_two_runs(self):
        result = aggregate_runs([pd.Series([80.0], index=[100]), pd.Series([90.0], index=[100])])
        assert result.loc[100, 'mean'] == pytest.approx(85.0)
        assert result.loc[100, 'std'] == pytest.approx(5.0)

    def test_matches_reference(self):
        rng = np.random.default_rng(21)
        runs = [rng.uniform(0, 100, size=50) for _ in range(5)]
        result = aggregate_runs([pd.Series(r, index=range(1, 51)) for r in runs])
        means, stds = reference.aggregate([r.tolist() for r in runs])
        assert result['mean'].tolist() == pytest.approx(means, abs=1e-9)
        assert result['std'].tolist() == pytest.approx(stds, abs=1e-9)

    def test_mismatched_grids(self):
        with pytest.raises(InvalidArgumentError):
            aggregate_runs([pd.Series([1.0], index=[1]), pd.Series([1.0], index=[2])])
        with pytest.raises(InvalidArgumentError):
            aggregate_runs([])

    def test_long_table(self):
        frame = pd.DataFrame({'run': [1, 1, 2, 2], 'tick': [1, 2, 1, 2], 'food': [0, 2, 0, 4]})
        result = aggregate_column(frame, 'food')
        assert result['mean'].tolist() == [0.0, 3.0]
        assert result['std'].tolist() == [0.0, 1.0]
