"""
Unit tests for compass arithmetic and world geometry
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.geometry import (
    WorldGeometry,
    bearing,
    circular_mean,
    heading_to_vector,
    normalize_heading,
    patch_coord,
    subtract_headings,
    turn_at_most,
    turn_away,
)
from src.utils.errors import InvalidArgumentError

headings = st.floats(min_value=0, max_value=360, exclude_max=True, allow_nan=False)


class TestNormalizeHeading:
    @pytest.mark.parametrize('raw, expected', [(360.0, 0.0), (-10.0, 350.0), (146.0, 146.0), (725.0, 5.0)])
    def test_examples(self, raw, expected):
        assert normalize_heading(raw) == pytest.approx(expected)

    @pytest.mark.parametrize('bad', [math.nan, math.inf, -math.inf])
    def test_non_finite_rejected(self, bad):
        with pytest.raises(InvalidArgumentError):
            normalize_heading(bad)

    def test_tiny_negative_does_not_yield_360(self):
        assert 0.0 <= normalize_heading(-1e-17) < 360.0


class TestSubtractHeadings:
    @pytest.mark.parametrize('target, current, expected', [(248, 138, 110), (10, 350, 20), (90, 90, 0), (350, 10, -20)])
    def test_examples(self, target, current, expected):
        assert subtract_headings(target, current) == pytest.approx(expected)

    def test_antipodal_is_positive_180(self):
        assert subtract_headings(180, 0) == 180
        assert subtract_headings(0, 180) == 180


class TestTurnAtMost:
    def test_worked_align_then_cohere_chain(self):
        aligned = turn_at_most(138, 248, 5)
        assert aligned == pytest.approx(143)
        assert turn_at_most(aligned, 248, 3) == pytest.approx(146)

    def test_target_within_cap(self):
        assert turn_at_most(100, 102, 5) == pytest.approx(102)

    def test_counterclockwise_across_north(self):
        assert turn_at_most(5, 300, 10) == pytest.approx(355)

    def test_negative_cap_rejected(self):
        with pytest.raises(InvalidArgumentError):
            turn_at_most(0, 10, -1)

    def test_turn_away_increases_separation(self):
        # neighbor heading 90, we head 80: turn away means counterclockwise
        assert turn_away(80, 90, 1.5) == pytest.approx(78.5)
        assert turn_away(100, 90, 1.5) == pytest.approx(101.5)


@settings(max_examples=500, deadline=None)
@given(a=headings, b=headings)
def test_subtract_then_add_recovers_target(a, b):
    diff = subtract_headings(a, b)
    assert -180 < diff <= 180
    assert abs(subtract_headings(normalize_heading(b + diff), a)) < 1e-9


@settings(max_examples=500, deadline=None)
@given(current=headings, target=headings, cap=st.floats(min_value=0, max_value=360, allow_nan=False))
def test_turn_at_most_never_overshoots(current, target, cap):
    result = turn_at_most(current, target, cap)
    assert 0 <= result < 360
    assert abs(subtract_headings(target, result)) <= abs(subtract_headings(target, current)) + 1e-9
    assert abs(subtract_headings(result, current)) <= cap + 1e-9


def test_angle_algebra_randomized_bulk():
    rng = np.random.default_rng(2024)
    a = rng.uniform(0, 360, 100_000)
    b = rng.uniform(0, 360, 100_000)
    caps = rng.uniform(0, 30, 100_000)
    for x, y, cap in zip(a.tolist(), b.tolist(), caps.tolist()):
        d = subtract_headings(x, y)
        assert -180 < d <= 180
        assert abs(subtract_headings(normalize_heading(y + d), x)) < 1e-9
        turned = turn_at_most(y, x, cap)
        assert abs(subtract_headings(x, turned)) <= abs(d) + 1e-9


class TestVectors:
    def test_compass_vectors(self):
        assert heading_to_vector(0) == pytest.approx((0.0, 1.0))
        assert heading_to_vector(90) == pytest.approx((1.0, 0.0), abs=1e-12)

    def test_bearing_of_worked_example_neighbor(self):
        assert bearing(0.53, -3.69) == pytest.approx(171.826, abs=1e-3)

    def test_circular_mean_across_seam(self):
        assert subtract_headings(circular_mean([350, 10]), 0) == pytest.approx(0, abs=1e-9)

    def test_circular_mean_cancelling(self):
        assert circular_mean([0, 180]) is None
        assert circular_mean([]) is None


class TestWorldGeometry:
    def test_size_and_extent(self):
        geometry = WorldGeometry(35)
        assert geometry.size == 71
        assert geometry.contains(-35.5, 35.49)
        assert not geometry.contains(35.5, 0)

    def test_patch_of_point(self):
        assert patch_coord(0.49) == 0
        assert patch_coord(0.5) == 1
        assert patch_coord(-0.5) == 0
        assert patch_coord(-0.51) == -1

    def test_bounded_world_rejects_outside(self):
        geometry = WorldGeometry(35, wrap=False)
        assert geometry.resolve(0, 36) is None
        assert geometry.index_of(0, 0) == (35, 35)

    def test_torus_wraps_north_edge(self):
        geometry = WorldGeometry(35, wrap=True)
        x, y = geometry.resolve(*geometry.ahead(0.0, 35.4, 0.0))
        assert x == pytest.approx(0.0)
        assert y == pytest.approx(-34.6)

    def test_torus_displacement_takes_short_way(self):
        geometry = WorldGeometry(35, wrap=True)
        dx, dy = geometry.displacement(-34.9, 0.0, 34.9, 0.0)
        assert dx == pytest.approx(-1.2)
        assert dy == 0
        assert geometry.distance(-34.9, 0.0, 34.9, 0.0) == pytest.approx(1.2)
