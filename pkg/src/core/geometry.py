"""
Compass-angle arithmetic and world geometry shared by both scenarios

Headings follow the compass convention: 0 = north, 90 = east, increasing
clockwise. Positions are (x east, y north) in patch units.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from src.utils.errors import InvalidArgumentError


def normalize_heading(h: float) -> float:
    """Fold any finite angle into [0, 360)."""
    if not math.isfinite(h):
        raise InvalidArgumentError(f"heading must be finite, got {h!r}")
    result = math.fmod(h, 360.0)
    if result < 0:
        result += 360.0
    # -1e-17 + 360 rounds to 360.0
    if result >= 360.0:
        result = 0.0
    return result + 0.0


def subtract_headings(target: float, current: float) -> float:
    """
    Signed shortest turn from current to target, in (-180, 180]

    Positive means clockwise (turn right).
    """
    diff = (target - current) % 360.0
    if diff > 180.0:
        diff -= 360.0
    return diff


def turn_at_most(current: float, target: float, max_turn: float) -> float:
    """Turn from current toward target along the shortest arc, by no more than max_turn."""
    if not max_turn >= 0:
        raise InvalidArgumentError(f"max_turn must be non-negative, got {max_turn!r}")
    turn = subtract_headings(target, current)
    if abs(turn) <= max_turn:
        return normalize_heading(current + turn)
    return normalize_heading(current + math.copysign(max_turn, turn))


def turn_away(current: float, away_from: float, max_turn: float) -> float:
    """Turn so as to increase the angle to away_from, by no more than max_turn."""
    turn = subtract_headings(current, away_from)
    return turn_at_most(current, normalize_heading(current + turn), max_turn)


def heading_to_vector(heading: float) -> Tuple[float, float]:
    """Unit vector (dx, dy) for a compass heading."""
    rad = math.radians(heading)
    return math.sin(rad), math.cos(rad)


def bearing(dx: float, dy: float) -> float:
    """Compass heading pointing along the displacement (dx, dy)."""
    return normalize_heading(math.degrees(math.atan2(dx, dy)))


def circular_mean(headings: Iterable[float]) -> Optional[float]:
    """
    Mean direction by vector averaging

    Returns None when the unit vectors cancel out (no defined direction).
    """
    sum_x = 0.0
    sum_y = 0.0
    for h in headings:
        dx, dy = heading_to_vector(h)
        sum_x += dx
        sum_y += dy
    if math.hypot(sum_x, sum_y) < 1e-12:
        return None
    return bearing(sum_x, sum_y)


def patch_coord(v: float) -> int:
    """Integer patch coordinate containing the continuous coordinate v."""
    return math.floor(v + 0.5)


@dataclass(frozen=True)
class WorldGeometry:
    """
    Square world of (2 * half_extent + 1) patches per side

    Continuous coordinates span [-half_extent - 0.5, half_extent + 0.5) on each
    axis. A wrapping world is a torus; a bounded one has hard edges.
    """

    half_extent: int = 35
    wrap: bool = False

    @property
    def size(self) -> int:
        return 2 * self.half_extent + 1

    @property
    def min_coord(self) -> float:
        return -self.half_extent - 0.5

    @property
    def max_coord(self) -> float:
        return self.half_extent + 0.5

    def contains(self, x: float, y: float) -> bool:
        return self.min_coord <= x < self.max_coord and self.min_coord <= y < self.max_coord

    def wrap_coord(self, v: float) -> float:
        size = self.size
        wrapped = (v - self.min_coord) % size + self.min_coord
        if wrapped >= self.max_coord:
            wrapped = self.min_coord
        return wrapped

    def resolve(self, x: float, y: float) -> Optional[Tuple[float, float]]:
        """
        Map a point into the world

        Wrapping worlds fold the point back onto the torus; bounded worlds
        return None for points past the edge.
        """
        if self.wrap:
            return self.wrap_coord(x), self.wrap_coord(y)
        if self.contains(x, y):
            return x, y
        return None

    def patch_of(self, x: float, y: float) -> Optional[Tuple[int, int]]:
        point = self.resolve(x, y)
        if point is None:
            return None
        return patch_coord(point[0]), patch_coord(point[1])

    def index_of(self, x: float, y: float) -> Optional[Tuple[int, int]]:
        """Array index (column, row) of the patch under (x, y)."""
        patch = self.patch_of(x, y)
        if patch is None:
            return None
        return patch[0] + self.half_extent, patch[1] + self.half_extent

    def displacement(self, x0: float, y0: float, x1: float, y1: float) -> Tuple[float, float]:
        """Vector from (x0, y0) to (x1, y1); the short way round on a torus."""
        dx = x1 - x0
        dy = y1 - y0
        if self.wrap:
            half = self.size / 2.0
            dx = (dx + half) % self.size - half
            dy = (dy + half) % self.size - half
        return dx, dy

    def distance(self, x0: float, y0: float, x1: float, y1: float) -> float:
        dx, dy = self.displacement(x0, y0, x1, y1)
        return math.hypot(dx, dy)

    def ahead(self, x: float, y: float, heading: float, distance: float = 1.0) -> Tuple[float, float]:
        """Point at the given distance along heading, before wrapping or bounds checks."""
        dx, dy = heading_to_vector(heading)
        return x + dx * distance, y + dy * distance
