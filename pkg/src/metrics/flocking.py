"""
Flocking measurements over bird states

Distances use the torus metric of the flock world. A collision is a pair at
distance <= 1; a flocking neighbor is a pair with 1 < d <= 5 whose headings
differ by at most 15 degrees.
"""

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from src.core.geometry import WorldGeometry

COLLISION_DISTANCE = 1.0
NEIGHBOR_DISTANCE = 5.0
NEIGHBOR_HEADING = 15.0


def heading_diff_matrix(headings: np.ndarray) -> np.ndarray:
    """|shortest signed turn| between every pair of headings, in [0, 180]."""
    h = np.asarray(headings, dtype=float)
    diff = (h[None, :] - h[:, None]) % 360.0
    return np.minimum(diff, 360.0 - diff)


def torus_distance_matrix(positions: np.ndarray, geometry: WorldGeometry) -> np.ndarray:
    pos = np.asarray(positions, dtype=float)
    delta = pos[None, :, :] - pos[:, None, :]
    if geometry.wrap:
        size = float(geometry.size)
        delta = (delta + size / 2.0) % size - size / 2.0
    return np.hypot(delta[..., 0], delta[..., 1])


def heading_differences(headings: np.ndarray, members: Sequence[int]) -> Optional[tuple]:
    """Mean and population std of |diff| between each member and every other bird."""
    members = list(members)
    if not members or len(headings) < 2:
        return None
    diff = heading_diff_matrix(headings)[members]
    mask = np.ones_like(diff, dtype=bool)
    mask[np.arange(len(members)), members] = False
    values = diff[mask]
    return float(values.mean()), float(values.std())


def heading_difference_series(
    headings_by_tick: Mapping[int, np.ndarray], groups: Mapping[str, Sequence[int]]
) -> pd.DataFrame:
    """
    One row per (tick, group): mean and std of heading differences

    Args:
        headings_by_tick: tick -> headings of the whole population, indexed by bird
        groups: group name -> indices of its birds (e.g. netlogo, hybrid_rule, hybrid_llm)
    """
    rows = []
    for tick in sorted(headings_by_tick):
        headings = headings_by_tick[tick]
        for group, members in groups.items():
            stats = heading_differences(headings, members)
            if stats is not None:
                rows.append({'tick': tick, 'group': group, 'mean': stats[0], 'std': stats[1]})
    return pd.DataFrame(rows, columns=['tick', 'group', 'mean', 'std'])


@dataclass(frozen=True)
class PairwiseStats:
    collisions: int
    neighbor_counts: np.ndarray
    mean_distance: float


def pairwise_stats(positions: np.ndarray, headings: np.ndarray, geometry: WorldGeometry) -> PairwiseStats:
    n = len(headings)
    dist = torus_distance_matrix(positions, geometry)
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    collisions = int(np.count_nonzero((dist <= COLLISION_DISTANCE) & upper))

    close = (dist > COLLISION_DISTANCE) & (dist <= NEIGHBOR_DISTANCE)
    aligned = heading_diff_matrix(headings) <= NEIGHBOR_HEADING
    neighbors = close & aligned
    np.fill_diagonal(neighbors, False)

    mean_distance = float(dist[upper].mean()) if n > 1 else 0.0
    return PairwiseStats(collisions, neighbors.sum(axis=1), mean_distance)


def _group_mean(counts: np.ndarray, mask: np.ndarray) -> float:
    return float(counts[mask].mean()) if mask.any() else float('nan')


def pairwise_series(
    positions_by_tick: Mapping[int, np.ndarray],
    headings_by_tick: Mapping[int, np.ndarray],
    llm_mask: np.ndarray,
    geometry: WorldGeometry,
) -> pd.DataFrame:
    """Per-tick collisions (and their running total), mean neighbor counts per group and mean distance."""
    llm_mask = np.asarray(llm_mask, dtype=bool)
    rows = []
    total = 0
    for tick in sorted(positions_by_tick):
        stats = pairwise_stats(positions_by_tick[tick], headings_by_tick[tick], geometry)
        total += stats.collisions
        rows.append({
            'tick': tick,
            'collisions': stats.collisions,
            'cumulative_collisions': total,
            'mean_neighbors_llm': _group_mean(stats.neighbor_counts, llm_mask),
            'mean_neighbors_rule': _group_mean(stats.neighbor_counts, ~llm_mask),
            'mean_distance': stats.mean_distance,
        })
    return pd.DataFrame(rows, columns=[
        'tick', 'collisions', 'cumulative_collisions', 'mean_neighbors_llm', 'mean_neighbors_rule', 'mean_distance',
    ])
