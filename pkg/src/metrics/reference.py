"""
Brute-force versions of every statistic, used to check the vectorized ones
"""

import math
from typing import Dict, List, Sequence, Tuple

from src.core.geometry import WorldGeometry, subtract_headings


def percentile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation percentile from a sorted copy."""
    ordered = sorted(values)
    rank = (len(ordered) - 1) * q / 100.0
    lo = math.floor(rank)
    hi = math.ceil(rank)
    return ordered[lo] + (ordered[hi] - ordered[lo]) * (rank - lo)


def describe(values: Sequence[float]) -> Dict[str, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return {
        'count': n,
        'mean': mean,
        'std': math.sqrt(var),
        'min': min(values),
        'p20': percentile(values, 20),
        'p25': percentile(values, 25),
        'p50': percentile(values, 50),
        'p75': percentile(values, 75),
        'max': max(values),
    }


def heading_differences(headings: Sequence[float], members: Sequence[int]) -> Tuple[float, float]:
    values = []
    for g in members:
        for j, other in enumerate(headings):
            if j != g:
                values.append(abs(subtract_headings(other, headings[g])))
    mean = sum(values) / len(values)
    std = math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))
    return mean, std


def pairwise(
    positions: Sequence[Tuple[float, float]], headings: Sequence[float], geometry: WorldGeometry
) -> Tuple[int, List[int], float]:
    n = len(headings)
    collisions = 0
    counts = [0] * n
    distances = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            d = geometry.distance(positions[i][0], positions[i][1], positions[j][0], positions[j][1])
            if i < j:
                distances.append(d)
                if d <= 1.0:
                    collisions += 1
            if 1.0 < d <= 5.0 and abs(subtract_headings(headings[j], headings[i])) <= 15.0:
                counts[i] += 1
    mean_distance = sum(distances) / len(distances) if distances else 0.0
    return collisions, counts, mean_distance


def aggregate(series: Sequence[Sequence[float]]) -> Tuple[List[float], List[float]]:
    means, stds = [], []
    for column in zip(*series):
        total = 0.0
        for v in column:
            total += v
        mean = total / len(column)
        sq = 0.0
        for v in column:
            sq += (v - mean) ** 2
        means.append(mean)
        stds.append(math.sqrt(sq / len(column)))
    return means, stds
