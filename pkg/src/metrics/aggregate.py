"""
Across-seed aggregation: per-tick mean and population std envelopes
"""

from typing import Sequence

import numpy as np
import pandas as pd

from src.utils.errors import InvalidArgumentError


def aggregate_runs(series: Sequence[pd.Series]) -> pd.DataFrame:
    """
    Mean and population std across runs, tick by tick

    Args:
        series: one Series per run, indexed by tick; tick grids must match

    Returns:
        DataFrame indexed by tick with columns mean, std
    """
    if not series:
        raise InvalidArgumentError("aggregate_runs needs at least one run")
    index = series[0].index
    for s in series[1:]:
        if not s.index.equals(index):
            raise InvalidArgumentError("runs do not share the same tick grid")
    stacked = np.vstack([s.to_numpy(dtype=float) for s in series])
    return pd.DataFrame({'mean': stacked.mean(axis=0), 'std': stacked.std(axis=0)}, index=index)


def aggregate_column(frame: pd.DataFrame, value: str, by: str = 'run') -> pd.DataFrame:
    """aggregate_runs over a long table with a run column."""
    series = [group.set_index('tick')[value] for _, group in frame.groupby(by, sort=True)]
    return aggregate_runs(series)
