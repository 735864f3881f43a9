"""
Foraging measurements: food collected over time, return trips and searches

All functions take the event log produced by a run: one row per successful
pick-up or drop with columns tick, agent_id, event ('pickup' | 'drop') and
patch_id.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence

import numpy as np
import pandas as pd

from src.utils.errors import InvalidArgumentError

EVENT_COLUMNS = ['tick', 'agent_id', 'event', 'patch_id']
STAT_COLUMNS = ['count', 'mean', 'std', 'min', 'p20', 'p25', 'p50', 'p75', 'max']


@dataclass(frozen=True)
class TripRecord:
    agent_id: int
    patch_id: int
    pickup_tick: int
    drop_tick: int

    @property
    def steps(self) -> int:
        return self.drop_tick - self.pickup_tick


@dataclass(frozen=True)
class SearchRecord:
    agent_id: int
    patch_id: int
    start_tick: int
    pickup_tick: int

    @property
    def steps(self) -> int:
        return self.pickup_tick - self.start_tick


def events_frame(rows: Iterable[dict]) -> pd.DataFrame:
    return pd.DataFrame(list(rows), columns=EVENT_COLUMNS)


def food_timeseries(events: pd.DataFrame, steps: int) -> pd.DataFrame:
    """Colony food after each tick 1..steps: a nondecreasing staircase."""
    drops = events.loc[events['event'] == 'drop', 'tick']
    per_tick = drops.value_counts().reindex(range(1, steps + 1), fill_value=0).sort_index()
    return pd.DataFrame({'tick': per_tick.index.astype(int), 'food': per_tick.cumsum().to_numpy()})


def _ordered(events: pd.DataFrame) -> pd.DataFrame:
    # a drop and a later pickup may share a tick for the same ant; keep log order within a tick
    return events.reset_index(drop=True).rename_axis('seq').reset_index().sort_values(['agent_id', 'tick', 'seq'])


def extract_trips(events: pd.DataFrame) -> List[TripRecord]:
    """Pair every drop with the same ant's preceding pickup."""
    trips = []
    pending: Dict[int, tuple] = {}
    for row in _ordered(events).itertuples(index=False):
        if row.event == 'pickup':
            pending[row.agent_id] = (int(row.tick), int(row.patch_id))
        elif row.event == 'drop' and row.agent_id in pending:
            pickup_tick, patch_id = pending.pop(row.agent_id)
            trips.append(TripRecord(int(row.agent_id), patch_id, pickup_tick, int(row.tick)))
    return trips


def extract_searches(events: pd.DataFrame, spawn_tick: int = 0) -> List[SearchRecord]:
    """A search runs from spawn or the ant's previous drop to its next pickup."""
    searches = []
    start: Dict[int, int] = {}
    for row in _ordered(events).itertuples(index=False):
        aid = int(row.agent_id)
        if row.event == 'pickup':
            searches.append(SearchRecord(aid, int(row.patch_id), start.get(aid, spawn_tick), int(row.tick)))
        elif row.event == 'drop':
            start[aid] = int(row.tick)
    return searches


def describe_steps(values: Sequence[float]) -> Dict[str, float]:
    """Mean, population std, min, 20/25/50/75th percentiles (linear) and max."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise InvalidArgumentError("cannot describe an empty set of steps")
    p20, p25, p50, p75 = np.percentile(arr, [20, 25, 50, 75])
    return {
        'count': int(arr.size),
        'mean': float(arr.mean()),
        'std': float(arr.std()),
        'min': float(arr.min()),
        'p20': float(p20),
        'p25': float(p25),
        'p50': float(p50),
        'p75': float(p75),
        'max': float(arr.max()),
    }


def _per_patch(records: Sequence, steps_of) -> pd.DataFrame:
    by_patch: Dict[int, List[int]] = {}
    for record in records:
        by_patch.setdefault(record.patch_id, []).append(steps_of(record))
    rows = [{'patch': patch, **describe_steps(values)} for patch, values in sorted(by_patch.items())]
    return pd.DataFrame(rows, columns=['patch'] + STAT_COLUMNS)


def trip_statistics(trips: Sequence[TripRecord]) -> pd.DataFrame:
    """Steps from pickup to drop, summarized per food patch."""
    return _per_patch(trips, lambda t: t.steps)


def search_statistics(searches: Sequence[SearchRecord]) -> pd.DataFrame:
    """Steps from leaving the nest to the next pickup, summarized per food patch."""
    return _per_patch(searches, lambda s: s.steps)
