"""
Summary tables of a finished run directory, laid out like the published result tables
"""

from pathlib import Path
from typing import Tuple

import numpy as np
import pandas as pd
from tabulate import tabulate

from src.metrics.foraging import SearchRecord, TripRecord, describe_steps, search_statistics, trip_statistics
from src.runner.outputs import read_manifest, write_csv
from src.utils.errors import NoRunsFoundError

STEP_COLUMNS = ['mean', 'std', 'min', 'p20', 'p50', 'p75', 'max']
STEP_HEADERS = ['Mean', 'Std', 'Min', '20%', '50%', '75%', 'Max']


def _steps_table(stats: pd.DataFrame, table: str) -> pd.DataFrame:
    rows = [
        {'table': table, 'key': f'patch {int(row.patch)}', **{c: getattr(row, c) for c in STEP_COLUMNS}}
        for row in stats.itertuples(index=False)
    ]
    return pd.DataFrame(rows, columns=['table', 'key'] + STEP_COLUMNS)


def summarize_ants(out_dir: Path) -> pd.DataFrame:
    trips = [
        TripRecord(int(r.agent), int(r.patch), int(r.pickup), int(r.drop))
        for r in pd.read_csv(out_dir / 'trips.csv').itertuples(index=False)
    ]
    searches = [
        SearchRecord(int(r.agent), int(r.patch), int(r.start), int(r.pickup))
        for r in pd.read_csv(out_dir / 'searches.csv').itertuples(index=False)
    ]
    food = pd.read_csv(out_dir / 'food.csv')
    parts = [
        _steps_table(trip_statistics(trips), 'steps_to_return'),
        _steps_table(search_statistics(searches), 'steps_to_find'),
    ]
    if not food.empty:
        finals = food.groupby('run')['food'].last().to_numpy()
        stats = describe_steps(finals)
        parts.append(pd.DataFrame([{'table': 'final_food', 'key': 'all runs', **{c: stats[c] for c in STEP_COLUMNS}}]))
    return pd.concat(parts, ignore_index=True)


def _spread(values: np.ndarray) -> dict:
    values = values[~np.isnan(values)]
    if values.size == 0:
        return {'mean': np.nan, 'median': np.nan, 'std': np.nan}
    return {'mean': float(values.mean()), 'median': float(np.median(values)), 'std': float(values.std())}


def summarize_flocking(out_dir: Path) -> pd.DataFrame:
    pairwise = pd.read_csv(out_dir / 'pairwise.csv')
    rows = [
        {'table': 'neighbors', 'key': 'llm birds', **_spread(pairwise['mean_neighbors_llm'].to_numpy(dtype=float))},
        {'table': 'neighbors', 'key': 'rule birds', **_spread(pairwise['mean_neighbors_rule'].to_numpy(dtype=float))},
        {'table': 'collisions', 'key': 'per tick', **_spread(pairwise['collisions'].to_numpy(dtype=float))},
        {'table': 'distance', 'key': 'mean pairwise', **_spread(pairwise['mean_distance'].to_numpy(dtype=float))},
    ]
    return pd.DataFrame(rows, columns=['table', 'key', 'mean', 'median', 'std'])


def summarize(output_dir: Path) -> Tuple[str, Path]:
    """
    Build the summary table of a run directory and write summary.csv next to it

    Raises:
        NoRunsFoundError: no manifest, or no seed completed
    """
    out_dir = Path(output_dir)
    manifest = read_manifest(out_dir)
    if manifest is None:
        raise NoRunsFoundError(f"no runs found in {out_dir}")
    completed = [s for s, entry in manifest.get('seeds', {}).items() if entry.get('status') == 'completed']
    if not completed:
        raise NoRunsFoundError(f"no completed runs in {out_dir}")

    if manifest['scenario'] == 'ants':
        table = summarize_ants(out_dir)
        headers = ['Table', 'Key'] + STEP_HEADERS
    else:
        table = summarize_flocking(out_dir)
        headers = ['Table', 'Key', 'Mean', 'Median', 'Std']

    path = write_csv(table, out_dir / 'summary.csv')
    title = f"{manifest.get('name', out_dir.name)}: {len(completed)} run(s)"
    text = title + '\n' + tabulate(table.to_numpy().tolist(), headers=headers, floatfmt='.2f', tablefmt='github')
    return text, path
