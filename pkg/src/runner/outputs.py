"""
Output files of a run: per-seed JSONL logs, metric CSVs and the manifest
"""

import json
import threading
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import pandas as pd

CSV_COLUMNS = {
    'food': ['tick', 'run', 'food'],
    'trips': ['run', 'agent', 'patch', 'pickup', 'drop'],
    'searches': ['run', 'agent', 'patch', 'start', 'pickup'],
    'headings': ['tick', 'run', 'group', 'mean', 'std'],
    'pairwise': [
        'tick', 'run', 'collisions', 'cumulative_collisions',
        'mean_neighbors_llm', 'mean_neighbors_rule', 'mean_distance',
    ],
    'positions': ['tick', 'id', 'x', 'y', 'heading', 'is_llm'],
}

MANIFEST_NAME = 'manifest.json'


def write_csv(frame: pd.DataFrame, path: Path, columns: Optional[Iterable[str]] = None) -> Path:
    """Fixed column order, floats at 6 decimals, LF line endings."""
    if columns is not None:
        frame = frame.reindex(columns=list(columns))
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format='%.6f', lineterminator='\n')
    return path


def write_metric(frame: pd.DataFrame, out_dir: Path, name: str) -> Path:
    return write_csv(frame, Path(out_dir) / f'{name}.csv', CSV_COLUMNS[name])


class JsonlWriter:
    """Append-only JSON lines file; writes are serialized."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._file = open(self.path, 'w', encoding='utf-8', newline='\n')
        self._lock = threading.Lock()
        self.count = 0

    def write(self, record: Dict[str, Any]) -> None:
        line = json.dumps(record, sort_keys=True, ensure_ascii=False)
        with self._lock:
            self._file.write(line + '\n')
            self.count += 1

    def close(self) -> None:
        if not self._file.closed:
            self._file.close()

    def __enter__(self) -> 'JsonlWriter':
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def read_jsonl(path: Path):
    with open(path, encoding='utf-8') as f:
        return [json.loads(line) for line in f if line.strip()]


def write_manifest(manifest: Dict[str, Any], out_dir: Path) -> Path:
    path = Path(out_dir) / MANIFEST_NAME
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + '\n', encoding='utf-8')
    return path


def read_manifest(out_dir: Path) -> Optional[Dict[str, Any]]:
    path = Path(out_dir) / MANIFEST_NAME
    if not path.is_file():
        return None
    return json.loads(path.read_text(encoding='utf-8'))
