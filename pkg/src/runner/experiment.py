"""
Experiment orchestration: one engine run per seed, then merged metrics and a manifest
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import requests
from tqdm import tqdm

from src import __version__
from src.ants.world import AntWorld
from src.core.engine import Engine, StepRecord
from src.core.rng import SeededRng
from src.flocking.world import FlockWorld
from src.llm.adapters import AntAdapter, FlockAdapter
from src.llm.controllers import assign_kinds, build_controllers
from src.llm.registry import get_template, template_hashes
from src.metrics.flocking import heading_difference_series, pairwise_series
from src.metrics.foraging import events_frame, extract_searches, extract_trips, food_timeseries
from src.runner.outputs import CSV_COLUMNS, JsonlWriter, write_csv, write_manifest, write_metric
from src.runner.run_config import RunConfig
from src.utils.config import Config
from src.utils.errors import InvariantViolationError
from src.utils.logger import log_error, log_metric, log_start, log_success, logger

SCENARIO_METRICS = {
    'ants': ['food', 'trips', 'searches'],
    'flocking': ['headings', 'pairwise'],
}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec='seconds')


@dataclass
class SeedResult:
    seed: int
    status: str = 'completed'
    error: Optional[str] = None
    degraded_ticks: int = 0
    degraded_decisions: int = 0
    calls: int = 0
    flagged_calls: int = 0
    frames: Dict[str, pd.DataFrame] = field(default_factory=dict)
    outputs: Dict[str, str] = field(default_factory=dict)

    @property
    def completed(self) -> bool:
        return self.status == 'completed'

    def manifest_entry(self) -> Dict[str, Any]:
        return {
            'status': self.status,
            'error': self.error,
            'degraded_ticks': self.degraded_ticks,
            'degraded_decisions': self.degraded_decisions,
            'calls': self.calls,
            'flagged_calls': self.flagged_calls,
            'outputs': self.outputs,
        }


@dataclass
class ExperimentResult:
    out_dir: Path
    manifest: Dict[str, Any]
    seeds: List[SeedResult]

    @property
    def failed(self) -> bool:
        return any(not s.completed for s in self.seeds)

    @property
    def degraded(self) -> bool:
        return any(s.degraded_decisions for s in self.seeds)


class _Recorder:
    """Writes per-agent and per-call logs in polled order and keeps what the metrics need."""

    def __init__(self, seed_dir: Path):
        self.agents = JsonlWriter(seed_dir / 'agents.jsonl')
        self.calls = JsonlWriter(seed_dir / 'calls.jsonl')
        self.degraded_ticks = 0
        self.degraded_decisions = 0
        self.flagged_calls = 0

    def _common(self, tick: int, record: StepRecord) -> Dict[str, Any]:
        entry = {
            'tick': tick,
            'agent_id': record.agent_id,
            'controller_kind': record.decision.controller_kind,
            'degraded': record.decision.degraded,
        }
        if record.decision.raw_response is not None:
            entry['raw_response'] = record.decision.raw_response
        return entry

    def on_step(self, tick: int, records: List[StepRecord]) -> None:
        degraded = 0
        for record in records:
            self.agents.write(self.agent_entry(tick, record))
            for call in record.decision.call_records:
                self.calls.write(call.model_dump(mode='json'))
                self.flagged_calls += int(call.flagged)
            degraded += int(record.decision.degraded)
        if degraded:
            self.degraded_ticks += 1
            self.degraded_decisions += degraded

    def agent_entry(self, tick: int, record: StepRecord) -> Dict[str, Any]:
        raise NotImplementedError

    def close(self) -> None:
        self.agents.close()
        self.calls.close()


class AntRecorder(_Recorder):
    def __init__(self, seed_dir: Path, world: AntWorld):
        super().__init__(seed_dir)
        self.world = world
        self.events: List[dict] = []

    def agent_entry(self, tick: int, record: StepRecord) -> Dict[str, Any]:
        entry = self._common(tick, record)
        entry['perception'] = record.perception.log_dict()
        entry['action'] = record.decision.action.to_prompt_dict()
        entry['applied_flags'] = record.applied.to_dict()
        if record.applied.picked_up:
            self.events.append({'tick': tick, 'agent_id': record.agent_id, 'event': 'pickup',
                                'patch_id': record.applied.patch_id})
        if record.applied.dropped_food:
            self.events.append({'tick': tick, 'agent_id': record.agent_id, 'event': 'drop',
                                'patch_id': record.applied.patch_id})
        return entry

    def on_step(self, tick: int, records: List[StepRecord]) -> None:
        super().on_step(tick, records)
        accounting = self.world.food_accounting()
        if accounting['total'] != accounting['initial']:
            raise InvariantViolationError(f"tick {tick}: food not conserved: {accounting}", tick)

    def frames(self, seed: int, steps: int) -> Dict[str, pd.DataFrame]:
        events = events_frame(self.events)
        food = food_timeseries(events, steps)
        food.insert(1, 'run', seed)
        trips = pd.DataFrame(
            [{'run': seed, 'agent': t.agent_id, 'patch': t.patch_id, 'pickup': t.pickup_tick, 'drop': t.drop_tick}
             for t in extract_trips(events)],
            columns=CSV_COLUMNS['trips'],
        )
        searches = pd.DataFrame(
            [{'run': seed, 'agent': s.agent_id, 'patch': s.patch_id, 'start': s.start_tick, 'pickup': s.pickup_tick}
             for s in extract_searches(events)],
            columns=CSV_COLUMNS['searches'],
        )
        return {'food': food, 'trips': trips, 'searches': searches}


class FlockRecorder(_Recorder):
    def __init__(self, seed_dir: Path, world: FlockWorld):
        super().__init__(seed_dir)
        self.world = world
        self.positions: Dict[int, np.ndarray] = {}
        self.headings: Dict[int, np.ndarray] = {}
        self.rows: List[dict] = []

    def agent_entry(self, tick: int, record: StepRecord) -> Dict[str, Any]:
        entry = self._common(tick, record)
        entry.update(record.perception.log_dict())
        entry['new_heading'] = record.applied['new_heading']
        return entry

    def on_step(self, tick: int, records: List[StepRecord]) -> None:
        super().on_step(tick, records)
        self.positions[tick] = self.world.positions()
        self.headings[tick] = self.world.headings()
        for bird in self.world.birds.values():
            self.rows.append({'tick': tick, 'id': bird.id, 'x': bird.x, 'y': bird.y,
                              'heading': bird.heading, 'is_llm': bird.is_llm})

    def frames(self, seed: int, steps: int) -> Dict[str, pd.DataFrame]:
        ids = self.world.agent_ids()
        llm_mask = np.array([self.world.birds[i].is_llm for i in ids], dtype=bool)
        if llm_mask.any():
            groups = {
                'hybrid_rule': [k for k, is_llm in enumerate(llm_mask) if not is_llm],
                'hybrid_llm': [k for k, is_llm in enumerate(llm_mask) if is_llm],
            }
        else:
            groups = {'netlogo': list(range(len(ids)))}
        headings = heading_difference_series(self.headings, groups)
        headings.insert(1, 'run', seed)
        pairwise = pairwise_series(self.positions, self.headings, llm_mask, self.world.geometry)
        pairwise.insert(1, 'run', seed)
        return {'headings': headings, 'pairwise': pairwise}


def build_world(config: RunConfig, rng: SeededRng, llm_ids: List[int]):
    if config.scenario == 'ants':
        return AntWorld.create(config.ant_params, config.population, rng), AntAdapter(config.ant_params)
    world = FlockWorld.create(config.flock_params, config.population, rng, llm_ids=llm_ids)
    return world, FlockAdapter()


def run_seed(
    config: RunConfig,
    seed: int,
    out_dir: Path,
    progress: bool = False,
    session: Optional[requests.Session] = None,
) -> SeedResult:
    """Run one seed to completion; any exception marks the seed failed instead of propagating."""
    result = SeedResult(seed=seed)
    seed_dir = Path(out_dir) / f'seed_{seed}'
    recorder = None
    log_start(f"{config.name} seed {seed}")
    try:
        rng = SeededRng(seed)
        kinds = assign_kinds([(entry.kind, entry.count) for entry in config.controller_mix])
        llm_ids = [aid for aid, kind in kinds.items() if kind.uses_prompts]
        world, adapter = build_world(config, rng, llm_ids)
        template = get_template(config.prompt_template, config.scenario)
        controllers = build_controllers(kinds, adapter, template, config.llm, session=session)

        seed_dir.mkdir(parents=True, exist_ok=True)
        recorder = AntRecorder(seed_dir, world) if config.scenario == 'ants' else FlockRecorder(seed_dir, world)
        engine = Engine(world, controllers, rng, max_workers=config.llm_workers)

        with tqdm(total=config.steps, desc=f'seed {seed}', unit='tick', disable=not progress, leave=False) as bar:
            def _on_step(tick: int, records: List[StepRecord]) -> None:
                recorder.on_step(tick, records)
                bar.update(1)

            engine.run(config.steps, on_step=_on_step)

        result.frames = recorder.frames(seed, config.steps)
        result.degraded_ticks = recorder.degraded_ticks
        result.degraded_decisions = recorder.degraded_decisions
        result.calls = recorder.calls.count
        result.flagged_calls = recorder.flagged_calls
        result.outputs = {
            'agents': str(recorder.agents.path.relative_to(out_dir)),
            'calls': str(recorder.calls.path.relative_to(out_dir)),
        }
        if isinstance(recorder, FlockRecorder):
            positions = write_csv(pd.DataFrame(recorder.rows), seed_dir / 'positions.csv', CSV_COLUMNS['positions'])
            result.outputs['positions'] = str(positions.relative_to(out_dir))

        if result.degraded_decisions:
            logger.warning(
                f"Seed {seed}: {result.degraded_decisions} fallback decision(s) over {result.degraded_ticks} tick(s)"
            )
        log_success(f"{config.name} seed {seed}", f"{config.steps} ticks")
    except Exception as e:
        log_error(f"{config.name} seed {seed}", e)
        result.status = 'failed'
        result.error = f"{type(e).__name__}: {e}"
    finally:
        if recorder is not None:
            recorder.close()
    return result


def _merge(results: List[SeedResult], name: str) -> pd.DataFrame:
    frames = [r.frames[name] for r in results if r.completed and name in r.frames]
    if not frames:
        return pd.DataFrame(columns=CSV_COLUMNS[name])
    return pd.concat(frames, ignore_index=True)


def run_experiment(
    config: RunConfig,
    out_dir: Path,
    workers: int = 1,
    progress: bool = True,
    session: Optional[requests.Session] = None,
) -> ExperimentResult:
    """
    Run every seed of the configuration and write all outputs under out_dir

    The manifest is written before any simulation output and rewritten at the
    end with per-seed status, output paths and degradation counts.

    Raises:
        ConfigurationError: remote controllers without a resolvable API key
    """
    out_dir = Path(out_dir)
    if config.uses_remote:
        Config.api_key(config.llm.api_key_env)

    out_dir.mkdir(parents=True, exist_ok=True)
    manifest: Dict[str, Any] = {
        'name': config.name,
        'scenario': config.scenario,
        'config': config.model_dump(mode='json'),
        'config_digest': config.digest(),
        'code_version': __version__,
        'template': config.prompt_template,
        'template_hashes': template_hashes(),
        'started_at': _now(),
        'finished_at': None,
        'status': 'running',
        'seeds': {str(seed): {'status': 'pending'} for seed in config.seeds},
    }
    write_manifest(manifest, out_dir)
    log_start(f"experiment {config.name} ({len(config.seeds)} seed(s), {config.steps} steps)")

    if workers > 1 and len(config.seeds) > 1:
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix='seed') as pool:
            futures = [pool.submit(run_seed, config, seed, out_dir, False, session) for seed in config.seeds]
            results = [future.result() for future in futures]
    else:
        results = [run_seed(config, seed, out_dir, progress, session) for seed in config.seeds]

    outputs = []
    for name in SCENARIO_METRICS[config.scenario]:
        outputs.append(write_metric(_merge(results, name), out_dir, name).name)

    experiment = ExperimentResult(out_dir, manifest, results)
    manifest.update({
        'finished_at': _now(),
        'status': 'failed' if experiment.failed else ('degraded' if experiment.degraded else 'completed'),
        'degraded': experiment.degraded,
        'outputs': outputs,
        'seeds': {str(r.seed): r.manifest_entry() for r in results},
    })
    write_manifest(manifest, out_dir)

    if config.scenario == 'ants':
        food = _merge(results, 'food')
        if not food.empty:
            finals = food.groupby('run')['food'].last()
            log_metric('final_food_mean', float(finals.mean()))
    log_success(f"experiment {config.name}", f"outputs in {out_dir}")
    return experiment
