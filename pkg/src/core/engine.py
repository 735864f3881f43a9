"""
Discrete-time engine shared by the ant and flocking worlds

One engine step polls every agent exactly once, in an order shuffled by the
seeded scheduling stream, applies the decoded actions sequentially and then
lets the world update its environment fields.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Protocol

import numpy as np

from src.core.rng import SeededRng
from src.utils.logger import logger


@dataclass
class Decision:
    """What a controller decided for one agent in one tick."""

    action: Any
    controller_kind: str
    raw_response: Optional[str] = None
    call_records: List[Any] = field(default_factory=list)
    degraded: bool = False
    # heading perturbation applied before movement (library-model wiggle)
    extra_turn: float = 0.0


@dataclass
class StepRecord:
    tick: int
    agent_id: int
    perception: Any
    decision: Decision
    applied: Any


class Controller(Protocol):
    kind: str
    is_remote: bool

    def decide(self, perception: Any, rng: np.random.Generator) -> Decision:
        ...


class Scenario(Protocol):
    # True: every decision sees the tick-start state; False: perceive-decide-apply per agent
    snapshot_decisions: bool
    tick: int

    def agent_ids(self) -> List[int]:
        ...

    def perceive(self, agent_id: int) -> Any:
        ...

    def apply(self, agent_id: int, decision: Decision, rng: np.random.Generator) -> Any:
        ...

    def env_update(self) -> None:
        ...


def polled_order(agent_ids: List[int], schedule: np.random.Generator) -> List[int]:
    permutation = schedule.permutation(len(agent_ids))
    return [agent_ids[i] for i in permutation]


def step_world(
    controllers: Mapping[int, Controller],
    world: Scenario,
    rng: SeededRng,
    tick: int,
    pool: Optional[ThreadPoolExecutor] = None,
) -> List[StepRecord]:
    """
    Advance the world by one tick

    Args:
        controllers: controller for every agent id
        world: scenario state, mutated in place
        rng: stream factory for this run
        tick: 1-based number of the step being executed
        pool: optional executor for concurrent remote decisions (snapshot worlds only)

    Returns:
        One StepRecord per agent, in polled order
    """
    agent_ids = world.agent_ids()
    missing = [aid for aid in agent_ids if aid not in controllers]
    if missing:
        raise ValueError(f"no controller assigned to agents {missing}")

    world.tick = tick
    order = polled_order(agent_ids, rng.world('schedule'))
    records: List[StepRecord] = []

    def _decide(aid: int, perception: Any) -> Decision:
        return controllers[aid].decide(perception, rng.stream(aid, 'policy'))

    if world.snapshot_decisions:
        perceptions = {aid: world.perceive(aid) for aid in order}
        decisions: Dict[int, Decision] = {}
        futures = {}
        for aid in order:
            if pool is not None and controllers[aid].is_remote:
                futures[aid] = pool.submit(_decide, aid, perceptions[aid])
            else:
                decisions[aid] = _decide(aid, perceptions[aid])
        for aid, future in futures.items():
            decisions[aid] = future.result()
        for aid in order:
            applied = world.apply(aid, decisions[aid], rng.stream(aid, 'action'))
            records.append(StepRecord(tick, aid, perceptions[aid], decisions[aid], applied))
    else:
        for aid in order:
            perception = world.perceive(aid)
            decision = _decide(aid, perception)
            applied = world.apply(aid, decision, rng.stream(aid, 'action'))
            records.append(StepRecord(tick, aid, perception, decision, applied))

    world.env_update()

    degraded = sum(1 for record in records if record.decision.degraded)
    if degraded:
        logger.warning(f"Tick {tick}: {degraded} agent(s) fell back to the default action")
    return records


class Engine:
    """
    Runs a world under a fixed controller assignment

    Not thread-safe; hand it between threads only between ticks.
    """

    def __init__(
        self,
        world: Scenario,
        controllers: Mapping[int, Controller],
        rng: SeededRng,
        max_workers: int = 1,
    ):
        self.world = world
        self.controllers = dict(controllers)
        self.rng = rng
        self.max_workers = max_workers
        self._pool: Optional[ThreadPoolExecutor] = None
        if max_workers > 1 and world.snapshot_decisions and any(
            c.is_remote for c in self.controllers.values()
        ):
            self._pool = ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix='llm')

    @property
    def tick(self) -> int:
        return self.world.tick

    def step(self) -> List[StepRecord]:
        return step_world(self.controllers, self.world, self.rng, self.world.tick + 1, self._pool)

    def run(self, steps: int, on_step: Optional[Callable[[int, List[StepRecord]], None]] = None) -> None:
        try:
            for _ in range(steps):
                records = self.step()
                if on_step is not None:
                    on_step(self.world.tick, records)
        finally:
            self.close()

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None
