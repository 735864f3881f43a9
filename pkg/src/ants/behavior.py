"""
Ant sensing, action application and the two ant decision procedures

- rule-based: the library foraging model expressed in the five-key action
  vocabulary (plus its wiggle and about-face as an engine-side extra turn)
- decision table: the rules of the deployed LLM prompt, applied to the
  categorical perception an LLM ant is shown
"""

from dataclasses import asdict, dataclass, field
from typing import TYPE_CHECKING, List, Optional, Tuple

import numpy as np

from src.ants.actions import (
    FALLBACK_ACTION,
    IDLE_ACTION,
    AntAction,
    AntPerception,
    Direction,
    Rotate,
    direction_to_rotate,
)
from src.core.geometry import normalize_heading
from src.utils.logger import logger

if TYPE_CHECKING:
    from src.ants.world import AntParams, AntState, AntWorld

SENSOR_ANGLES = (-45.0, 0.0, 45.0)  # left, front, right


@dataclass(frozen=True)
class SensorTriple:
    left: float
    front: float
    right: float


@dataclass(frozen=True)
class AntSnapshot:
    """Everything one ant senses this tick: numeric readings and the categorical perception."""

    agent_id: int
    tick: int
    perception: AntPerception
    pheromone: SensorTriple
    nest_scent: SensorTriple
    pheromone_here: float

    def log_dict(self) -> dict:
        return self.perception.model_dump(mode='json')


@dataclass
class AppliedFlags:
    picked_up: bool = False
    dropped_food: bool = False
    dropped_pheromone: bool = False
    rotation: Optional[str] = None
    moved: bool = False
    bounced: bool = False
    patch_id: Optional[int] = None
    noops: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def _strongest(readings: SensorTriple) -> Direction:
    """Direction of the largest reading; ties go front, then left, then right."""
    best, direction = readings.front, Direction.FRONT
    if readings.left > best:
        best, direction = readings.left, Direction.LEFT
    if readings.right > best:
        direction = Direction.RIGHT
    return direction


def _read(world: 'AntWorld', ant: 'AntState', values: np.ndarray) -> SensorTriple:
    readings = []
    for angle in SENSOR_ANGLES:
        x, y = world.geometry.ahead(ant.x, ant.y, ant.heading + angle, 1.0)
        idx = world.index(x, y)
        readings.append(0.0 if idx is None else float(values[idx]))
    return SensorTriple(*readings)


def sense_snapshot(world: 'AntWorld', ant: 'AntState') -> AntSnapshot:
    """Take the three forward sensor readings and derive the categorical perception."""
    here = world.index(ant.x, ant.y)
    pheromone = _read(world, ant, world.pheromone)
    nest_scent = _read(world, ant, world.nest_scent)

    floor = world.params.sensing_floor
    if max(pheromone.left, pheromone.front, pheromone.right) < floor:
        pheromone_dir = Direction.NONE
    else:
        pheromone_dir = _strongest(pheromone)

    perception = AntPerception(
        highest_pheromone_dir=pheromone_dir,
        nest_presence=bool(world.nest[here]),
        stronger_nest_scent_dir=_strongest(nest_scent),
        food_here=int(world.food[here]),
        carrying=ant.carrying,
    )
    return AntSnapshot(
        agent_id=ant.id,
        tick=world.tick,
        perception=perception,
        pheromone=pheromone,
        nest_scent=nest_scent,
        pheromone_here=float(world.pheromone[here]),
    )


def sense_ant(world: 'AntWorld', ant: 'AntState') -> AntPerception:
    return sense_snapshot(world, ant).perception


def apply_ant_action(
    world: 'AntWorld',
    ant: 'AntState',
    action: AntAction,
    rng: np.random.Generator,
    extra_turn: float = 0.0,
) -> AppliedFlags:
    """
    Execute one action in the fixed order: pick up, drop food, pheromone, rotate, move

    Infeasible sub-actions are skipped and listed in the returned flags.
    """
    params = world.params
    flags = AppliedFlags()
    here = world.index(ant.x, ant.y)

    if action.pick_up_food:
        if not ant.carrying and world.food[here] > 0:
            world.food[here] -= 1
            ant.carrying = True
            ant.picked_from_patch = int(world.food_source[here]) or None
            flags.picked_up = True
            flags.patch_id = ant.picked_from_patch
        else:
            flags.noops.append('pick-up-food')

    if action.drop_food:
        if ant.carrying and world.nest[here]:
            world.colony_food += 1
            flags.dropped_food = True
            flags.patch_id = ant.picked_from_patch
            ant.carrying = False
            ant.picked_from_patch = None
            ant.heading = normalize_heading(ant.heading + 180.0)
        else:
            flags.noops.append('drop-food')

    if action.drop_pheromone:
        world.pheromone[here] += params.pheromone_deposit
        flags.dropped_pheromone = True

    rotate = action.rotate
    if rotate == Rotate.RANDOM:
        rotate = Rotate.LEFT if rng.random() < 0.5 else Rotate.RIGHT
    if rotate == Rotate.LEFT:
        ant.heading = normalize_heading(ant.heading - params.rotation_step)
    elif rotate == Rotate.RIGHT:
        ant.heading = normalize_heading(ant.heading + params.rotation_step)
    flags.rotation = rotate.value

    if extra_turn:
        ant.heading = normalize_heading(ant.heading + extra_turn)

    if action.move_forward:
        x, y = world.geometry.ahead(ant.x, ant.y, ant.heading)
        if not world.geometry.contains(x, y):
            ant.heading = normalize_heading(ant.heading + 180.0)
            flags.bounced = True
            x, y = world.geometry.ahead(ant.x, ant.y, ant.heading)
        if world.geometry.contains(x, y):
            ant.x, ant.y = x, y
            flags.moved = True

    if flags.noops:
        logger.debug(f"ant {ant.id} tick {world.tick}: skipped infeasible {', '.join(flags.noops)}")
    return flags


# -- rule-based (library model) ----------------------------------------------

def _uphill(readings: SensorTriple) -> Rotate:
    if readings.right > readings.front or readings.left > readings.front:
        return Rotate.RIGHT if readings.right > readings.left else Rotate.LEFT
    return Rotate.NONE


def rule_ant_step(
    snapshot: AntSnapshot, params: 'AntParams', rng: np.random.Generator
) -> Tuple[AntAction, float]:
    """
    One library-model step: the action plus the extra turn (wiggle, about-face)

    Ant k waits at the nest until tick k + 1 when departures are staggered.
    """
    if params.stagger_departure and snapshot.tick <= snapshot.agent_id:
        return IDLE_ACTION, 0.0

    wiggle = float(rng.integers(0, params.wiggle) - rng.integers(0, params.wiggle))
    p = snapshot.perception

    if p.carrying:
        if p.nest_presence:
            return AntAction(
                move_forward=True, rotate=Rotate.NONE, pick_up_food=False, drop_pheromone=False, drop_food=True
            ), wiggle
        return AntAction(
            move_forward=True,
            rotate=_uphill(snapshot.nest_scent),
            pick_up_food=False,
            drop_pheromone=True,
            drop_food=False,
        ), wiggle

    if p.food_here > 0:
        return AntAction(
            move_forward=True, rotate=Rotate.NONE, pick_up_food=True, drop_pheromone=False, drop_food=False
        ), 180.0 + wiggle

    lo, hi = params.follow_window
    rotate = Rotate.NONE
    if lo <= snapshot.pheromone_here < hi:
        rotate = _uphill(snapshot.pheromone)
    return AntAction(
        move_forward=True, rotate=rotate, pick_up_food=False, drop_pheromone=False, drop_food=False
    ), wiggle


def rule_based_ant_policy(world: 'AntWorld', ant: 'AntState', rng: np.random.Generator) -> AntAction:
    action, _ = rule_ant_step(sense_snapshot(world, ant), world.params, rng)
    return action


# -- deployed prompt rules ----------------------------------------------------

def ant_decision_table(p: AntPerception) -> AntAction:
    """
    The deployed prompt's rules, in priority order

    carrying: follow nest scent, mark the way, drop at the nest;
    on food: pick it up and mark the source;
    pheromone sensed: follow the strongest;
    otherwise: keep moving with a random turn.
    """
    if p.carrying:
        return AntAction(
            move_forward=True,
            rotate=direction_to_rotate(p.stronger_nest_scent_dir),
            pick_up_food=False,
            drop_pheromone=True,
            drop_food=p.nest_presence,
        )
    if p.food_here > 0:
        return AntAction(
            move_forward=True, rotate=Rotate.NONE, pick_up_food=True, drop_pheromone=True, drop_food=False
        )
    if p.highest_pheromone_dir != Direction.NONE:
        return AntAction(
            move_forward=True,
            rotate=direction_to_rotate(p.highest_pheromone_dir),
            pick_up_food=False,
            drop_pheromone=False,
            drop_food=False,
        )
    return AntAction(
        move_forward=True, rotate=Rotate.RANDOM, pick_up_food=False, drop_pheromone=False, drop_food=False
    )


def fallback_ant_action() -> AntAction:
    return FALLBACK_ACTION
