"""
Bird flocking environment on a torus

Birds only ever change their heading; each tick they then fly `speed`
patch units forward and wrap around the world edges.
"""

import math
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.engine import Decision
from src.core.geometry import WorldGeometry, normalize_heading
from src.core.rng import SeededRng


class FlockParams(BaseModel):
    """Flocking parameters; turn caps and minimum separation as in the deployed prompt."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    max_separate_turn: float = Field(1.5, ge=0)
    max_align_turn: float = Field(5.0, ge=0)
    max_cohere_turn: float = Field(3.0, ge=0)
    minimum_separation: float = Field(1.5, ge=0)
    vision: float = Field(7.0, gt=0)
    speed: float = Field(1.0, ge=0)
    half_extent: int = Field(35, ge=5)

    @model_validator(mode='after')
    def _separation_inside_vision(self):
        if not self.minimum_separation < self.vision:
            raise ValueError(
                f"minimum_separation ({self.minimum_separation}) must be smaller than vision ({self.vision})"
            )
        return self


@dataclass
class BirdState:
    id: int
    x: float
    y: float
    heading: float
    is_llm: bool = False

    @property
    def pos(self) -> Tuple[float, float]:
        return self.x, self.y


@dataclass(frozen=True)
class NeighborObs:
    """A flockmate as seen from the observer: torus-shortest offset and exact heading."""

    agent_id: int
    rel_x: float
    rel_y: float
    heading: float

    @property
    def distance(self) -> float:
        return math.hypot(self.rel_x, self.rel_y)


@dataclass(frozen=True)
class BirdPerception:
    agent_id: int
    tick: int
    heading: float
    neighbors: Tuple[NeighborObs, ...]
    params: FlockParams

    def log_dict(self) -> dict:
        return {'heading_before': self.heading, 'neighbors_count': len(self.neighbors)}


class BirdDecision(BaseModel):
    model_config = ConfigDict(frozen=True)

    new_heading: float
    rationale: Optional[str] = None

    @field_validator('new_heading')
    @classmethod
    def _normalize(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"new_heading must be finite, got {value}")
        return normalize_heading(value)


def neighbors_of(world: 'FlockWorld', bird: BirdState, vision: float) -> List[NeighborObs]:
    """Every other bird within vision, nearest first (ties by id)."""
    if not vision > 0:
        raise ValueError(f"vision must be positive, got {vision}")
    found = []
    for other in world.birds.values():
        if other.id == bird.id:
            continue
        dx, dy = world.geometry.displacement(bird.x, bird.y, other.x, other.y)
        d = math.hypot(dx, dy)
        if d <= vision:
            found.append((d, other.id, NeighborObs(other.id, dx, dy, other.heading)))
    found.sort(key=lambda item: (item[0], item[1]))
    return [obs for _, _, obs in found]


def apply_bird_decision(world: 'FlockWorld', bird: BirdState, d: BirdDecision, params: FlockParams) -> dict:
    """Set the new heading, then fly forward with wrap-around."""
    before = bird.heading
    bird.heading = d.new_heading
    x, y = world.geometry.ahead(bird.x, bird.y, bird.heading, params.speed)
    bird.x, bird.y = world.geometry.resolve(x, y)
    return {'heading_before': before, 'new_heading': bird.heading, 'x': bird.x, 'y': bird.y}


class FlockWorld:
    """State of one flocking run."""

    snapshot_decisions = True

    def __init__(self, params: FlockParams, birds: Iterable[BirdState]):
        self.params = params
        self.geometry = WorldGeometry(params.half_extent, wrap=True)
        self.birds: Dict[int, BirdState] = {bird.id: bird for bird in birds}
        self.tick = 0

    @classmethod
    def create(
        cls, params: FlockParams, population: int, rng: SeededRng, llm_ids: Iterable[int] = ()
    ) -> 'FlockWorld':
        """Scatter birds uniformly with integer headings."""
        geometry = WorldGeometry(params.half_extent, wrap=True)
        setup = rng.world('setup')
        llm = set(llm_ids)
        birds = []
        for i in range(population):
            x = float(setup.uniform(geometry.min_coord, geometry.max_coord))
            y = float(setup.uniform(geometry.min_coord, geometry.max_coord))
            heading = float(setup.integers(0, 360))
            birds.append(BirdState(id=i, x=x, y=y, heading=heading, is_llm=i in llm))
        return cls(params, birds)

    def positions(self) -> np.ndarray:
        return np.array([[b.x, b.y] for b in self.birds.values()], dtype=float)

    def headings(self) -> np.ndarray:
        return np.array([b.heading for b in self.birds.values()], dtype=float)

    # -- engine protocol -------------------------------------------------

    def agent_ids(self) -> List[int]:
        return sorted(self.birds)

    def perceive(self, agent_id: int) -> BirdPerception:
        bird = self.birds[agent_id]
        return BirdPerception(
            agent_id=agent_id,
            tick=self.tick,
            heading=bird.heading,
            neighbors=tuple(neighbors_of(self, bird, self.params.vision)),
            params=self.params,
        )

    def apply(self, agent_id: int, decision: Decision, rng: np.random.Generator) -> dict:
        return apply_bird_decision(self, self.birds[agent_id], decision.action, self.params)

    def env_update(self) -> None:
        pass
