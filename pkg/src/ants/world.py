"""
Ant foraging environment

Patches carry pheromone, food, nest membership and a static nest-scent
gradient. Ants live in a bounded world: they turn back at the edges.
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.ants.behavior import apply_ant_action, sense_snapshot
from src.core.engine import Decision
from src.core.geometry import WorldGeometry
from src.core.rng import SeededRng


class AntParams(BaseModel):
    """Ant world parameters; defaults follow the library foraging model except evaporation."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    half_extent: int = Field(35, ge=5)
    nest_radius: float = Field(5.0, gt=0)
    food_radius: float = Field(5.0, gt=0)
    food_units: Tuple[int, int] = (1, 2)
    pheromone_deposit: float = Field(60.0, ge=0)
    diffusion_rate: float = Field(0.5, ge=0, le=1)
    evaporation_rate: float = Field(0.05, ge=0, le=1)
    sensing_floor: float = Field(0.05, ge=0)
    follow_window: Tuple[float, float] = (0.05, 2.0)
    rotation_step: float = Field(45.0, ge=0)
    wiggle: int = Field(40, ge=1)
    stagger_departure: bool = True

    @model_validator(mode='after')
    def _check_ranges(self):
        lo, hi = self.food_units
        if not 0 <= lo <= hi:
            raise ValueError(f"food_units must satisfy 0 <= low <= high, got {self.food_units}")
        if self.follow_window[0] > self.follow_window[1]:
            raise ValueError(f"follow_window is empty: {self.follow_window}")
        return self


@dataclass(frozen=True)
class FoodPatchSpec:
    id: int
    center: Tuple[float, float]
    radius: float
    units_per_cell: Tuple[int, int]


@dataclass(frozen=True)
class PatchCell:
    pheromone: float
    food: int
    is_nest: bool
    nest_scent: float
    food_source_id: Optional[int]


@dataclass
class AntState:
    id: int
    x: float
    y: float
    heading: float
    carrying: bool = False
    picked_from_patch: Optional[int] = None

    @property
    def pos(self) -> Tuple[float, float]:
        return self.x, self.y


def default_food_patches(params: AntParams) -> List[FoodPatchSpec]:
    """The three library-model food sources, numbered by distance from the nest."""
    e = float(params.half_extent)
    centers = [(0.6 * e, 0.0), (-0.6 * e, -0.6 * e), (-0.8 * e, 0.8 * e)]
    centers.sort(key=lambda c: math.hypot(*c))
    return [
        FoodPatchSpec(id=i, center=c, radius=params.food_radius, units_per_cell=params.food_units)
        for i, c in enumerate(centers, 1)
    ]


_NEIGHBOR_OFFSETS = [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1) if (dx, dy) != (0, 0)]


def _neighbor_sum(values: np.ndarray) -> np.ndarray:
    """Sum over the 8 neighbors of every cell; cells past the edge contribute nothing."""
    n, m = values.shape
    padded = np.pad(values, 1)
    total = np.zeros_like(values, dtype=float)
    for dx, dy in _NEIGHBOR_OFFSETS:
        total += padded[1 + dx:1 + dx + n, 1 + dy:1 + dy + m]
    return total


def diffuse_field(field: np.ndarray, rate: float) -> np.ndarray:
    """
    Share `rate` of every cell equally with its 8 neighbors

    Edge cells keep the shares owed to neighbors outside the world, so the
    total is conserved.
    """
    share = field * (rate / 8.0)
    missing = 8.0 - _neighbor_sum(np.ones_like(field, dtype=float))
    return field - field * rate + _neighbor_sum(share) + share * missing


class AntWorld:
    """State of one foraging run."""

    snapshot_decisions = False

    def __init__(
        self,
        params: AntParams,
        ants: List[AntState],
        pheromone: np.ndarray,
        food: np.ndarray,
        food_source: np.ndarray,
        nest: np.ndarray,
        nest_scent: np.ndarray,
        food_patches: List[FoodPatchSpec],
    ):
        self.params = params
        self.geometry = WorldGeometry(params.half_extent, wrap=False)
        self.ants: Dict[int, AntState] = {ant.id: ant for ant in ants}
        self.pheromone = pheromone
        self.food = food
        self.food_source = food_source
        self.nest = nest
        self.nest_scent = nest_scent
        self.food_patches = food_patches
        self.colony_food = 0
        self.tick = 0
        self.initial_food = int(food.sum())

    @classmethod
    def create(cls, params: AntParams, population: int, rng: SeededRng) -> 'AntWorld':
        """Lay out nest, scent and food; place every ant on the nest center."""
        geometry = WorldGeometry(params.half_extent, wrap=False)
        coords = np.arange(-params.half_extent, params.half_extent + 1, dtype=float)
        xs, ys = np.meshgrid(coords, coords, indexing='ij')
        distance = np.hypot(xs, ys)

        nest = distance < params.nest_radius
        nest_scent = 200.0 - distance

        patches = default_food_patches(params)
        food_source = np.zeros((geometry.size, geometry.size), dtype=int)
        for spec in patches:
            in_patch = np.hypot(xs - spec.center[0], ys - spec.center[1]) < spec.radius
            food_source[in_patch] = spec.id

        setup = rng.world('setup')
        food = np.zeros_like(food_source)
        has_food = food_source > 0
        lo, hi = params.food_units
        food[has_food] = setup.integers(lo, hi + 1, size=int(has_food.sum()))

        ants = [
            AntState(id=i, x=0.0, y=0.0, heading=float(setup.integers(0, 360)))
            for i in range(population)
        ]
        pheromone = np.zeros((geometry.size, geometry.size), dtype=float)
        return cls(params, ants, pheromone, food, food_source, nest, nest_scent, patches)

    # -- lookups ---------------------------------------------------------

    def index(self, x: float, y: float) -> Optional[Tuple[int, int]]:
        return self.geometry.index_of(x, y)

    def patch_at(self, x: float, y: float) -> Optional[PatchCell]:
        idx = self.index(x, y)
        if idx is None:
            return None
        source = int(self.food_source[idx])
        return PatchCell(
            pheromone=float(self.pheromone[idx]),
            food=int(self.food[idx]),
            is_nest=bool(self.nest[idx]),
            nest_scent=float(self.nest_scent[idx]),
            food_source_id=source or None,
        )

    def food_accounting(self) -> Dict[str, int]:
        """Where every initial unit of food is right now."""
        carried = sum(1 for ant in self.ants.values() if ant.carrying)
        remaining = int(self.food.sum())
        return {
            'remaining': remaining,
            'carried': carried,
            'collected': self.colony_food,
            'total': remaining + carried + self.colony_food,
            'initial': self.initial_food,
        }

    # -- engine protocol -------------------------------------------------

    def agent_ids(self) -> List[int]:
        return sorted(self.ants)

    def perceive(self, agent_id: int):
        return sense_snapshot(self, self.ants[agent_id])

    def apply(self, agent_id: int, decision: Decision, rng: np.random.Generator):
        return apply_ant_action(self, self.ants[agent_id], decision.action, rng, extra_turn=decision.extra_turn)

    def env_update(self) -> None:
        env_update_ants(self)


def env_update_ants(world: AntWorld) -> None:
    """Diffuse, evaporate, then zero anything below the sensing floor."""
    params = world.params
    field = diffuse_field(world.pheromone, params.diffusion_rate)
    field *= 1.0 - params.evaporation_rate
    field[field < params.sensing_floor] = 0.0
    world.pheromone = field
