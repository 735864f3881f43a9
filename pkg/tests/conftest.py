# Pytest configuration

from pathlib import Path

import numpy as np
import pytest

from src.ants.actions import AntPerception, Direction
from src.ants.world import AntParams, AntWorld
from src.core.rng import SeededRng
from src.flocking.world import BirdState, FlockParams, FlockWorld
from src.runner.run_config import build_run_config

FIXTURES = Path(__file__).parent / 'fixtures'
ROOT = Path(__file__).parent.parent


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def golden_dir():
    return ROOT / 'prompts' / 'golden'


@pytest.fixture
def ant_response_text():
    return (FIXTURES / 'ant_response.txt').read_text(encoding='utf-8')


@pytest.fixture
def bird_response_text():
    return (FIXTURES / 'bird_response.txt').read_text(encoding='utf-8')


@pytest.fixture
def empty_ant_world():
    """One ant at the origin heading north, no food, no pheromone."""
    world = AntWorld.create(AntParams(), 1, SeededRng(0))
    world.food[:] = 0
    world.food_source[:] = 0
    world.initial_food = 0
    world.ants[0].heading = 0.0
    return world


@pytest.fixture
def ant_world():
    return AntWorld.create(AntParams(), 10, SeededRng(7))


@pytest.fixture
def make_perception():
    def _make(pheromone='none', nest=False, scent='front', food=0, carrying=False):
        return AntPerception(
            highest_pheromone_dir=Direction(pheromone),
            nest_presence=nest,
            stronger_nest_scent_dir=Direction(scent),
            food_here=food,
            carrying=carrying,
        )
    return _make


@pytest.fixture
def make_flock():
    """FlockWorld from explicit (x, y, heading) triples."""
    def _make(birds, params=None, llm_ids=()):
        params = params or FlockParams()
        states = [BirdState(id=i, x=x, y=y, heading=h, is_llm=i in llm_ids) for i, (x, y, h) in enumerate(birds)]
        return FlockWorld(params, states)
    return _make


@pytest.fixture
def policy_rng():
    return np.random.default_rng(12345)


@pytest.fixture
def make_config():
    def _make(**fields):
        data = {
            'name': 'test',
            'scenario': 'ants',
            'steps': 20,
            'population': 4,
            'controller_mix': [{'kind': 'rule_based', 'count': 4}],
            'seeds': [1],
        }
        data.update(fields)
        return build_run_config(data)
    return _make
