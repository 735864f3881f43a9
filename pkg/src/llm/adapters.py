"""
Per-scenario glue between controllers and the ant / flocking modules
"""

from abc import ABC, abstractmethod
from typing import Any, Tuple

import numpy as np

from src.ants.actions import parse_ant_response
from src.ants.behavior import AntSnapshot, ant_decision_table, fallback_ant_action, rule_ant_step
from src.ants.world import AntParams
from src.flocking.behavior import flock_decision
from src.flocking.prompts import parse_bird_response
from src.flocking.world import BirdDecision, BirdPerception


class ScenarioAdapter(ABC):
    """What a controller needs to know about one scenario."""

    scenario: str = ''

    @abstractmethod
    def rule(self, perception: Any, rng: np.random.Generator) -> Tuple[Any, float]:
        """Library-model action plus any engine-side extra turn."""

    @abstractmethod
    def table(self, perception: Any) -> Any:
        """Decision of the deployed prompt's rules, computed directly."""

    @abstractmethod
    def parse(self, text: str) -> Any:
        """Decode a model reply; raises ResponseParseError."""

    @abstractmethod
    def fallback(self, perception: Any) -> Any:
        """Action applied when no usable reply arrives."""


class AntAdapter(ScenarioAdapter):
    scenario = 'ants'

    def __init__(self, params: AntParams):
        self.params = params

    def rule(self, perception: AntSnapshot, rng: np.random.Generator):
        return rule_ant_step(perception, self.params, rng)

    def table(self, perception: AntSnapshot):
        return ant_decision_table(perception.perception)

    def parse(self, text: str):
        return parse_ant_response(text)

    def fallback(self, perception: AntSnapshot):
        return fallback_ant_action()


class FlockAdapter(ScenarioAdapter):
    scenario = 'flocking'

    def rule(self, perception: BirdPerception, rng: np.random.Generator):
        return self.table(perception), 0.0

    def table(self, perception: BirdPerception):
        return BirdDecision(new_heading=flock_decision(perception.heading, perception.neighbors, perception.params))

    def parse(self, text: str):
        return parse_bird_response(text)

    def fallback(self, perception: BirdPerception):
        # keep flying straight
        return BirdDecision(new_heading=perception.heading)
