"""
Named prompt templates and their integrity check against the golden texts
"""

import hashlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from src.ants.actions import AntPerception, Direction
from src.ants.behavior import AntSnapshot, SensorTriple
from src.ants.prompts import ANT_SYSTEM_TEXTS, render_user_for_version
from src.flocking.prompts import FLOCK_SYSTEM_TEXTS, render_bird_prompts
from src.flocking.world import BirdPerception, FlockParams, NeighborObs
from src.utils.config import Config
from src.utils.errors import ConfigurationError

DEFAULT_TEMPLATES = {'ants': 'ants/v9', 'flocking': 'flocking/v5'}


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    scenario: str
    version: str
    system_text: str
    user_renderer: Callable[[Any], str]
    # categorical user text the scripted oracle can read back
    oracle_readable: bool = True

    def render(self, perception: Any) -> str:
        return self.user_renderer(perception)


def _ant_template(version: str) -> PromptTemplate:
    return PromptTemplate(
        name=f'ants/{version}',
        scenario='ants',
        version=version,
        system_text=ANT_SYSTEM_TEXTS[version],
        user_renderer=lambda snapshot: render_user_for_version(version, snapshot),
        oracle_readable=version not in ('v1', 'v2', 'v3', 'v4'),
    )


def _flock_template(version: str) -> PromptTemplate:
    def _render(perception: BirdPerception) -> str:
        return render_bird_prompts(perception, perception.params, perception.neighbors, version)[1]

    return PromptTemplate(
        name=f'flocking/{version}',
        scenario='flocking',
        version=version,
        system_text=FLOCK_SYSTEM_TEXTS[version],
        user_renderer=_render,
    )


REGISTRY: Dict[str, PromptTemplate] = {
    **{f'ants/{v}': _ant_template(v) for v in ANT_SYSTEM_TEXTS},
    **{f'flocking/{v}': _flock_template(v) for v in FLOCK_SYSTEM_TEXTS},
}


def get_template(name: str, scenario: Optional[str] = None) -> PromptTemplate:
    template = REGISTRY.get(name)
    if template is None:
        raise ConfigurationError(f"prompt_template: unknown template {name!r}; known: {', '.join(sorted(REGISTRY))}")
    if scenario is not None and template.scenario != scenario:
        raise ConfigurationError(f"prompt_template: {name!r} is not a {scenario} template")
    return template


# -- golden check --------------------------------------------------------------

def example_ant_snapshot() -> AntSnapshot:
    """The state shown in the deployed ant prompt example."""
    return AntSnapshot(
        agent_id=0,
        tick=1,
        perception=AntPerception(
            highest_pheromone_dir=Direction.NONE,
            nest_presence=True,
            stronger_nest_scent_dir=Direction.FRONT,
            food_here=0,
            carrying=False,
        ),
        pheromone=SensorTriple(0.0, 0.0, 0.0),
        nest_scent=SensorTriple(196.84, 196.39, 195.76),
        pheromone_here=0.0,
    )


def first_iteration_ant_snapshot() -> AntSnapshot:
    """The state shown in the first ant prompt iteration (at the nest, carrying)."""
    base = example_ant_snapshot()
    return AntSnapshot(
        agent_id=0,
        tick=1,
        perception=base.perception.model_copy(update={'carrying': True}),
        pheromone=base.pheromone,
        nest_scent=base.nest_scent,
        pheromone_here=0.0,
    )


def example_bird_perception(minimum_separation: float = 1.5) -> BirdPerception:
    """Heading 138 with one neighbor at (0.53, -3.69) heading 248."""
    return BirdPerception(
        agent_id=0,
        tick=1,
        heading=138.0,
        neighbors=(NeighborObs(agent_id=1, rel_x=0.53, rel_y=-3.69, heading=248.0),),
        params=FlockParams(minimum_separation=minimum_separation),
    )


GOLDEN_CASES = {
    'ants/v9': ('ants_v9', example_ant_snapshot),
    'ants/v1': ('ants_v1', first_iteration_ant_snapshot),
    'flocking/v5': ('flocking_v5', example_bird_perception),
    'flocking/v1': ('flocking_v1', lambda: example_bird_perception(minimum_separation=1.0)),
}


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


@dataclass
class PromptCheck:
    template: str
    part: str
    expected: str
    actual: str

    @property
    def passed(self) -> bool:
        return self.expected == self.actual


@dataclass
class PromptReport:
    checks: List[PromptCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [f'{c.template} ({c.part})' for c in self.checks if not c.passed]


def validate_prompts(golden_dir: Optional[Path] = None) -> PromptReport:
    """
    Hash the registry texts against the golden prompt files

    Raises:
        ConfigurationError: if a golden file is missing
    """
    golden_dir = Path(golden_dir or Config.GOLDEN_DIR)
    report = PromptReport()
    for name, (stem, make_example) in GOLDEN_CASES.items():
        template = REGISTRY[name]
        rendered = {'system': template.system_text, 'user': template.render(make_example())}
        for part, text in rendered.items():
            path = golden_dir / f'{stem}.{part}.txt'
            if not path.is_file():
                raise ConfigurationError(f"golden prompt file not found: {path}")
            expected = sha256_text(path.read_bytes().decode('utf-8'))
            report.checks.append(PromptCheck(name, part, expected, sha256_text(text)))
    return report


def template_hashes() -> Dict[str, str]:
    return {name: sha256_text(t.system_text) for name, t in sorted(REGISTRY.items())}
