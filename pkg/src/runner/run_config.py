"""
Run configuration: YAML file -> validated RunConfig, with CLI overrides on top
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from src.ants.world import AntParams
from src.flocking.world import FlockParams
from src.llm.client import LlmEndpointConfig
from src.llm.controllers import ControllerKind
from src.llm.registry import DEFAULT_TEMPLATES, REGISTRY
from src.utils.config import Config
from src.utils.errors import ConfigurationError
from src.utils.logger import logger


class MixEntry(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')

    kind: ControllerKind
    count: int = Field(ge=0)


class RunConfig(BaseModel):
    """One experiment: a scenario, a population split across controller kinds, and seeds."""

    model_config = ConfigDict(extra='forbid')

    name: str = 'run'
    scenario: Literal['ants', 'flocking']
    steps: int = Field(gt=0)
    population: int = Field(gt=0)
    controller_mix: List[MixEntry]
    prompt_template: Optional[str] = None
    ant_params: AntParams = Field(default_factory=AntParams)
    flock_params: FlockParams = Field(default_factory=FlockParams)
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    llm: Optional[LlmEndpointConfig] = None
    llm_workers: int = Field(default_factory=lambda: Config.LLM_WORKERS, ge=1)

    @model_validator(mode='after')
    def _check_consistency(self):
        total = sum(entry.count for entry in self.controller_mix)
        if total != self.population:
            raise ValueError(f"controller_mix: counts sum to {total}, population is {self.population}")

        if self.prompt_template is None:
            self.prompt_template = DEFAULT_TEMPLATES[self.scenario]
        template = REGISTRY.get(self.prompt_template)
        if template is None:
            raise ValueError(f"prompt_template: unknown template {self.prompt_template!r}")
        if template.scenario != self.scenario:
            raise ValueError(f"prompt_template: {self.prompt_template!r} is not a {self.scenario} template")

        kinds = {entry.kind for entry in self.controller_mix if entry.count > 0}
        if ControllerKind.SCRIPTED_ORACLE in kinds and not template.oracle_readable:
            raise ValueError(f"prompt_template: the scripted oracle cannot read {self.prompt_template} user prompts")
        if ControllerKind.LLM_REMOTE in kinds and self.llm is None:
            raise ValueError("llm: block required when llm_remote controllers are present")
        if any(seed < 0 for seed in self.seeds):
            raise ValueError("seeds: must be non-negative")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds: must be unique")
        return self

    @property
    def uses_remote(self) -> bool:
        return any(e.kind == ControllerKind.LLM_REMOTE and e.count > 0 for e in self.controller_mix)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form; independent of key order in the source file."""
        canonical = json.dumps(self.model_dump(mode='json'), sort_keys=True, separators=(',', ':'))
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


def parse_controller_mix(spec: str) -> List[Dict[str, Any]]:
    """'rule_based:25,scripted_oracle:5' -> [{'kind': 'rule_based', 'count': 25}, ...]"""
    entries = []
    for part in spec.split(','):
        part = part.strip()
        if not part:
            continue
        kind, sep, count = part.partition(':')
        if not sep:
            raise ConfigurationError(f"controller_mix: expected kind:count, got {part!r}")
        try:
            entries.append({'kind': kind.strip(), 'count': int(count)})
        except ValueError:
            raise ConfigurationError(f"controller_mix: count must be an integer in {part!r}") from None
    if not entries:
        raise ConfigurationError("controller_mix: empty specification")
    return entries


def _describe(error: ValidationError) -> str:
    problems = []
    for err in error.errors():
        key = '.'.join(str(p) for p in err['loc'])
        message = err['msg'].removeprefix('Value error, ')
        problems.append(f"{key}: {message}" if key else message)
    return '; '.join(problems)


def build_run_config(data: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Validate a raw mapping; overrides (flag values) replace file keys."""
    merged = dict(data or {})
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    try:
        config = RunConfig.model_validate(merged)
    except ValidationError as e:
        raise ConfigurationError(f"invalid run configuration: {_describe(e)}") from None
    if config.llm is not None and not config.uses_remote:
        logger.warning("llm block ignored: no llm_remote controllers in controller_mix")
    return config


def load_run_config(path: Path, overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text(encoding='utf-8'))
    except yaml.YAMLError as e:
        raise ConfigurationError(f"config file {path} is not valid YAML: {e}") from None
    if not isinstance(data, dict):
        raise ConfigurationError(f"config file {path} must hold a mapping at the top level")
    return build_run_config(data, overrides)
