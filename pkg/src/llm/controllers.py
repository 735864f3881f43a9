"""
Controllers: how each agent turns a perception into an action

- rule_based: the library model for the scenario
- decision_table: the deployed prompt's rules applied directly to typed perception
- llm_remote: prompt -> chat-completions endpoint -> parse
- scripted_oracle: prompt -> local oracle -> parse
"""

import hashlib
import json
import time
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import requests
from pydantic import BaseModel, ConfigDict

from src.core.engine import Decision
from src.llm.adapters import ScenarioAdapter
from src.llm.client import ChatCompletionsClient, LlmEndpointConfig, request_body
from src.llm.oracle import OracleBackend
from src.llm.registry import PromptTemplate
from src.utils.errors import ConfigurationError, ResponseParseError, TransportError
from src.utils.logger import logger


class ControllerKind(str, Enum):
    RULE_BASED = 'rule_based'
    DECISION_TABLE = 'decision_table'
    LLM_REMOTE = 'llm_remote'
    SCRIPTED_ORACLE = 'scripted_oracle'

    @property
    def uses_prompts(self) -> bool:
        return self in (ControllerKind.LLM_REMOTE, ControllerKind.SCRIPTED_ORACLE)


class CallRecord(BaseModel):
    """One attempted model call."""

    model_config = ConfigDict(frozen=True)

    tick: int
    agent_id: int
    template_name: str
    request_body_digest: str
    raw_response: Optional[str] = None
    parse_outcome: str  # ok | parse_error | transport_error
    error: Optional[str] = None
    latency_ms: float
    retry_count: int
    flagged: bool = False


def body_digest(body: dict) -> str:
    canonical = json.dumps(body, sort_keys=True, separators=(',', ':'), ensure_ascii=False)
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


class RemoteBackend:
    """Single-attempt calls through a shared chat-completions client."""

    is_remote = True

    def __init__(self, client: ChatCompletionsClient):
        self.client = client

    def body(self, system_text: str, user_text: str) -> dict:
        return request_body(self.client.cfg, system_text, user_text)

    def request(self, system_text: str, user_text: str) -> str:
        return self.client.request_once(system_text, user_text)


class RuleBasedController:
    kind = ControllerKind.RULE_BASED.value
    is_remote = False

    def __init__(self, adapter: ScenarioAdapter):
        self.adapter = adapter

    def decide(self, perception: Any, rng: np.random.Generator) -> Decision:
        action, extra_turn = self.adapter.rule(perception, rng)
        return Decision(action=action, controller_kind=self.kind, extra_turn=extra_turn)


class DecisionTableController:
    kind = ControllerKind.DECISION_TABLE.value
    is_remote = False

    def __init__(self, adapter: ScenarioAdapter):
        self.adapter = adapter

    def decide(self, perception: Any, rng: np.random.Generator) -> Decision:
        return Decision(action=self.adapter.table(perception), controller_kind=self.kind)


class PromptController:
    """
    Render the prompt, ask the backend, parse the answer

    Transport and parse failures are retried up to max_retries times, with
    exponential backoff after transport failures from remote backends. When
    every attempt fails the scenario fallback action is returned and all call
    records of the decision are flagged. OracleError is never caught.
    """

    def __init__(
        self,
        adapter: ScenarioAdapter,
        template: PromptTemplate,
        backend,
        kind: ControllerKind,
        max_retries: int = 2,
        backoff_base: float = 1.0,
    ):
        self.adapter = adapter
        self.template = template
        self.backend = backend
        self.kind = kind.value
        self.is_remote = backend.is_remote
        self.max_retries = max_retries
        self.backoff_base = backoff_base

    def decide(self, perception: Any, rng: np.random.Generator) -> Decision:
        system_text = self.template.system_text
        user_text = self.template.render(perception)
        digest = body_digest(self.backend.body(system_text, user_text))
        records: List[CallRecord] = []
        raw: Optional[str] = None

        def _record(outcome: str, attempt: int, started: float, error: Optional[str] = None) -> None:
            latency = (time.perf_counter() - started) * 1000.0 if self.is_remote else 0.0
            records.append(
                CallRecord(
                    tick=perception.tick,
                    agent_id=perception.agent_id,
                    template_name=self.template.name,
                    request_body_digest=digest,
                    raw_response=raw,
                    parse_outcome=outcome,
                    error=error,
                    latency_ms=round(latency, 3),
                    retry_count=attempt,
                )
            )

        attempts = self.max_retries + 1
        for attempt in range(attempts):
            started = time.perf_counter()
            raw = None
            try:
                raw = self.backend.request(system_text, user_text)
            except TransportError as e:
                _record('transport_error', attempt, started, str(e))
                if self.is_remote and attempt < attempts - 1:
                    time.sleep(self.backoff_base * 2 ** attempt)
                continue
            try:
                action = self.adapter.parse(raw)
            except ResponseParseError as e:
                _record('parse_error', attempt, started, str(e))
                logger.debug(f"Agent {perception.agent_id} tick {perception.tick}: unparseable response: {e}")
                continue
            _record('ok', attempt, started)
            return Decision(action=action, controller_kind=self.kind, raw_response=raw, call_records=records)

        logger.warning(
            f"Agent {perception.agent_id} tick {perception.tick}: {attempts} attempt(s) failed, using fallback action"
        )
        flagged = [record.model_copy(update={'flagged': True}) for record in records]
        return Decision(
            action=self.adapter.fallback(perception),
            controller_kind=self.kind,
            raw_response=raw,
            call_records=flagged,
            degraded=True,
        )


def assign_kinds(mix: Sequence[Tuple[ControllerKind, int]]) -> Dict[int, ControllerKind]:
    """Agent ids are handed out in mix order: the first count agents get the first kind, and so on."""
    kinds: Dict[int, ControllerKind] = {}
    next_id = 0
    for kind, count in mix:
        for _ in range(count):
            kinds[next_id] = ControllerKind(kind)
            next_id += 1
    return kinds


def build_controllers(
    kinds: Dict[int, ControllerKind],
    adapter: ScenarioAdapter,
    template: PromptTemplate,
    llm: Optional[LlmEndpointConfig] = None,
    session: Optional[requests.Session] = None,
) -> Dict[int, Any]:
    """
    One controller per agent; prompt-driven controllers of a kind share a backend

    Raises:
        ConfigurationError: remote controllers without an llm block, or an
            oracle over a template whose user text it cannot read
    """
    shared: Dict[ControllerKind, Any] = {}
    max_retries = llm.max_retries if llm is not None else 2
    backoff = llm.backoff_base if llm is not None else 1.0

    def _backend(kind: ControllerKind):
        if kind not in shared:
            if kind == ControllerKind.LLM_REMOTE:
                if llm is None:
                    raise ConfigurationError("llm: block required for llm_remote controllers")
                shared[kind] = RemoteBackend(ChatCompletionsClient(llm, session=session))
            else:
                if not template.oracle_readable:
                    raise ConfigurationError(
                        f"prompt_template: the scripted oracle cannot read {template.name} user prompts"
                    )
                shared[kind] = OracleBackend(adapter.scenario)
        return shared[kind]

    controllers: Dict[int, Any] = {}
    for agent_id, kind in kinds.items():
        if kind == ControllerKind.RULE_BASED:
            controllers[agent_id] = RuleBasedController(adapter)
        elif kind == ControllerKind.DECISION_TABLE:
            controllers[agent_id] = DecisionTableController(adapter)
        else:
            controllers[agent_id] = PromptController(
                adapter, template, _backend(kind), kind, max_retries=max_retries, backoff_base=backoff
            )
    return controllers


def decide(controller, perception: Any, rng: np.random.Generator) -> Decision:
    return controller.decide(perception, rng)
