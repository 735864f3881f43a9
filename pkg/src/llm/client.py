"""
Chat-completions client for OpenAI-compatible endpoints
Handles auth, retries with exponential backoff, and envelope validation
"""

import time
from typing import Optional

import requests
from pydantic import BaseModel, ConfigDict, Field

from src.utils.config import Config
from src.utils.errors import TransportError
from src.utils.logger import logger


class LlmEndpointConfig(BaseModel):
    """Where and how to ask the model; every request carries the full context."""

    model_config = ConfigDict(frozen=True, extra='forbid')

    base_url: str = Field(default_factory=lambda: Config.LLM_BASE_URL)
    model: str = Field(default_factory=lambda: Config.LLM_MODEL)
    temperature: float = Field(0.0, ge=0)
    max_retries: int = Field(default_factory=lambda: Config.MAX_RETRIES, ge=0, le=10)
    timeout: float = Field(default_factory=lambda: Config.LLM_TIMEOUT, gt=0)
    api_key_env: str = Config.LLM_API_KEY_ENV
    backoff_base: float = Field(default_factory=lambda: Config.BACKOFF_BASE, ge=0)


def request_body(cfg: LlmEndpointConfig, system_text: str, user_text: str) -> dict:
    return {
        'model': cfg.model,
        'temperature': cfg.temperature,
        'messages': [
            {'role': 'system', 'content': system_text},
            {'role': 'user', 'content': user_text},
        ],
    }


class ChatCompletionsClient:
    """
    Client for a chat-completions endpoint

    Features:
    - Bearer auth from a named environment variable
    - Stateless requests (system + user message only)
    - Automatic retries on transport failure
    - One shared requests.Session, safe for concurrent in-flight calls
    """

    def __init__(self, cfg: LlmEndpointConfig, session: Optional[requests.Session] = None):
        """
        Initialize the client

        Args:
            cfg: endpoint configuration

        Raises:
            ConfigurationError: if the API key variable is unset
        """
        self.cfg = cfg
        self.api_key = Config.api_key(cfg.api_key_env)
        self.url = f"{cfg.base_url.rstrip('/')}/chat/completions"
        self.session = session or requests.Session()

        logger.info(f"Initialized chat-completions client for {cfg.model} at {self.url}")

    def request_once(self, system_text: str, user_text: str) -> str:
        """
        Make one HTTP request and return the assistant message text

        Raises:
            TransportError: on timeout, connection failure, non-2xx status or malformed envelope
        """
        headers = {'Authorization': f'Bearer {self.api_key}', 'Content-Type': 'application/json'}
        try:
            response = self.session.post(
                self.url,
                headers=headers,
                json=request_body(self.cfg, system_text, user_text),
                timeout=self.cfg.timeout,
            )
        except requests.exceptions.Timeout:
            raise TransportError(f"request timed out after {self.cfg.timeout}s") from None
        except requests.exceptions.RequestException as e:
            raise TransportError(f"request failed: {e}") from None

        if not 200 <= response.status_code < 300:
            raise TransportError(f"HTTP {response.status_code}: {response.text[:200]}", response.status_code)

        try:
            data = response.json()
            content = data['choices'][0]['message']['content']
        except (ValueError, KeyError, IndexError, TypeError) as e:
            raise TransportError(f"malformed completion envelope: {e!r}", response.status_code) from None
        if not isinstance(content, str):
            raise TransportError("completion content is not text", response.status_code)
        return content

    def complete(self, system_text: str, user_text: str) -> str:
        """
        Request a completion, retrying transport failures

        Retries up to cfg.max_retries times, waiting backoff_base * 2**attempt
        seconds between attempts.
        """
        attempts = self.cfg.max_retries + 1
        for attempt in range(attempts):
            try:
                return self.request_once(system_text, user_text)
            except TransportError as e:
                logger.warning(f"Chat request failed on attempt {attempt + 1}: {e}")
                if attempt < attempts - 1:
                    time.sleep(self.cfg.backoff_base * 2 ** attempt)  # Exponential backoff
                else:
                    raise

    def close(self) -> None:
        self.session.close()


def chat_completion(cfg: LlmEndpointConfig, system_text: str, user_text: str) -> str:
    """One-off completion with a throwaway client."""
    client = ChatCompletionsClient(cfg)
    try:
        return client.complete(system_text, user_text)
    finally:
        client.close()
