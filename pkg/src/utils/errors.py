"""
Exception hierarchy shared by the simulator, the LLM bridge and the runner
"""

from typing import Optional


class SwarmSimError(Exception):
    """Base class for all simulator errors"""


class InvalidArgumentError(SwarmSimError, ValueError):
    """A numeric argument is outside its domain (non-finite heading, negative turn cap)"""


class ConfigurationError(SwarmSimError, ValueError):
    """Invalid run configuration, missing API key, missing golden file or unknown template"""


class ResponseParseError(SwarmSimError, ValueError):
    """An LLM response could not be decoded into an action"""

    def __init__(self, message: str, raw_text: str):
        super().__init__(message)
        self.raw_text = raw_text


class TransportError(SwarmSimError, RuntimeError):
    """The chat-completions request failed (non-2xx, timeout, malformed envelope)"""

    def __init__(self, message: str, status_code: Optional[int] = None):
        super().__init__(message)
        self.status_code = status_code


class OracleError(SwarmSimError, RuntimeError):
    """The scripted oracle was handed prompt text it cannot read"""


class NoRunsFoundError(SwarmSimError, FileNotFoundError):
    """A summary was requested for a directory without completed runs"""


class InvariantViolationError(SwarmSimError, RuntimeError):
    """World state broke a conservation rule during a run"""

    def __init__(self, message: str, tick: int):
        super().__init__(message)
        self.tick = tick
