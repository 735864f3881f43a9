"""
Configuration management for the swarm LLM simulator
Loads settings from environment variables and provides defaults
"""

import os
from pathlib import Path

from dotenv import load_dotenv

from src.utils.errors import ConfigurationError


# Load environment variables from .env file
env_path = Path(__file__).parent.parent.parent / '.env'
load_dotenv(env_path)


class Config:
    """Application configuration settings"""

    # Environment
    ENV = os.getenv('ENV', 'development')
    DEBUG = ENV == 'development'
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    # LLM endpoint (OpenAI-compatible chat completions)
    LLM_BASE_URL = os.getenv('SWARM_LLM_BASE_URL', 'https://api.openai.com/v1')
    LLM_MODEL = os.getenv('SWARM_LLM_MODEL', 'gpt-4o')
    LLM_API_KEY_ENV = 'OPENAI_API_KEY'
    LLM_TIMEOUT = float(os.getenv('SWARM_LLM_TIMEOUT', '30'))
    LLM_WORKERS = int(os.getenv('SWARM_LLM_WORKERS', '5'))
    MAX_RETRIES = int(os.getenv('MAX_RETRIES', '2'))
    BACKOFF_BASE = float(os.getenv('SWARM_LLM_BACKOFF', '1.0'))  # seconds

    # Paths
    ROOT_DIR = Path(__file__).parent.parent.parent
    CONFIG_DIR = ROOT_DIR / 'configs'
    GOLDEN_DIR = Path(os.getenv('GOLDEN_DIR', str(ROOT_DIR / 'prompts' / 'golden')))
    OUTPUT_DIR = Path(os.getenv('OUTPUT_DIR', str(ROOT_DIR / 'output')))

    @classmethod
    def api_key(cls, env_name: str = None) -> str:
        """Resolve the API key from the named environment variable"""
        name = env_name or cls.LLM_API_KEY_ENV
        key = os.getenv(name)
        if not key:
            raise ConfigurationError(f"{name} is not set; it is required for llm_remote controllers")
        return key

    @classmethod
    def validate(cls, needs_llm: bool = False):
        """Validate required configuration settings"""
        errors = []

        if needs_llm and not os.getenv(cls.LLM_API_KEY_ENV):
            errors.append(f"{cls.LLM_API_KEY_ENV} is required")
        if not cls.LLM_BASE_URL.startswith(('http://', 'https://')):
            errors.append(f"SWARM_LLM_BASE_URL must be an http(s) URL, got {cls.LLM_BASE_URL!r}")
        if cls.MAX_RETRIES < 0:
            errors.append("MAX_RETRIES must be >= 0")
        if cls.LLM_WORKERS < 1:
            errors.append("SWARM_LLM_WORKERS must be >= 1")
        if not cls.GOLDEN_DIR.is_dir():
            errors.append(f"golden prompt directory not found: {cls.GOLDEN_DIR}")

        if errors:
            raise ConfigurationError(f"Configuration errors: {', '.join(errors)}")

    @classmethod
    def display(cls):
        """Display current configuration (hiding sensitive values)"""
        key = os.getenv(cls.LLM_API_KEY_ENV)
        print("\nCurrent Configuration:")
        print(f"  Environment: {cls.ENV}")
        print(f"  Log Level: {cls.LOG_LEVEL}")
        print(f"  LLM Base URL: {cls.LLM_BASE_URL}")
        print(f"  LLM Model: {cls.LLM_MODEL}")
        print(f"  Max Retries: {cls.MAX_RETRIES}")
        print(f"  Golden Prompts: {cls.GOLDEN_DIR}")
        print(f"  Output Dir: {cls.OUTPUT_DIR}")
        print(f"  {cls.LLM_API_KEY_ENV}: {'***' + key[-4:] if key else 'Not Set'}")
        print()


if __name__ == "__main__":
    Config.display()
    Config.validate()
