"""Swarm simulations with LLM-driven agents."""

__version__ = "0.1.0"
