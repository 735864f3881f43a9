"""
Seeded random streams

Every (agent, purpose) pair draws from its own numpy Generator derived from
the master seed, so adding a consumer never shifts anybody else's draws.
"""

import hashlib
from typing import Dict, Tuple

import numpy as np

WORLD_AGENT = -1  # agent id used for world-level streams (setup, scheduling)


def _purpose_key(purpose: str) -> int:
    digest = hashlib.blake2b(purpose.encode('utf-8'), digest_size=8).digest()
    return int.from_bytes(digest, 'big')


class SeededRng:
    """Factory of independent, reproducible random streams."""

    def __init__(self, master_seed: int):
        if master_seed < 0 or master_seed >= 2 ** 64:
            raise ValueError(f"master_seed must be a 64-bit unsigned integer, got {master_seed}")
        self.master_seed = int(master_seed)
        self._streams: Dict[Tuple[int, str], np.random.Generator] = {}

    def stream(self, agent_id: int, purpose: str) -> np.random.Generator:
        """Generator for hash(master_seed, agent_id, purpose); created once, then reused."""
        key = (agent_id, purpose)
        generator = self._streams.get(key)
        if generator is None:
            # spawn_key entries must be non-negative
            sequence = np.random.SeedSequence(
                entropy=self.master_seed,
                spawn_key=(agent_id + 1, _purpose_key(purpose)),
            )
            generator = np.random.Generator(np.random.PCG64(sequence))
            self._streams[key] = generator
        return generator

    def world(self, purpose: str) -> np.random.Generator:
        return self.stream(WORLD_AGENT, purpose)
