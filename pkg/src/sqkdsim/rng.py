"""Named, reproducible random streams.

Every source of randomness in a run is an :class:`RngStream` keyed by
``(seed, stream_id)`` and backed by the counter-based Philox bit generator.
Distinct participants and channel passes own distinct streams, so adding or
removing one consumer (for example an eavesdropper) never perturbs the draws
of any other.  A "draw" is one uniform double in [0, 1); every higher-level
choice is derived from a fixed number of draws, which makes draw accounting
auditable in tests.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MAX_SEED = 2**64


def _label_key(stream_id: str) -> int:
    """Stable 64-bit key derived from a stream label."""
    digest = hashlib.blake2s(stream_id.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


class RngStream:
    """Single-owner random stream; one logical actor advances it.

    Identical ``(seed, stream_id)`` and call sequence reproduce identical
    draws, across processes and platforms.
    """

    __slots__ = ("seed", "stream_id", "draws", "_gen")

    def __init__(self, seed: int, stream_id: str):
        if not 0 <= seed < _MAX_SEED:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.stream_id = stream_id
        self.draws = 0
        self._gen = np.random.Generator(
            np.random.Philox(key=np.array([seed, _label_key(stream_id)], dtype=np.uint64))
        )

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id!r}, draws={self.draws})"

    def uniform(self) -> float:
        """One draw: a uniform double in [0, 1)."""
        self.draws += 1
        return float(self._gen.random())

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), from exactly one draw."""
        if n < 1:
            raise ValueError(f"randrange needs n >= 1, got {n}")
        return min(int(self.uniform() * n), n - 1)

    def bernoulli(self, p: float) -> bool:
        """True with probability p, from exactly one draw."""
        return self.uniform() < p
