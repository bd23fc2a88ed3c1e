"""Deterministic random substreams.

Every randomized routine in this package draws from a substream addressed
by (master seed, integer path).  Substreams are derived with numpy's
SeedSequence, so the value produced for trial i depends only on
(seed, i) and never on scheduling, chunking, or worker count.
"""

import random

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(seed: int, *path: int) -> np.random.Generator:
    """Return the numpy Generator for the substream (seed, *path)."""
    entropy = (seed & _MASK64,) + tuple(p & _MASK64 for p in path)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def derive_int(seed: int, *path: int) -> int:
    """Derive a stable 64-bit integer from (seed, *path)."""
    entropy = (seed & _MASK64,) + tuple(p & _MASK64 for p in path)
    state = np.random.SeedSequence(entropy).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def py_rng(seed: int, *path: int) -> random.Random:
    """Python stdlib Random seeded from the substream address."""
    return random.Random(derive_int(seed, *path))


def fresh_seed() -> int:
    """A seed for runs where the user supplied none (still echoed in output)."""
    return int.from_bytes(np.random.SeedSequence().entropy.to_bytes(16, "little")[:8], "little")
