"""Seed derivation.

Every random stream in the package is a Philox counter-based generator
keyed by ``(seed, purpose-tag, index)``. The purpose tag is a stable 64-bit
hash of a short string, so a stream never depends on how many draws some
other stream has made. The ``k``-th draw of a stream is a fixed function of
its key and ``k``.
"""

import hashlib

import numpy as np

MASK64 = (1 << 64) - 1


def purpose_tag(purpose: str) -> int:
    digest = hashlib.blake2b(purpose.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _seed_sequence(seed: int, purpose: str, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([int(seed) & MASK64, purpose_tag(purpose), int(index) & MASK64])


def derive_rng(seed: int, purpose: str, index: int = 0) -> np.random.Generator:
    """Return the generator for stream ``(seed, purpose, index)``."""
    return np.random.Generator(np.random.Philox(_seed_sequence(seed, purpose, index)))


def derive_seed(seed: int, purpose: str, index: int = 0) -> int:
    """Derive a child 64-bit seed, e.g. one per Monte Carlo trial."""
    state = _seed_sequence(seed, purpose, index).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)
