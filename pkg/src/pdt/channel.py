"""Broadcast channel made of two independent binary erasure channels.

A received sequence stores the erasure as its own symbol value
(:data:`ERASED`), never as a bit pattern, so an erased position cannot be
read as data by accident.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .indexset import IndexSet
from .randomness import derive_rng

ZERO, ONE, ERASED = 0, 1, 2
_CHARS = np.array([ord("0"), ord("1"), ord("e")], dtype=np.uint8)

BOB, CATHY = 1, 2


def as_bits(x) -> np.ndarray:
    """Validate and return ``x`` as a uint8 array of 0/1 values."""
    if isinstance(x, str):
        x = [int(c) for c in x]
    arr = np.asarray(x, dtype=np.uint8)
    if arr.ndim != 1 or (arr.size and arr.max() > 1):
        raise ValueError("expected a one-dimensional sequence of bits")
    return arr


def bits_to_str(bits) -> str:
    return (np.asarray(bits, dtype=np.uint8) + ord("0")).astype(np.uint8).tobytes().decode()


@dataclass(frozen=True, eq=False)
class ReceivedSequence:
    """Per-index symbols 0, 1 or :data:`ERASED` seen by one receiver."""

    symbols: np.ndarray

    def __post_init__(self):
        arr = np.array(self.symbols, dtype=np.uint8, copy=True)
        if arr.ndim != 1 or (arr.size and arr.max() > ERASED):
            raise ValueError("symbols must be 0, 1 or ERASED")
        arr.setflags(write=False)
        object.__setattr__(self, "symbols", arr)

    def __len__(self):
        return int(self.symbols.size)

    def __eq__(self, other):
        if isinstance(other, ReceivedSequence):
            return np.array_equal(self.symbols, other.symbols)
        return NotImplemented

    @property
    def erased_mask(self) -> np.ndarray:
        return self.symbols == ERASED

    def to_string(self) -> str:
        return _CHARS[self.symbols].tobytes().decode()

    @classmethod
    def from_string(cls, s: str) -> "ReceivedSequence":
        table = {"0": ZERO, "1": ONE, "e": ERASED, "E": ERASED}
        try:
            return cls(np.array([table[c] for c in s], dtype=np.uint8))
        except KeyError as exc:
            raise ValueError(f"bad symbol {exc.args[0]!r}") from None

    @classmethod
    def from_bits(cls, x, erased_mask) -> "ReceivedSequence":
        sym = as_bits(x).copy()
        sym[np.asarray(erased_mask, dtype=bool)] = ERASED
        return cls(sym)

    def read(self, indices) -> np.ndarray:
        """Bits at ``indices``; raises if any of them is erased."""
        idx = np.asarray(indices.indices if isinstance(indices, IndexSet) else indices,
                         dtype=np.int64)
        vals = self.symbols[idx]
        if (vals == ERASED).any():
            bad = idx[vals == ERASED][:5].tolist()
            raise ValueError(f"attempt to read erased positions {bad}")
        return vals.copy()


@dataclass(frozen=True)
class ChannelConfig:
    eps1: float
    eps2: float
    seed: int = 0

    def __post_init__(self):
        for name in ("eps1", "eps2"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


def erasure_draws(seed: int, party: int, n: int) -> np.ndarray:
    """Uniform draws deciding the erasures of ``party`` at indices ``0..n-1``.

    Draw ``i`` depends only on ``(seed, party, i)``.
    """
    return derive_rng(seed, f"erasure/{party}").random(n)


def broadcast(x, cfg: ChannelConfig) -> tuple[ReceivedSequence, ReceivedSequence]:
    """Send ``x`` through BEC(eps1) to Bob and BEC(eps2) to Cathy."""
    x = as_bits(x)
    n = x.size
    y = ReceivedSequence.from_bits(x, erasure_draws(cfg.seed, BOB, n) < float(cfg.eps1))
    z = ReceivedSequence.from_bits(x, erasure_draws(cfg.seed, CATHY, n) < float(cfg.eps2))
    return y, z


def erasure_partition(r: ReceivedSequence, domain) -> tuple[IndexSet, IndexSet]:
    """Split ``domain`` into the erased and unerased positions of ``r``."""
    if not isinstance(domain, IndexSet):
        domain = IndexSet(domain)
    idx = domain.indices
    if idx.size and idx[-1] >= len(r):
        raise IndexError(f"index {int(idx[-1])} outside sequence of length {len(r)}")
    erased = r.symbols[idx] == ERASED
    return IndexSet.from_sorted(idx[erased]), IndexSet.from_sorted(idx[~erased])
