"""Canonical sets of channel-use indices."""

from __future__ import annotations

import numpy as np


class IndexSet:
    """An immutable, sorted, duplicate-free set of non-negative indices.

    Two equal sets always have identical ``indices`` arrays and identical
    byte encodings, so set announcements carry no ordering side channel.
    """

    __slots__ = ("_idx",)

    def __init__(self, indices=()):
        if not isinstance(indices, np.ndarray):
            indices = list(indices)
        arr = np.unique(np.asarray(indices, dtype=np.int64))
        if arr.size and arr[0] < 0:
            raise ValueError("indices must be non-negative")
        arr.setflags(write=False)
        self._idx = arr

    @classmethod
    def from_sorted(cls, arr: np.ndarray) -> "IndexSet":
        """Wrap an array already known to be strictly increasing."""
        out = cls.__new__(cls)
        arr = np.array(arr, dtype=np.int64, copy=True)
        arr.setflags(write=False)
        out._idx = arr
        return out

    @property
    def indices(self) -> np.ndarray:
        return self._idx

    def __len__(self):
        return int(self._idx.size)

    def __iter__(self):
        return iter(self._idx.tolist())

    def __contains__(self, i):
        pos = np.searchsorted(self._idx, i)
        return bool(pos < self._idx.size and self._idx[pos] == i)

    def __eq__(self, other):
        if isinstance(other, IndexSet):
            return np.array_equal(self._idx, other._idx)
        return NotImplemented

    def __hash__(self):
        return hash(self._idx.tobytes())

    def __repr__(self):
        if len(self) > 12:
            head = ", ".join(map(str, self._idx[:6].tolist()))
            return f"IndexSet([{head}, ...] len={len(self)})"
        return f"IndexSet({self._idx.tolist()})"

    def to_list(self) -> list[int]:
        return self._idx.tolist()

    def to_bytes(self) -> bytes:
        return self._idx.astype("<u4").tobytes()

    def max(self) -> int:
        return int(self._idx[-1]) if self._idx.size else -1

    def first(self, k: int) -> "IndexSet":
        return IndexSet.from_sorted(self._idx[:k])

    def intersection(self, other: "IndexSet") -> "IndexSet":
        return IndexSet.from_sorted(np.intersect1d(self._idx, other._idx, assume_unique=True))

    def union(self, other: "IndexSet") -> "IndexSet":
        return IndexSet.from_sorted(np.union1d(self._idx, other._idx))

    def difference(self, other: "IndexSet") -> "IndexSet":
        return IndexSet.from_sorted(np.setdiff1d(self._idx, other._idx, assume_unique=True))

    def isdisjoint(self, other: "IndexSet") -> bool:
        return np.intersect1d(self._idx, other._idx, assume_unique=True).size == 0

    def issubset(self, other: "IndexSet") -> bool:
        return np.isin(self._idx, other._idx, assume_unique=True).all()
