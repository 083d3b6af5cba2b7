"""Public-channel transcript and the byte encodings of its messages.

Set announcements are encoded as a sequence of ``(slot, size, indices...)``
records of little-endian uint32 values; bit strings as ASCII ``'0'``/``'1'``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from ..indexset import IndexSet

ALICE, BOB, CATHY = "Alice", "Bob", "Cathy"

BOB_SETS = "bob-sets"
CATHY_SETS = "cathy-sets"
CIPHERTEXTS = "ciphertexts"
OT_SETS = "ot-sets"
OT_CIPHERTEXTS = "ot-ciphertexts"
ABORT = "abort"

SET_TAGS = (BOB_SETS, CATHY_SETS, OT_SETS)
BIT_TAGS = (CIPHERTEXTS, OT_CIPHERTEXTS)


@dataclass(frozen=True)
class Message:
    sender: str
    tag: str
    payload: bytes

    def __len__(self):
        return len(self.payload)


class Transcript:
    """Append-only log of public messages, in emission order."""

    def __init__(self, messages=()):
        self._messages: list[Message] = list(messages)

    def append(self, sender: str, tag: str, payload: bytes) -> Message:
        msg = Message(sender, tag, bytes(payload))
        self._messages.append(msg)
        return msg

    @property
    def messages(self) -> tuple[Message, ...]:
        return tuple(self._messages)

    def __iter__(self):
        return iter(self._messages)

    def __len__(self):
        return len(self._messages)

    def __getitem__(self, i):
        return self._messages[i]

    def __eq__(self, other):
        if isinstance(other, Transcript):
            return self._messages == other._messages
        return NotImplemented

    def __repr__(self):
        return f"Transcript({[(m.sender, m.tag, len(m)) for m in self._messages]})"

    def sha256(self) -> str:
        h = hashlib.sha256()
        for msg in self._messages:
            h.update(msg.payload)
        return h.hexdigest()

    def structure(self) -> tuple:
        """Sender, tag and length of every message; no payload content."""
        return tuple((m.sender, m.tag, len(m)) for m in self._messages)


def encode_sets(records) -> bytes:
    """Encode ``(slot, IndexSet)`` pairs in the given emission order."""
    parts = []
    for slot, s in records:
        parts.append(np.array([slot, len(s)], dtype="<u4").tobytes())
        parts.append(s.to_bytes())
    return b"".join(parts)


def decode_sets(payload: bytes) -> list[tuple[int, IndexSet]]:
    words = np.frombuffer(payload, dtype="<u4").astype(np.int64)
    out, pos = [], 0
    while pos < words.size:
        slot, size = int(words[pos]), int(words[pos + 1])
        out.append((slot, IndexSet.from_sorted(words[pos + 2:pos + 2 + size])))
        pos += 2 + size
    return out


def encode_bits(bits) -> bytes:
    return (np.asarray(bits, dtype=np.uint8) + ord("0")).astype(np.uint8).tobytes()


def decode_bits(payload: bytes) -> np.ndarray:
    return np.frombuffer(payload, dtype=np.uint8) - ord("0")
