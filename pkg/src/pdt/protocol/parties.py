"""The steps each party performs, as plain functions over public data.

Every function takes what that party legitimately holds: its own received
sequence, its private choice, its own random generator and the public
transcript contents so far.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..channel import ReceivedSequence, as_bits, erasure_partition
from ..indexset import IndexSet
from ..rates import SizePlan
from .transcript import ALICE, BOB, CATHY, encode_bits, encode_sets

EXPOSE_CHOICE = "expose-choice"
MUTATIONS = (EXPOSE_CHOICE,)


class Stage(str, Enum):
    BOB_SIZE_CHECK = "BobSizeCheck"
    CATHY_SIZE_CHECK = "CathySizeCheck"
    ALICE_INTERSECTION_CHECK = "AliceIntersectionCheck"
    OT_SIZE_CHECK = "OTSizeCheck"

    def __str__(self):
        return self.value


class ProtocolAbort(Exception):
    """A party declared an error; the run ends at ``stage``."""

    def __init__(self, stage: Stage, party: str, detail: str = ""):
        self.stage = Stage(stage)
        self.party = party
        self.detail = detail
        super().__init__(f"{party} aborted at {self.stage.value}" + (f": {detail}" if detail else ""))


class ProtocolLogicError(RuntimeError):
    """An internal precondition failed; indicates a bug, never a normal abort."""


@dataclass(frozen=True)
class SetAnnouncement:
    """N equal-size slot sets plus one extra set, and their emission order.

    Unpacks as ``sets, extra``. ``order`` lists the slots in the order they
    are written to the transcript; the extra set always comes last and is
    labelled with slot ``N``.
    """

    sets: tuple[IndexSet, ...]
    extra: IndexSet
    order: tuple[int, ...]

    def __iter__(self):
        return iter((list(self.sets), self.extra))

    def union(self) -> IndexSet:
        out = IndexSet()
        for s in self.sets:
            out = out.union(s)
        return out

    def payload(self) -> bytes:
        records = [(j, self.sets[j]) for j in self.order]
        records.append((len(self.sets), self.extra))
        return encode_sets(records)


def assign_slots(choice: int, good: IndexSet, bad: list[IndexSet]) -> tuple[IndexSet, ...]:
    """Put ``good`` in slot ``choice`` and the bad sets in the remaining slots in order."""
    slots = list(bad)
    slots.insert(choice, good)
    return tuple(slots)


def emission_order(N: int, choice: int, mutation: str | None = None) -> tuple[int, ...]:
    if mutation is None:
        return tuple(range(N))
    if mutation == EXPOSE_CHOICE:
        return (choice,) + tuple(j for j in range(N) if j != choice)
    raise ValueError(f"unknown mutation {mutation!r}")


def _sample(pool: IndexSet, k: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform ordered sample of ``k`` distinct elements of ``pool``."""
    if k == 0:
        return np.empty(0, dtype=np.int64)
    return rng.choice(pool.indices, size=k, replace=False, shuffle=True)


def _blocks(sample: np.ndarray, sizes: list[int]) -> list[IndexSet]:
    out, pos = [], 0
    for k in sizes:
        out.append(IndexSet(sample[pos:pos + k]))
        pos += k
    return out


def select_sets(received: ReceivedSequence, domain, choice: int, N: int, size: int,
                extra: int, rng: np.random.Generator, stage: Stage, party: str,
                mutation: str | None = None) -> SetAnnouncement:
    """Draw one good set, ``N - 1`` bad sets and an extra erased set.

    The good set is a uniform ``size``-subset of the unerased positions in
    ``domain``; the bad sets and the extra set are disjoint uniform subsets
    of the erased positions.
    """
    if not 0 <= choice < N:
        raise ValueError(f"choice must lie in [0, {N}), got {choice!r}")
    erased, unerased = erasure_partition(received, domain)
    need = (N - 1) * size + extra
    if len(erased) < need or len(unerased) < size:
        raise ProtocolAbort(
            stage, party,
            f"{len(erased)} erased (need {need}), {len(unerased)} unerased (need {size})")
    good = IndexSet(_sample(unerased, size, rng))
    blocks = _blocks(_sample(erased, need, rng), [size] * (N - 1) + [extra])
    return SetAnnouncement(sets=assign_slots(choice, good, blocks[:-1]), extra=blocks[-1],
                           order=emission_order(N, choice, mutation))


def bob_select(y: ReceivedSequence, u: int, plan: SizePlan, rng: np.random.Generator,
               mutation: str | None = None) -> SetAnnouncement:
    """Bob's announcement ``(L_0..L_{N-1}, C)``.

    Raises
    ------
    ProtocolAbort
        Stage ``BobSizeCheck`` when ``y`` has too few erased or unerased
        positions for the plan.
    """
    if len(y) != plan.n:
        raise ValueError(f"received sequence has length {len(y)}, plan expects {plan.n}")
    return select_sets(y, IndexSet.from_sorted(np.arange(plan.n)), u, plan.N, plan.size_L,
                       plan.size_C, rng, Stage.BOB_SIZE_CHECK, BOB, mutation)


def cathy_select(z: ReceivedSequence, L_union: IndexSet, w: int, plan: SizePlan,
                 rng: np.random.Generator) -> SetAnnouncement:
    """Cathy's announcement ``(L~_0..L~_{N-1}, C~)`` over Bob's sets."""
    return select_sets(z, L_union, w, plan.N, plan.size_Lt, plan.size_Ct, rng,
                       Stage.CATHY_SIZE_CHECK, CATHY)


def key_indices(L, Lt, m_dot: int) -> list[IndexSet]:
    """Pad positions per slot: the first ``m_dot`` of ``L_j & L~_j``.

    Raises
    ------
    ProtocolAbort
        Stage ``AliceIntersectionCheck`` if some intersection is too small.
    """
    out = []
    for j, (a, b) in enumerate(zip(L, Lt)):
        common = a.intersection(b)
        if len(common) < m_dot:
            raise ProtocolAbort(Stage.ALICE_INTERSECTION_CHECK, ALICE,
                                f"slot {j} has {len(common)} common positions, need {m_dot}")
        out.append(common.first(m_dot))
    return out


@dataclass(frozen=True)
class DataKeys:
    keys: tuple[np.ndarray, ...]
    indices: tuple[IndexSet, ...]


@dataclass(frozen=True)
class CipherTexts:
    m_list: tuple[np.ndarray, ...]

    def payload(self) -> bytes:
        return b"".join(encode_bits(m) for m in self.m_list)


@dataclass(frozen=True)
class Database:
    """N equal-length files; the first ``m_dot`` bits of each go under the pads."""

    files: np.ndarray

    def __post_init__(self):
        arr = np.array(self.files, dtype=np.uint8, copy=True)
        if arr.ndim != 2 or arr.shape[0] < 2:
            raise ValueError("files must be a (N, m) array with N >= 2")
        if arr.size and arr.max() > 1:
            raise ValueError("files must contain bits")
        arr.setflags(write=False)
        object.__setattr__(self, "files", arr)

    @classmethod
    def from_strings(cls, files) -> "Database":
        lengths = {len(f) for f in files}
        if len(lengths) != 1:
            raise ValueError("all files must have equal length")
        return cls(np.array([as_bits(f) for f in files], dtype=np.uint8))

    @classmethod
    def random(cls, N: int, m: int, rng: np.random.Generator) -> "Database":
        return cls(rng.integers(0, 2, size=(N, m), dtype=np.uint8))

    @property
    def N(self) -> int:
        return int(self.files.shape[0])

    @property
    def m(self) -> int:
        return int(self.files.shape[1])

    def head(self, j: int, m_dot: int) -> np.ndarray:
        return self.files[j, :m_dot]

    def tail(self, j: int, m_dot: int) -> np.ndarray:
        return self.files[j, m_dot:]


def alice_form_keys(x, L, Lt, plan: SizePlan) -> DataKeys:
    """Restrict ``x`` to each ``L_j & L~_j``, keeping the first ``m_dot`` positions."""
    x = as_bits(x)
    idx = key_indices(L, Lt, plan.m_dot)
    return DataKeys(keys=tuple(x[s.indices] for s in idx), indices=tuple(idx))


def alice_encrypt(db: Database, keys: DataKeys) -> CipherTexts:
    """``M_j`` is the head of file ``j`` XOR its pad."""
    if db.N != len(keys.keys):
        raise ValueError(f"{db.N} files but {len(keys.keys)} keys")
    out = []
    for j, key in enumerate(keys.keys):
        head = db.head(j, key.size)
        if head.size != key.size:
            raise ValueError(f"file {j} is shorter than its pad ({head.size} < {key.size})")
        out.append(head ^ key)
    return CipherTexts(tuple(out))


def receiver_decode(m_j, received: ReceivedSequence, my_key_indices: IndexSet) -> np.ndarray:
    """Unpad ``m_j`` with the receiver's own bits at ``my_key_indices``."""
    m_j = as_bits(m_j)
    if len(my_key_indices) < m_j.size:
        raise ProtocolLogicError("key set shorter than the ciphertext")
    try:
        key = received.read(my_key_indices.first(m_j.size))
    except ValueError as exc:
        raise ProtocolLogicError(str(exc)) from None
    return m_j ^ key
