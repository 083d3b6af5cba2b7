"""Oblivious transfer of one of N strings over erased channel positions.

The receiver splits a resource of positions, which the third party cannot
read, into N equal-size sets: the set at its choice from positions it
received, the others from positions it lost. It announces the sets, the
sender pads string ``j`` with its own bits at set ``j``, and the receiver
can unpad only the chosen string. Over an erasure channel each pad bit is
either fully known or fully unknown to the receiver, so no further
amplification is needed.
"""

from __future__ import annotations

import numpy as np

from ..channel import ReceivedSequence, as_bits, erasure_partition
from ..indexset import IndexSet
from .parties import ProtocolAbort, ProtocolLogicError, Stage, _blocks, _sample, assign_slots
from .transcript import ALICE, OT_CIPHERTEXTS, OT_SETS, Transcript, encode_bits, encode_sets


def ot_request(received: ReceivedSequence, resource: IndexSet, choice: int, N: int,
               size: int, rng: np.random.Generator, party: str,
               pools=None) -> tuple[IndexSet, ...]:
    """Receiver side: draw the N announced sets.

    Parameters
    ----------
    pools : list of IndexSet, optional
        If given, set ``j`` is drawn from ``pools[j]`` (each a subset of the
        resource) instead of from the whole resource. Drawing set ``j``
        from a slot-specific pool keeps each announced set inside positions
        that are already public knowledge for that slot.
    """
    if not 0 <= choice < N:
        raise ValueError(f"choice must lie in [0, {N}), got {choice!r}")
    if pools is None:
        erased, unerased = erasure_partition(received, resource)
        if len(unerased) < size or len(erased) < (N - 1) * size:
            raise ProtocolAbort(Stage.OT_SIZE_CHECK, party,
                                f"{len(unerased)} unerased, {len(erased)} erased in resource")
        good = IndexSet(_sample(unerased, size, rng))
        bad = _blocks(_sample(erased, (N - 1) * size, rng), [size] * (N - 1))
        return assign_slots(choice, good, bad)

    if len(pools) != N:
        raise ValueError("need one pool per slot")
    sets = []
    for j, pool in enumerate(pools):
        erased, unerased = erasure_partition(received, pool.intersection(resource))
        src = unerased if j == choice else erased
        if len(src) < size:
            raise ProtocolAbort(Stage.OT_SIZE_CHECK, party,
                                f"slot {j} pool has {len(src)} usable positions, need {size}")
        sets.append(IndexSet(_sample(src, size, rng)))
    return tuple(sets)


def ot_respond(x, strings, sets) -> tuple[np.ndarray, ...]:
    """Sender side: pad string ``j`` with ``x`` at set ``j``."""
    x = as_bits(x)
    out = []
    for s, string in zip(sets, strings):
        string = as_bits(string)
        if string.size != len(s):
            raise ValueError(f"string length {string.size} differs from set size {len(s)}")
        out.append(string ^ x[s.indices])
    return tuple(out)


def ot_receive(ciphertexts, received: ReceivedSequence, sets, choice: int) -> np.ndarray:
    """Receiver side: unpad the chosen string."""
    try:
        return as_bits(ciphertexts[choice]) ^ received.read(sets[choice])
    except ValueError as exc:
        raise ProtocolLogicError(str(exc)) from None


def erasure_ot(x, received: ReceivedSequence, resource: IndexSet, strings, choice: int,
               rng: np.random.Generator, *, party: str = "Bob", pools=None,
               transcript: Transcript | None = None) -> np.ndarray:
    """Run the two-message exchange and return the receiver's output.

    Parameters
    ----------
    x : array_like
        Sender's transmitted bits (only positions in ``resource`` are used).
    received : ReceivedSequence
        The receiver's view of ``x``.
    resource : IndexSet
        Positions available to this exchange.
    strings : sequence of array_like
        N equal-length strings held by the sender.
    choice : int
        Index of the string the receiver obtains.
    party : str
        Receiver name, used on the transcript and in aborts.
    pools : list of IndexSet, optional
        Per-slot pools, see :func:`ot_request`.
    transcript : Transcript, optional
        If given, both messages are appended to it.

    Raises
    ------
    ProtocolAbort
        Stage ``OTSizeCheck`` if the resource cannot supply the sets.
    """
    strings = [as_bits(s) for s in strings]
    N = len(strings)
    size = strings[0].size if strings else 0
    if any(s.size != size for s in strings):
        raise ValueError("OT strings must have equal length")
    sets = ot_request(received, resource, choice, N, size, rng, party, pools)
    if transcript is not None:
        transcript.append(party, OT_SETS, encode_sets(enumerate(sets)))
    cts = ot_respond(x, strings, sets)
    if transcript is not None:
        transcript.append(ALICE, OT_CIPHERTEXTS, b"".join(encode_bits(c) for c in cts))
    return ot_receive(cts, received, sets, choice)
