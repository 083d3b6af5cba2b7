"""JSON run records."""

from __future__ import annotations

from ..channel import bits_to_str
from .run import RunOutcome
from .transcript import BIT_TAGS, SET_TAGS, decode_bits, decode_sets


def _payload_view(msg) -> object:
    if msg.tag in SET_TAGS:
        return [{"slot": slot, "indices": s.to_list()} for slot, s in decode_sets(msg.payload)]
    if msg.tag in BIT_TAGS:
        return bits_to_str(decode_bits(msg.payload))
    return msg.payload.decode("ascii", errors="replace")


def run_record(outcome: RunOutcome, dump: bool = False) -> dict:
    """Summarize a run as a JSON-serializable dict.

    With ``dump`` the record also carries every payload, the channel input
    and both received sequences (symbols ``'0'``, ``'1'``, ``'e'``).
    """
    plan = outcome.plan
    rec = {
        "params": outcome.params.to_dict() if outcome.params is not None else None,
        "plan": plan.to_dict(),
        "seeds": outcome.seeds.to_dict() if outcome.seeds is not None else None,
        "status": outcome.status,
        "abort_stage": outcome.abort_stage,
        "abort_party": outcome.abort_party,
        "u": outcome.u,
        "w": outcome.w,
        "achieved_rate": outcome.achieved_rate,
        "m_total": plan.m_total,
        "transcript": [{"sender": m.sender, "tag": m.tag, "length": len(m)}
                       for m in outcome.transcript],
        "transcript_sha256": outcome.transcript.sha256(),
    }
    if dump:
        for entry, msg in zip(rec["transcript"], outcome.transcript):
            entry["payload"] = _payload_view(msg)
        rec["x"] = bits_to_str(outcome.x)
        rec["y"] = outcome.y.to_string()
        rec["z"] = outcome.z.to_string()
    return rec
