"""Three-party private transfer over a broadcast erasure channel."""

from .ot import erasure_ot, ot_receive, ot_request, ot_respond
from .parties import (EXPOSE_CHOICE, MUTATIONS, CipherTexts, Database, DataKeys, ProtocolAbort,
                      ProtocolLogicError, SetAnnouncement, Stage, alice_encrypt,
                      alice_form_keys, assign_slots, bob_select, cathy_select, key_indices,
                      receiver_decode)
from .record import run_record
from .run import (ABORTED, COMPLETED, RunOutcome, RunSeeds, Views, execute, random_database,
                  run_protocol)
from .transcript import ALICE, BOB, CATHY, Message, Transcript

__all__ = [
    "ABORTED", "ALICE", "BOB", "CATHY", "COMPLETED", "EXPOSE_CHOICE", "MUTATIONS",
    "CipherTexts", "DataKeys", "Database", "Message", "ProtocolAbort", "ProtocolLogicError",
    "RunOutcome", "RunSeeds", "SetAnnouncement", "Stage", "Transcript", "Views",
    "alice_encrypt", "alice_form_keys", "assign_slots", "bob_select", "cathy_select",
    "erasure_ot", "execute", "key_indices", "ot_receive", "ot_request", "ot_respond",
    "random_database", "receiver_decode", "run_protocol", "run_record",
]
