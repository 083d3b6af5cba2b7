"""End-to-end execution of one protocol instance."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..channel import ChannelConfig, ReceivedSequence, broadcast
from ..randomness import derive_rng, derive_seed
from ..rates import ProtocolParams, SizePlan, size_plan
from .ot import erasure_ot
from .parties import (Database, ProtocolAbort, alice_encrypt, alice_form_keys, bob_select,
                      cathy_select, key_indices, receiver_decode)
from .transcript import ABORT, ALICE, BOB, BOB_SETS, CATHY, CATHY_SETS, CIPHERTEXTS, Transcript

COMPLETED, ABORTED = "Completed", "Aborted"


@dataclass(frozen=True)
class RunSeeds:
    """Independent seeds for the channel and for each party's private randomness."""

    channel: int
    bob: int
    cathy: int
    alice: int

    @classmethod
    def from_master(cls, seed: int) -> "RunSeeds":
        return cls(*(derive_seed(seed, name) for name in ("channel", "bob", "cathy", "alice")))

    def to_dict(self) -> dict:
        return {"channel": self.channel, "bob": self.bob, "cathy": self.cathy,
                "alice": self.alice}


@dataclass(frozen=True)
class Views:
    """What each party holds at the end: its inputs, its channel output, the transcript."""

    alice: tuple
    bob: tuple
    cathy: tuple


@dataclass
class RunOutcome:
    status: str
    u: int
    w: int
    plan: SizePlan
    transcript: Transcript
    views: Views
    x: np.ndarray
    y: ReceivedSequence
    z: ReceivedSequence
    abort_stage: str | None = None
    abort_party: str | None = None
    k_hat_u: np.ndarray | None = None
    k_hat_w: np.ndarray | None = None
    achieved_rate: float = 0.0
    sets: dict = field(default_factory=dict)
    params: ProtocolParams | None = None
    seeds: RunSeeds | None = None

    @property
    def completed(self) -> bool:
        return self.status == COMPLETED


def draw_input(seed: int, n: int) -> np.ndarray:
    """Alice's uniform channel input."""
    return derive_rng(seed, "alice/x").integers(0, 2, size=n, dtype=np.uint8)


def execute(plan: SizePlan, eps1: float, eps2: float, db: Database, u: int, w: int,
            seeds: RunSeeds, mutation: str | None = None, x=None) -> RunOutcome:
    """Run the protocol under an explicit size plan.

    ``x`` overrides Alice's channel input, which is otherwise drawn from
    ``seeds.alice``.
    """
    N, n = plan.N, plan.n
    if db.N != N:
        raise ValueError(f"database has {db.N} files, plan expects {N}")
    if db.m != plan.m_total:
        raise ValueError(f"file length {db.m} differs from m_total {plan.m_total}")
    for name, c in (("u", u), ("w", w)):
        if not 0 <= c < N:
            raise ValueError(f"{name} must lie in [0, {N}), got {c!r}")

    x = draw_input(seeds.alice, n) if x is None else np.asarray(x, dtype=np.uint8)
    y, z = broadcast(x, ChannelConfig(eps1, eps2, seeds.channel))
    bob_rng = derive_rng(seeds.bob, "bob")
    cathy_rng = derive_rng(seeds.cathy, "cathy")
    transcript = Transcript()
    sets: dict = {}
    views = Views(alice=(db.files, x, transcript), bob=(u, y, transcript),
                  cathy=(w, z, transcript))
    outcome = RunOutcome(status=COMPLETED, u=u, w=w, plan=plan, transcript=transcript,
                         views=views, x=x, y=y, z=z, sets=sets, seeds=seeds)
    try:
        bob = bob_select(y, u, plan, bob_rng, mutation)
        transcript.append(BOB, BOB_SETS, bob.payload())
        L, C = bob
        sets["L"], sets["C"] = L, C

        cathy = cathy_select(z, bob.union(), w, plan, cathy_rng)
        transcript.append(CATHY, CATHY_SETS, cathy.payload())
        Lt, Ct = cathy
        sets["Lt"], sets["Ct"] = Lt, Ct

        keys = alice_form_keys(x, L, Lt, plan)
        sets["T"] = list(keys.indices)
        cts = alice_encrypt(db, keys)
        transcript.append(ALICE, CIPHERTEXTS, cts.payload())

        # each receiver recomputes its pad positions from the public sets
        public_pads = key_indices(L, Lt, plan.m_dot)
        k_u = receiver_decode(cts.m_list[u], y, public_pads[u])
        k_w = receiver_decode(cts.m_list[w], z, public_pads[w])

        if plan.m_ddot > 0:
            St, S = Ct.first(plan.size_St), C.first(plan.size_S)
            sets["St"], sets["S"] = St, S
            tails = [db.tail(j, plan.m_dot) for j in range(N)]
            pools = [St.intersection(Lj) for Lj in L]
            tail_u = erasure_ot(x, y, St, tails, u, bob_rng, party=BOB, pools=pools,
                                transcript=transcript)
            tail_w = erasure_ot(x, z, S, tails, w, cathy_rng, party=CATHY,
                                transcript=transcript)
            k_u = np.concatenate([k_u, tail_u])
            k_w = np.concatenate([k_w, tail_w])
    except ProtocolAbort as abort:
        transcript.append(abort.party, ABORT, abort.stage.value.encode())
        outcome.status = ABORTED
        outcome.abort_stage = abort.stage.value
        outcome.abort_party = abort.party
        return outcome

    outcome.k_hat_u, outcome.k_hat_w = k_u, k_w
    outcome.achieved_rate = plan.m_total / n
    return outcome


def run_protocol(params: ProtocolParams, db: Database, u: int, w: int, seeds: RunSeeds,
                 plan: SizePlan | None = None, mutation: str | None = None) -> RunOutcome:
    """Execute one instance of the private transfer.

    Parameters
    ----------
    params : ProtocolParams
        Block length, file count, erasure probabilities and slack.
    db : Database
        Alice's files, each of length ``plan.m_total``.
    u, w : int
        Bob's and Cathy's file choices.
    seeds : RunSeeds
        Seeds for the channel and for each party.
    plan : SizePlan, optional
        Overrides the plan derived from ``params``.
    mutation : str, optional
        Deliberately broken variant used to validate the privacy audit.

    Returns
    -------
    RunOutcome
        Completed with both decoded files, or Aborted with the stage.
    """
    plan = size_plan(params) if plan is None else plan
    out = execute(plan, params.eps1, params.eps2, db, u, w, seeds, mutation)
    out.params = params
    return out


def random_database(plan: SizePlan, seed: int) -> Database:
    return Database.random(plan.N, plan.m_total, derive_rng(seed, "database"))

