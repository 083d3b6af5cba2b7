"""Privacy conditions evaluated on the exact joint."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ..protocol.parties import Stage
from .enumerate import STAGE_CODES, EnumeratedJoint, TinyConfig, enumerate_joint, mass_is_one
from .joint import mutual_information, total_variation

THRESHOLD = 1e-9


def completed(cols):
    return cols["J"] == 1


def completed_same_choice(cols):
    return (cols["J"] == 1) & (cols["U"] == cols["W"])


def completed_different_choice(cols):
    return (cols["J"] == 1) & (cols["U"] != cols["W"])


# (id, description, secret variables, observed variables, conditioning event)
CONDITIONS = [
    ("ach_3", "I(K_notU; V_B, V_C | U = W, J = 1)", ["K_notU"], ["V_B", "V_C"],
     completed_same_choice),
    ("ach_4", "I(U; V_A, V_C | J = 1)", ["U"], ["V_A", "V_C"], completed),
    ("ach_5", "I(W; V_A, V_B | J = 1)", ["W"], ["V_A", "V_B"], completed),
    ("ach_6", "I(U, W; V_A | J = 1)", ["U", "W"], ["V_A"], completed),
    ("ach_7", "I(W, K_notU; V_B | J = 1)", ["W", "K_notU"], ["V_B"], completed),
    ("ach_8", "I(U, K_notW; V_C | J = 1)", ["U", "K_notW"], ["V_C"], completed),
    ("ach_uw", "I(K_notUW; V_B, V_C | U != W, J = 1)", ["K_notUW"], ["V_B", "V_C"],
     completed_different_choice),
]


@dataclass
class ConditionResult:
    id: str
    description: str
    value: float
    threshold: float
    passed: bool


@dataclass
class PrivacyReport:
    """One entry per condition plus enumeration bookkeeping.

    ``p_complete`` is ``P(J = 1)``; every condition is conditioned on it.
    """

    config: dict
    outcomes: int
    atoms: int
    mass: float
    mass_ok: bool
    p_complete: float
    entries: list[ConditionResult] = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return self.mass_ok and all(e.passed for e in self.entries)

    def entry(self, cid: str) -> ConditionResult:
        for e in self.entries:
            if e.id == cid:
                return e
        raise KeyError(cid)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["all_pass"] = self.all_pass
        return out


def decode_error_probability(joint: EnumeratedJoint) -> float:
    """``P(some receiver cannot unpad its file | J = 1)``.

    Unpadding reads the receiver's own channel output at the pad positions,
    so it recovers the file for every K and X exactly when none of those
    positions is erased for that receiver.
    """
    done = joint.J == 1
    p_done = math.fsum(joint.p[done].tolist())
    return math.fsum(joint.p[done & ~joint.decode_ok].tolist()) / p_done


def privacy_report(cfg: TinyConfig, joint: EnumeratedJoint | None = None,
                   threshold: float = THRESHOLD) -> PrivacyReport:
    """Evaluate every correctness and privacy condition exactly under ``cfg``.

    Conditions whose conditioning event is impossible (for example
    ``U != W`` cannot co-occur with files outside both choices when
    ``N = 2``) evaluate to 0.
    """
    joint = enumerate_joint(cfg) if joint is None else joint
    mass = math.fsum(joint.p.tolist())
    report = PrivacyReport(config=cfg.to_dict(), outcomes=joint.num_outcomes,
                           atoms=joint.num_atoms, mass=mass, mass_ok=mass_is_one(joint),
                           p_complete=joint.probability(completed))
    err = decode_error_probability(joint)
    report.entries.append(ConditionResult("ach_1", "P(K_hat_U != K_U or K_hat_W != K_W | J = 1)",
                                          err, threshold, err <= threshold))
    for cid, text, left, right, given in CONDITIONS:
        if joint.probability(given) == 0:
            value = 0.0
        else:
            value = mutual_information(joint, left, right, given)
        report.entries.append(ConditionResult(cid, text, value, threshold, value <= threshold))
    return report


def bob_announced(cols):
    return cols["stage"] != STAGE_CODES[Stage.BOB_SIZE_CHECK.value]


def cathy_announced(cols):
    return ~np.isin(cols["stage"], [STAGE_CODES[Stage.BOB_SIZE_CHECK.value],
                                    STAGE_CODES[Stage.CATHY_SIZE_CHECK.value]])


def announcement_tv(joint: EnumeratedJoint, party: str = "Bob", given=None) -> float:
    """Largest total variation between announcement distributions for two choices.

    Compares ``P(sets as written | U = a, E)`` with the same for ``U = b``
    (``W`` for Cathy), where ``E`` is the event that the party announced
    sets at all, or ``given`` if supplied.
    """
    if party not in ("Bob", "Cathy"):
        raise ValueError(f"party must be Bob or Cathy, got {party!r}")
    choice = joint.u if party == "Bob" else joint.w
    ann = joint.bob_ann if party == "Bob" else joint.cathy_ann
    if given is None:
        given = bob_announced if party == "Bob" else cathy_announced
    mask = np.asarray(given(joint.unit_columns()), dtype=bool)
    dists = []
    for c in range(joint.cfg.N):
        sel = mask & (choice == c)
        sums = np.bincount(ann[sel], weights=joint.weight[sel] if joint.exact else joint.p[sel])
        scale = float(np.sum(sums))
        dists.append({k: float(v) / scale for k, v in enumerate(sums) if v > 0})
    return max((total_variation(dists[a], dists[b])
                for a in range(len(dists)) for b in range(a + 1, len(dists))), default=0.0)
