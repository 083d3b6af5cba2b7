"""Exact joint distribution of a protocol run at tiny block lengths.

The random inputs of a run split into a *structural* part (choices U and
W, both erasure patterns, every set selection) and two uniform strings (the
files K and the channel input X) that the structural part never looks at.
Whether a run aborts, what is announced and where each pad sits depend only
on the structural part, and the ciphertexts are XORs of K bits with X bits.
So the enumeration walks the structural outcomes in Python, stores one row
per outcome, and expands each row over every (K, X) pair with numpy only
when a query needs it.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from ..protocol.parties import MUTATIONS, Stage, emission_order
from ..protocol.transcript import (ABORT, ALICE, BOB, BOB_SETS, CATHY, CATHY_SETS, CIPHERTEXTS,
                                   OT_CIPHERTEXTS, OT_SETS)
from ..rates import SizePlan, exact
from .joint import JointDistribution, combine

DEFAULT_BUDGET = 10 ** 9

STAGE_CODES = {None: 0, Stage.BOB_SIZE_CHECK.value: 1, Stage.CATHY_SIZE_CHECK.value: 2,
               Stage.ALICE_INTERSECTION_CHECK.value: 3, Stage.OT_SIZE_CHECK.value: 4}

VIEWS = {"V_A": ("K", "X", "F"), "V_B": ("U", "Y", "F"), "V_C": ("W", "Z", "F")}


class BudgetExceeded(RuntimeError):
    """The enumeration would exceed the configured number of weighted atoms."""


@dataclass(frozen=True)
class TinyConfig:
    """Parameters small enough to enumerate every outcome of a run.

    Set sizes are given explicitly because the asymptotic size plan is
    infeasible at these lengths. Each file has ``m`` bits; the last
    ``m_ddot`` of them go through the embedded OT phase, which needs
    ``include_high_erasure`` together with positive ``size_C`` and
    ``size_Ct``.
    """

    n: int
    N: int = 2
    eps1: Fraction = Fraction(1, 2)
    eps2: Fraction = Fraction(1, 2)
    m: int = 1
    size_L: int = 1
    size_Lt: int = 1
    include_high_erasure: bool = False
    size_C: int = 0
    size_Ct: int = 0
    size_S: int | None = None
    size_St: int | None = None
    m_ddot: int = 0
    mutation: str | None = None
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        for name in ("eps1", "eps2"):
            value = exact(getattr(self, name))
            if not 0 <= value <= 1:
                raise ValueError(f"{name} must lie in [0, 1]")
            object.__setattr__(self, name, value)
        if self.n < 1 or self.N < 2 or self.m < 1:
            raise ValueError("need n >= 1, N >= 2 and m >= 1")
        if self.size_L < 1 or self.size_Lt < 1:
            raise ValueError("set sizes must be positive")
        if self.mutation is not None and self.mutation not in MUTATIONS:
            raise ValueError(f"unknown mutation {self.mutation!r}")
        if self.include_high_erasure:
            if self.m_ddot < 1 or self.size_C < 1 or self.size_Ct < 1:
                raise ValueError("the OT phase needs m_ddot, size_C and size_Ct positive")
        elif self.m_ddot or self.size_C or self.size_Ct:
            raise ValueError("OT-phase sizes given without include_high_erasure")
        if self.m_ddot > self.m:
            raise ValueError("m_ddot exceeds the file length")
        if self.size_S is None:
            object.__setattr__(self, "size_S", self.size_C)
        if self.size_St is None:
            object.__setattr__(self, "size_St", self.size_Ct)

    @property
    def m_dot(self) -> int:
        return self.m - self.m_ddot

    def plan(self) -> SizePlan:
        return SizePlan(n=self.n, N=self.N, r1=self.size_L / self.n,
                        r2=self.size_Lt / (self.N * self.size_L), size_L=self.size_L,
                        size_Lt=self.size_Lt, size_C=self.size_C, size_Ct=self.size_Ct,
                        size_S=self.size_S, size_St=self.size_St, m_dot=self.m_dot,
                        m_ddot=self.m_ddot)

    def atoms_per_outcome(self) -> int:
        return 2 ** (self.N * self.m) * 2 ** self.n

    def to_dict(self) -> dict:
        return {"n": self.n, "N": self.N, "eps1": str(self.eps1), "eps2": str(self.eps2),
                "m": self.m, "size_L": self.size_L, "size_Lt": self.size_Lt,
                "include_high_erasure": self.include_high_erasure, "size_C": self.size_C,
                "size_Ct": self.size_Ct, "size_S": self.size_S, "size_St": self.size_St,
                "m_ddot": self.m_ddot, "mutation": self.mutation, "budget": self.budget}


def high_erasure_tiny(**overrides) -> TinyConfig:
    """Smallest configuration found that exercises both OT exchanges."""
    base = dict(n=6, N=2, eps1=Fraction(2, 3), eps2=Fraction(2, 3), m=2, size_L=2, size_Lt=1,
                include_high_erasure=True, size_C=2, size_Ct=2, m_ddot=1)
    base.update(overrides)
    return TinyConfig(**base)


# --- combinatorics of a single selection ----------------------------------

def _blocks(pool: tuple, sizes: list[int]):
    """All ordered tuples of disjoint sorted blocks with the given sizes."""
    if not sizes:
        yield ()
        return
    for first in combinations(pool, sizes[0]):
        taken = set(first)
        rest = tuple(i for i in pool if i not in taken)
        for tail in _blocks(rest, sizes[1:]):
            yield (first,) + tail


def _selections(erased: tuple, unerased: tuple, choice: int, N: int, size: int, extra: int):
    """Equally likely outcomes ``(slots, extra_set)`` of one selection, or None on abort."""
    if len(erased) < (N - 1) * size + extra or len(unerased) < size:
        return None
    bad = list(_blocks(erased, [size] * (N - 1) + [extra]))
    out = []
    for good in combinations(unerased, size):
        for blocks in bad:
            slots = list(blocks[:-1])
            slots.insert(choice, good)
            out.append((tuple(slots), blocks[-1]))
    return out


def _pack(records) -> bytes:
    return b"".join(struct.pack(f"<II{len(s)}I", slot, len(s), *s) for slot, s in records)


def _bits_of(mask: int, domain) -> tuple[tuple, tuple]:
    erased = tuple(i for i in domain if mask >> i & 1)
    unerased = tuple(i for i in domain if not mask >> i & 1)
    return erased, unerased


# --- the enumerated joint ---------------------------------------------------

class _Builder:
    def __init__(self, cfg: TinyConfig):
        self.cfg = cfg
        self.limit = cfg.budget // cfg.atoms_per_outcome()
        self.rows = {k: [] for k in ("u", "w", "bmask", "cmask", "num", "cnt", "stage", "ann",
                                     "bob_ann", "cathy_ann", "L", "Lt", "nbits", "decode_ok")}
        self.pads: list[tuple] = []
        self.tables = {k: {} for k in ("ann", "bob_ann", "cathy_ann", "L", "Lt")}

    def intern(self, table: str, key) -> int:
        t = self.tables[table]
        return t.setdefault(key, len(t))

    def emit(self, u, w, bmask, cmask, weight, stage, messages, bob_key, cathy_key, L_key,
             Lt_key, pads=(), decode_ok=True):
        if len(self.pads) >= self.limit:
            raise BudgetExceeded(
                f"more than {self.cfg.budget:.3g} weighted atoms "
                f"({self.cfg.atoms_per_outcome()} per structural outcome)")
        r = self.rows
        r["u"].append(u)
        r["w"].append(w)
        r["bmask"].append(bmask)
        r["cmask"].append(cmask)
        r["num"].append(weight[0])
        r["cnt"].append(weight[1])
        r["stage"].append(STAGE_CODES[stage])
        r["ann"].append(self.intern("ann", tuple(messages)))
        r["bob_ann"].append(self.intern("bob_ann", bob_key))
        r["cathy_ann"].append(self.intern("cathy_ann", cathy_key))
        r["L"].append(self.intern("L", L_key))
        r["Lt"].append(self.intern("Lt", Lt_key))
        r["nbits"].append(sum(m[2] for m in messages if isinstance(m[2], int)))
        r["decode_ok"].append(decode_ok)
        self.pads.append(tuple(pads))


def _abort(party: str, stage: str):
    return (party, ABORT, stage.encode())


def enumerate_joint(cfg: TinyConfig) -> "EnumeratedJoint":
    """Enumerate every structural outcome of a run under ``cfg``.

    Raises
    ------
    BudgetExceeded
        If the number of weighted atoms (structural outcomes times all
        file and channel-input values) exceeds ``cfg.budget``.
    """
    n, N = cfg.n, cfg.N
    # every (U, W, Bob pattern, Cathy pattern) yields at least one outcome
    if N * N * 4 ** n * cfg.atoms_per_outcome() > cfg.budget:
        raise BudgetExceeded(
            f"at least {N * N * 4 ** n * cfg.atoms_per_outcome():.3g} weighted atoms, "
            f"budget {cfg.budget:.3g}")
    plan = cfg.plan()
    b = _Builder(cfg)
    # outcome probabilities are kept exact as (numerator, option count) pairs:
    # p = numerator / (N^2 d1^n d2^n * option count)
    a1, d1 = cfg.eps1.numerator, cfg.eps1.denominator
    a2, d2 = cfg.eps2.numerator, cfg.eps2.denominator
    bob_pat = [a1 ** e * (d1 - a1) ** (n - e) for e in range(n + 1)]
    cathy_pat = [a2 ** e * (d2 - a2) ** (n - e) for e in range(n + 1)]
    masks = range(2 ** n)
    popcount = [bin(c).count("1") for c in masks]
    positions = range(n)
    cathy_memo: dict = {}
    ct_dot = (ALICE, CIPHERTEXTS, N * plan.m_dot)
    ct_ddot = (ALICE, OT_CIPHERTEXTS, N * plan.m_ddot)

    for u, w in product(range(N), repeat=2):
        order = emission_order(N, u, cfg.mutation)
        for bmask in masks:
            b_er, b_un = _bits_of(bmask, positions)
            p_b = bob_pat[len(b_er)]
            options = _selections(b_er, b_un, u, N, plan.size_L, plan.size_C)
            if options is None:
                msg = _abort(BOB, Stage.BOB_SIZE_CHECK.value)
                for cmask in masks:
                    b.emit(u, w, bmask, cmask, (p_b * cathy_pat[popcount[cmask]], 1),
                           Stage.BOB_SIZE_CHECK.value, [msg], msg, None, None, None)
                continue
            cnt_b = len(options)
            for L, C in options:
                bob_msg = (BOB, BOB_SETS, _pack([(j, L[j]) for j in order] + [(N, C)]))
                union = tuple(sorted(i for s in L for i in s))
                for cmask in masks:
                    p_c = p_b * cathy_pat[popcount[cmask]]
                    c_er, c_un = _bits_of(cmask, union)
                    key = (w, union, c_er)
                    if key not in cathy_memo:
                        cathy_memo[key] = _selections(c_er, c_un, w, N, plan.size_Lt,
                                                      plan.size_Ct)
                    copts = cathy_memo[key]
                    if copts is None:
                        msg = _abort(CATHY, Stage.CATHY_SIZE_CHECK.value)
                        b.emit(u, w, bmask, cmask, (p_c, cnt_b), Stage.CATHY_SIZE_CHECK.value,
                               [bob_msg, msg], bob_msg, msg, (L, C), None)
                        continue
                    for Lt, Ct in copts:
                        _after_cathy(b, cfg, plan, u, w, bmask, cmask, (p_c, cnt_b * len(copts)),
                                     L, C, Lt, Ct, bob_msg, ct_dot, ct_ddot)
    return EnumeratedJoint(cfg, b)


def _after_cathy(b, cfg, plan, u, w, bmask, cmask, p, L, C, Lt, Ct, bob_msg, ct_dot, ct_ddot):
    N = cfg.N
    cathy_msg = (CATHY, CATHY_SETS, _pack([(j, Lt[j]) for j in range(N)] + [(N, Ct)]))
    msgs = [bob_msg, cathy_msg]
    common = [sorted(set(L[j]) & set(Lt[j])) for j in range(N)]
    if any(len(c) < plan.m_dot for c in common):
        msgs.append(_abort(ALICE, Stage.ALICE_INTERSECTION_CHECK.value))
        b.emit(u, w, bmask, cmask, p, Stage.ALICE_INTERSECTION_CHECK.value, msgs, bob_msg,
               cathy_msg, (L, C), (Lt, Ct))
        return
    T = [tuple(c[:plan.m_dot]) for c in common]
    pads = [i for t in T for i in t]
    msgs.append(ct_dot)
    ok = (not any(bmask >> i & 1 for i in T[u])) and not any(cmask >> i & 1 for i in T[w])
    if plan.m_ddot == 0:
        b.emit(u, w, bmask, cmask, p, None, msgs, bob_msg, cathy_msg, (L, C), (Lt, Ct),
               pads, ok)
        return

    m2 = plan.m_ddot
    St = sorted(Ct)[:plan.size_St]
    S = tuple(sorted(C)[:plan.size_S])
    sources = []
    for j in range(N):
        pool = [i for i in St if i in L[j]]
        sources.append(tuple(i for i in pool if bool(bmask >> i & 1) == (j != u)))
    if any(len(src) < m2 for src in sources):
        msgs.append(_abort(BOB, Stage.OT_SIZE_CHECK.value))
        b.emit(u, w, bmask, cmask, p, Stage.OT_SIZE_CHECK.value, msgs, bob_msg, cathy_msg,
               (L, C), (Lt, Ct), pads, ok)
        return
    bob_ot = list(product(*(list(combinations(src, m2)) for src in sources)))
    s_er, s_un = _bits_of(cmask, S)
    cathy_ot = _selections(s_er, s_un, w, N, m2, 0)
    for sets in bob_ot:
        m_b = msgs + [(BOB, OT_SETS, _pack(enumerate(sets))), ct_ddot]
        pads_b = pads + [i for s in sets for i in s]
        p_b = (p[0], p[1] * len(bob_ot))
        if cathy_ot is None:
            m_b.append(_abort(CATHY, Stage.OT_SIZE_CHECK.value))
            b.emit(u, w, bmask, cmask, p_b, Stage.OT_SIZE_CHECK.value, m_b, bob_msg,
                   cathy_msg, (L, C), (Lt, Ct), pads_b, ok)
            continue
        for csets, _ in cathy_ot:
            m_c = m_b + [(CATHY, OT_SETS, _pack(enumerate(csets))), ct_ddot]
            ok_c = (ok and not any(bmask >> i & 1 for i in sets[u])
                    and not any(cmask >> i & 1 for i in csets[w]))
            b.emit(u, w, bmask, cmask, (p_b[0], p_b[1] * len(cathy_ot)), None, m_c, bob_msg, cathy_msg,
                   (L, C), (Lt, Ct), pads_b + [i for s in csets for i in s], ok_c)


class EnumeratedJoint(JointDistribution):
    """Joint of all run variables, stored per structural outcome.

    Variables
    ---------
    ``U``, ``W``, ``J`` (1 when the run completes), ``K`` (all files),
    ``K_U``, ``K_W``, ``K_notU``, ``K_notW``, ``K_notUW`` (files outside the
    named choices, concatenated in index order), ``X``, ``Y``, ``Z``, ``F``
    (the full transcript), ``L`` and ``Lt`` (Bob's and Cathy's announced
    sets), ``bob_ann`` and ``cathy_ann`` (their announcement messages as
    written, including order), ``E_B`` and ``E_C`` (erasure patterns).
    The views ``V_A``, ``V_B`` and ``V_C`` expand to their parts.
    """

    def __init__(self, cfg: TinyConfig, builder: _Builder):
        self.cfg = cfg
        self.plan = cfg.plan()
        r = builder.rows
        self.u = np.array(r["u"], dtype=np.int64)
        self.w = np.array(r["w"], dtype=np.int64)
        self.bmask = np.array(r["bmask"], dtype=np.int64)
        self.cmask = np.array(r["cmask"], dtype=np.int64)
        N, m, n = cfg.N, cfg.m, cfg.n
        nums, cnts = r["num"], r["cnt"]
        common = math.lcm(*set(cnts)) if cnts else 1
        self.denominator = (N * N * cfg.eps1.denominator ** n * cfg.eps2.denominator ** n
                            * common)
        exact_w = [a * (common // c) for a, c in zip(nums, cnts)]
        self.exact_mass = Fraction(sum(exact_w), self.denominator)
        # integer weights make every aggregation below exact while sums stay under 2**53
        self.exact = self.denominator * cfg.atoms_per_outcome() < 2 ** 53
        self.weight = np.array(exact_w if self.exact else [0] * len(exact_w), dtype=np.float64)
        self.p = np.array([float(Fraction(a, self.denominator)) for a in exact_w],
                          dtype=np.float64)
        self.stage = np.array(r["stage"], dtype=np.int8)
        self.J = (self.stage == 0).astype(np.int64)
        self.ann = np.array(r["ann"], dtype=np.int64)
        self.bob_ann = np.array(r["bob_ann"], dtype=np.int64)
        self.cathy_ann = np.array(r["cathy_ann"], dtype=np.int64)
        self.L = np.array(r["L"], dtype=np.int64)
        self.Lt = np.array(r["Lt"], dtype=np.int64)
        self.nbits = np.array(r["nbits"], dtype=np.int64)
        self.decode_ok = np.array(r["decode_ok"], dtype=bool)
        self.P = N * self.plan.m_dot + (2 * N * self.plan.m_ddot if self.plan.m_ddot else 0)
        self.pads = np.full((len(builder.pads), max(self.P, 1)), -1, dtype=np.int16)
        for s, row in enumerate(builder.pads):
            self.pads[s, :len(row)] = row
        self.messages = [None] * len(builder.tables["ann"])
        for msgs, idx in builder.tables["ann"].items():
            self.messages[idx] = msgs
        self.n_ann = len(self.messages)
        self.sizes = {k: len(t) for k, t in builder.tables.items()}
        self._index = None

        # which file bit each ciphertext bit carries, in transcript order
        src = [(j, b) for j in range(N) for b in range(self.plan.m_dot)]
        if self.plan.m_ddot:
            tail = [(j, self.plan.m_dot + b) for j in range(N) for b in range(self.plan.m_ddot)]
            src += tail + tail
        self.bit_sources = src
        ks = np.arange(2 ** (N * m), dtype=np.int64)
        self.files = np.stack([(ks >> (j * m)) & ((1 << m) - 1) for j in range(N)], axis=1)
        self.kproj = np.zeros(ks.size, dtype=np.int64)
        for i, (j, bit) in enumerate(src):
            self.kproj |= ((ks >> (j * m + bit)) & 1) << (self.P - 1 - i)
        self.not_uw = np.zeros((ks.size, N, N), dtype=np.int64)
        for a in range(N):
            for c in range(N):
                rank = 0
                for j in range(N):
                    if j not in (a, c):
                        self.not_uw[:, a, c] |= self.files[:, j] << (rank * m)
                        rank += 1
        self.not_u = self.not_uw[:, np.arange(N), np.arange(N)]

    # -- bookkeeping ---------------------------------------------------------

    @property
    def num_outcomes(self) -> int:
        return int(self.p.size)

    @property
    def num_atoms(self) -> int:
        return self.num_outcomes * self.cfg.atoms_per_outcome()

    def unit_columns(self) -> dict:
        return {"U": self.u, "W": self.w, "J": self.J, "stage": self.stage, "p": self.p,
                "E_B": self.bmask, "E_C": self.cmask, "L": self.L, "Lt": self.Lt,
                "bob_ann": self.bob_ann, "cathy_ann": self.cathy_ann,
                "decode_ok": self.decode_ok}

    # -- columns over (outcome, K, X) ------------------------------------------

    def _column(self, name: str, sel: np.ndarray):
        cfg, n, N, m = self.cfg, self.cfg.n, self.cfg.N, self.cfg.m
        K, X = 2 ** (N * m), 2 ** n
        ks = np.arange(K, dtype=np.int64)[None, :, None]
        xs = np.arange(X, dtype=np.int64)[None, None, :]

        def per_outcome(arr):
            return arr[sel][:, None, None]

        u, w = self.u[sel], self.w[sel]
        if name == "U":
            return per_outcome(self.u), N
        if name == "W":
            return per_outcome(self.w), N
        if name == "J":
            return per_outcome(self.J), 2
        if name == "K":
            return ks, K
        if name == "X":
            return xs, X
        if name in ("K_U", "K_W"):
            choice = u if name == "K_U" else w
            return self.files[:, choice].T[:, :, None], 2 ** m
        if name in ("K_notU", "K_notW"):
            choice = u if name == "K_notU" else w
            return self.not_u[:, choice].T[:, :, None], 2 ** ((N - 1) * m)
        if name == "K_notUW":
            return self.not_uw[:, u, w].T[:, :, None], 2 ** ((N - 1) * m)
        if name in ("Y", "Z"):
            mask = per_outcome(self.bmask if name == "Y" else self.cmask)
            return (mask << n) | (xs & ~mask), 4 ** n
        if name == "E_B":
            return per_outcome(self.bmask), X
        if name == "E_C":
            return per_outcome(self.cmask), X
        if name == "F":
            return self._transcript_column(sel), self.n_ann << self.P
        if name in ("L", "Lt", "bob_ann", "cathy_ann"):
            return per_outcome(getattr(self, name)), self.sizes[name]
        raise KeyError(f"unknown variable {name!r}")

    def _transcript_column(self, sel):
        P = self.P
        xs = np.arange(2 ** self.cfg.n, dtype=np.int64)[None, :]
        pad = np.zeros((sel.size, xs.size), dtype=np.int64)
        pos = self.pads[sel].astype(np.int64)
        for i in range(P):
            pi = pos[:, i:i + 1]
            bit = (xs >> np.maximum(pi, 0)) & 1
            pad |= np.where(pi >= 0, bit, 0) << (P - 1 - i)
        nb = self.nbits[sel]
        keep = ((np.int64(1) << nb) - 1) << (P - nb)
        body = (self.kproj[None, :, None] ^ pad[:, None, :]) & keep[:, None, None]
        return (self.ann[sel] << P)[:, None, None] | body

    def keys(self, groups, given=None):
        mask = (np.ones(self.p.size, dtype=bool) if given is None
                else np.asarray(given(self.unit_columns()), dtype=bool))
        sel = np.flatnonzero(mask)
        shape = (sel.size, 2 ** (self.cfg.N * self.cfg.m), 2 ** self.cfg.n)
        out = []
        for group in groups:
            names = []
            for name in group:
                for part in VIEWS.get(name, (name,)):
                    if part not in names:
                        names.append(part)
            key = combine(self._column(name, sel) for name in names)
            out.append(np.broadcast_to(key, shape).ravel())
        per_row = self.weight[sel] if self.exact else self.p[sel] / (shape[1] * shape[2])
        weights = np.broadcast_to(per_row[:, None, None], shape)
        return out, weights.ravel()

    # -- single atoms ----------------------------------------------------------

    def transcript_of(self, s: int, k: int, x: int) -> list[tuple[str, str, bytes]]:
        """Messages of outcome ``s`` with file value ``k`` and channel input ``x``."""
        P = self.P
        pos = self.pads[s]
        bits = []
        for i, (j, bit) in enumerate(self.bit_sources):
            if pos[i] < 0:
                break
            bits.append(((k >> (j * self.cfg.m + bit)) & 1) ^ ((x >> int(pos[i])) & 1))
        out, cursor = [], 0
        for sender, tag, payload in self.messages[self.ann[s]]:
            if isinstance(payload, int):
                chunk = bits[cursor:cursor + payload]
                cursor += payload
                payload = bytes(ord("0") + v for v in chunk)
            out.append((sender, tag, payload))
        assert cursor <= P
        return out

    def locate(self, u: int, w: int, bmask: int, cmask: int, messages) -> int:
        """Index of the outcome whose announcements match ``messages``.

        Ciphertext payloads in ``messages`` are compared by length only.
        Raises KeyError when no outcome matches.
        """
        if self._index is None:
            self._index = {(int(a), int(b), int(c), int(d), int(e)): s for s, (a, b, c, d, e)
                           in enumerate(zip(self.u, self.w, self.bmask, self.cmask, self.ann))}
            self._ann_ids = {msgs: i for i, msgs in enumerate(self.messages)}
        skeleton = tuple((snd, tag, len(pl) if tag in (CIPHERTEXTS, OT_CIPHERTEXTS) else pl)
                         for snd, tag, pl in messages)
        return self._index[(u, w, bmask, cmask, self._ann_ids[skeleton])]


def mass_is_one(joint: EnumeratedJoint, tol: float = 1e-12) -> bool:
    return abs(math.fsum(joint.p.tolist()) - 1.0) <= tol and joint.exact_mass == 1
