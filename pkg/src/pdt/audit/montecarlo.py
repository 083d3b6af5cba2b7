"""Monte Carlo statistics of full-size protocol runs."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..protocol import Database, RunSeeds, run_protocol
from ..randomness import derive_rng, derive_seed
from ..rates import ProtocolParams, size_plan
from .joint import empirical_distribution, total_variation


@dataclass
class TrialResult:
    u: int
    w: int
    status: str
    abort_stage: str | None
    decode_ok: bool | None
    achieved_rate: float
    digest: tuple


@dataclass
class MonteCarloStats:
    trials: int
    completed: int
    abort_rate: float
    abort_by_stage: dict
    decode_errors: int
    decode_error_rate: float
    mean_achieved_rate: float
    min_achieved_rate: float
    transcript_tv: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def structural_digest(outcome) -> tuple:
    """Sender, tag and length of each message plus the abort stage; no payloads."""
    return outcome.transcript.structure() + (outcome.abort_stage,)


def run_trial(params: ProtocolParams, seed: int, index: int) -> TrialResult:
    """One run with uniform choices and files, all derived from ``(seed, index)``."""
    plan = size_plan(params)
    trial_seed = derive_seed(seed, "trial", index)
    rng = derive_rng(trial_seed, "inputs")
    u, w = (int(v) for v in rng.integers(0, params.N, size=2))
    db = Database(rng.integers(0, 2, size=(params.N, plan.m_total), dtype=np.uint8))
    out = run_protocol(params, db, u, w, RunSeeds.from_master(trial_seed), plan=plan)
    ok = None
    if out.completed:
        ok = bool(np.array_equal(out.k_hat_u, db.files[u])
                  and np.array_equal(out.k_hat_w, db.files[w]))
    return TrialResult(u, w, out.status, out.abort_stage, ok, out.achieved_rate,
                       structural_digest(out))


def _run_range(args):
    params, seed, start, stop = args
    return [run_trial(params, seed, i) for i in range(start, stop)]


def summarize(results: list[TrialResult], N: int) -> MonteCarloStats:
    trials = len(results)
    done = [r for r in results if r.status == "Completed"]
    stages: dict = {}
    for r in results:
        if r.abort_stage is not None:
            stages[r.abort_stage] = stages.get(r.abort_stage, 0) + 1
    errors = sum(1 for r in done if not r.decode_ok)
    rates = [r.achieved_rate for r in done]
    tv = {}
    for name, attr in (("U", "u"), ("W", "w")):
        dists = [empirical_distribution(r.digest for r in results if getattr(r, attr) == c)
                 for c in range(N)]
        for a in range(N):
            for b in range(a + 1, N):
                if dists[a] and dists[b]:
                    tv[f"{name}:{a}-{b}"] = total_variation(dists[a], dists[b])
    return MonteCarloStats(
        trials=trials, completed=len(done),
        abort_rate=(trials - len(done)) / trials if trials else 0.0,
        abort_by_stage=stages, decode_errors=errors,
        decode_error_rate=errors / len(done) if done else 0.0,
        mean_achieved_rate=float(np.mean(rates)) if rates else 0.0,
        min_achieved_rate=float(min(rates)) if rates else 0.0,
        transcript_tv=tv)


def monte_carlo_trials(params: ProtocolParams, trials: int, seed: int,
                       workers: int = 1) -> list[TrialResult]:
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if workers <= 1:
        return _run_range((params, seed, 0, trials))
    step = -(-trials // workers)
    chunks = [(params, seed, i, min(i + step, trials)) for i in range(0, trials, step)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [r for part in pool.map(_run_range, chunks) for r in part]


def monte_carlo_stats(params: ProtocolParams, trials: int, seed: int,
                      workers: int = 1) -> MonteCarloStats:
    """Run ``trials`` independent seeded executions and summarize them.

    Trial ``i`` uses seed ``derive_seed(seed, "trial", i)``, so results do
    not depend on ``workers``.

    Returns
    -------
    MonteCarloStats
        Abort rate (overall and per stage), decode error rate over completed
        runs, achieved rates, and total variation between the empirical
        distributions of the structural transcript digest for each pair of
        choice values.
    """
    return summarize(monte_carlo_trials(params, trials, seed, workers), params.N)
