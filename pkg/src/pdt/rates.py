"""Capacity formulas, rate bounds and deterministic set-size plans.

All set-size arithmetic is carried out in exact rationals. Real-valued
inputs are converted through their shortest decimal representation, so
``0.7`` is treated as ``7/10`` and ``floor(1000 * (2 * 0.7 - 1))`` is 400
rather than 399.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from numbers import Real


class DomainError(ValueError):
    """An argument lies outside the domain of a formula."""


class InfeasibleParameters(ValueError):
    """Protocol parameters for which no size plan exists.

    The ``invariant`` attribute names the violated condition.
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        msg = f"infeasible parameters: {invariant}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


def exact(x) -> Fraction:
    """Convert ``x`` to an exact rational via its shortest decimal form."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(repr(float(x)))


def _check_probability(name, value):
    if not isinstance(value, (Real, Fraction)) or not 0 <= value <= 1:
        raise DomainError(f"{name} must lie in [0, 1], got {value!r}")


def capacity_2p(eps1: float, eps2: float) -> float:
    """2-private data transfer capacity for two files.

    Parameters
    ----------
    eps1, eps2 : float
        Erasure probabilities of the channels to the two receivers.

    Returns
    -------
    float
        ``min(eps2 (1 - eps1), eps1 (1 - eps2), eps1 eps2)``.
    """
    _check_probability("eps1", eps1)
    _check_probability("eps2", eps2)
    e1, e2 = exact(eps1), exact(eps2)
    return float(min(e2 * (1 - e1), e1 * (1 - e2), e1 * e2))


def high_erasure(eps1, eps2, N: int) -> bool:
    """True when both channels exceed the ``(N - 1) / N`` erasure threshold.

    In this regime each receiver has erased indices left over after forming
    its announced sets, and the embedded two-party OT phase adds rate.
    """
    e1, e2 = exact(eps1), exact(eps2)
    return e1 * N > N - 1 and e2 * N > N - 1


@dataclass(frozen=True)
class RateBounds:
    c2p: float | None
    r_ub: float
    r_lb: float
    r_ex: float

    def to_dict(self) -> dict:
        return asdict(self)


def rate_bounds(eps1: float, eps2: float, N: int = 2) -> RateBounds:
    """Upper and lower bounds on the capacity for a database of ``N`` files.

    The lower bound is piecewise in the two erasure probabilities, split at
    the threshold ``(N - 1) / N``. Above the threshold on both channels the
    bound gains the extra OT rate ``r_ex``; elsewhere ``r_ex`` is 0.
    ``c2p`` is only filled in for ``N == 2``.

    All three expressions are evaluated in exact rationals and rounded once,
    so bounds that coincide mathematically also coincide as floats.
    """
    _check_probability("eps1", eps1)
    _check_probability("eps2", eps2)
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    e1, e2 = exact(eps1), exact(eps2)
    k = int(N) - 1
    threshold = Fraction(k, int(N))

    r_ub = min(e2 * (1 - e1), e1 * (1 - e2), e1 * e2 / k)
    r_ex = Fraction(0)
    if e1 <= threshold and e2 <= threshold:
        r_lb = (e1 / k) * (e2 / k)
    elif e1 <= threshold:
        r_lb = (e1 / k) * (1 - e2)
    elif e2 <= threshold:
        r_lb = (e2 / k) * (1 - e1)
    else:
        r_ex = min((1 - e2) * (1 - N * (1 - e1)), (1 - e1) * (1 - N * (1 - e2)))
        r_lb = (1 - e1) * (1 - e2) + r_ex
    c2p = capacity_2p(e1, e2) if N == 2 else None
    return RateBounds(c2p=c2p, r_ub=float(r_ub), r_lb=float(r_lb), r_ex=float(r_ex))


@dataclass(frozen=True)
class ProtocolParams:
    """Block length, file count, erasure probabilities and slack.

    Construction fails with :class:`InfeasibleParameters` when no
    nonempty size plan exists for these values.
    """

    n: int
    N: int
    eps1: float
    eps2: float
    delta: float = 0.01

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise InfeasibleParameters("n >= 1", f"n={self.n!r}")
        if int(self.N) != self.N or self.N < 2:
            raise InfeasibleParameters("N >= 2", f"N={self.N!r}")
        for name in ("eps1", "eps2"):
            value = getattr(self, name)
            if not 0 <= value <= 1:
                raise InfeasibleParameters(f"{name} in [0, 1]", f"{name}={value!r}")
        if not self.delta > 0:
            raise InfeasibleParameters("delta > 0", f"delta={self.delta!r}")
        _plan(self)

    def to_dict(self) -> dict:
        return {"n": self.n, "N": self.N, "eps1": self.eps1, "eps2": self.eps2,
                "delta": self.delta}


@dataclass(frozen=True)
class SizePlan:
    """Deterministic sizes of every announced set and of the file split.

    ``m_dot`` bits of each file travel under the XOR pads, ``m_ddot`` bits
    through the embedded OT phase; ``size_S``/``size_St`` are the truncated
    OT resources taken from ``C``/``C~``.
    """

    n: int
    N: int
    r1: float
    r2: float
    size_L: int
    size_Lt: int
    size_C: int
    size_Ct: int
    size_S: int
    size_St: int
    m_dot: int
    m_ddot: int

    @property
    def m_total(self) -> int:
        return self.m_dot + self.m_ddot

    @property
    def high_erasure(self) -> bool:
        return self.m_ddot > 0 or self.size_C > 0 or self.size_Ct > 0

    @property
    def bob_erased_budget(self) -> int:
        return (self.N - 1) * self.size_L + self.size_C

    @property
    def cathy_erased_budget(self) -> int:
        return (self.N - 1) * self.size_Lt + self.size_Ct

    def to_dict(self) -> dict:
        out = asdict(self)
        out["m_total"] = self.m_total
        return out


def _plan(params: ProtocolParams) -> SizePlan:
    n, N = int(params.n), int(params.N)
    e1, e2, d = exact(params.eps1), exact(params.eps2), exact(params.delta)

    r1 = min(e1 / (N - 1), 1 - e1) - d
    r2 = min(e2 / (N - 1), 1 - e2) - d
    if r1 <= 0:
        raise InfeasibleParameters(
            "delta < min(eps1/(N-1), 1-eps1)", f"r1={float(r1):.6g}")
    if r2 <= 0:
        raise InfeasibleParameters(
            "delta < min(eps2/(N-1), 1-eps2)", f"r2={float(r2):.6g}")

    size_L = math.floor(n * r1)
    if size_L < 1:
        raise InfeasibleParameters("floor(n*r1) >= 1", f"n*r1={float(n * r1):.6g}")
    size_Lt = math.floor(N * size_L * r2)
    if size_Lt < N:
        raise InfeasibleParameters(
            "floor(N*|L|*r2) >= N", f"N*|L|*r2={float(N * size_L * r2):.6g}")

    size_C = size_Ct = size_S = size_St = m_ddot = 0
    if high_erasure(e1, e2, N):
        share = Fraction(1, N) - d
        spare1 = 1 - N * (1 - e1)
        spare2 = 1 - N * (1 - e2)
        size_C = math.floor(n * spare1)
        size_Ct = math.floor(N * size_L * spare2)
        size_St = size_Ct
        if e1 < e2:
            size_St = min(size_Ct, math.ceil(n * spare1 * r2 / share))
        size_S = size_C
        if e2 < e1:
            size_S = min(size_C, math.ceil(N * size_L * spare2 * share / r2))
        m_ddot = min(math.floor(size_St * share), math.floor(size_S * (1 - e2 - d)))
        m_ddot = max(m_ddot, 0)

    m_dot = math.floor((1 - d) * Fraction(size_Lt, N))
    if m_dot + m_ddot < 1:
        raise InfeasibleParameters("m_total >= 1", "file length would be zero")

    return SizePlan(n=n, N=N, r1=float(r1), r2=float(r2), size_L=size_L,
                    size_Lt=size_Lt, size_C=size_C, size_Ct=size_Ct,
                    size_S=size_S, size_St=size_St, m_dot=m_dot, m_ddot=m_ddot)


def size_plan(params: ProtocolParams) -> SizePlan:
    """Compute the :class:`SizePlan` for feasible ``params``.

    Raises
    ------
    InfeasibleParameters
        Naming the violated invariant.
    """
    return _plan(params)
