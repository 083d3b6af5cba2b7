"""Finite joint distributions and plug-in mutual information.

A joint distribution is anything that can turn named variables into integer
keys over a weighted set of rows. Mutual information is then computed
exactly from the aggregated weights.
"""

from __future__ import annotations

import math

import numpy as np

KEY_LIMIT = 1 << 62


class ZeroProbabilityCondition(ValueError):
    """The conditioning event has probability zero."""


def dense_ids(key: np.ndarray) -> tuple[np.ndarray, int]:
    """Relabel integer keys as ``0..k-1``; returns ids and ``k``."""
    uniq, inv = np.unique(key, return_inverse=True)
    return inv.reshape(key.shape).astype(np.int64), int(uniq.size)


def combine(columns) -> np.ndarray:
    """Mixed-radix combination of ``(values, radix)`` pairs into one key.

    ``values`` may be any mutually broadcastable integer arrays. When the
    radix product would overflow 62 bits the partial key is relabelled
    densely first.
    """
    key, radix = np.zeros((), dtype=np.int64), 1
    for values, r in columns:
        r = max(int(r), 1)
        if radix * r >= KEY_LIMIT:
            shape = np.broadcast_shapes(np.shape(key), np.shape(values))
            key, radix = dense_ids(np.broadcast_to(key, shape))
            if radix * r >= KEY_LIMIT:
                values, r = dense_ids(np.broadcast_to(values, shape))
        key = key * r + np.asarray(values, dtype=np.int64)
        radix *= r
    return key


def mi_from_keys(a: np.ndarray, b: np.ndarray, w: np.ndarray) -> float:
    """Mutual information in bits between keys ``a`` and ``b`` under weights ``w``.

    Weights need not be normalized. Aggregation happens before
    normalization, so integer-valued weights with a total below ``2**53``
    are summed without rounding.
    """
    w = np.asarray(w, dtype=np.float64)
    total = float(np.sum(w))
    if not total > 0:
        raise ZeroProbabilityCondition("conditioning event has probability zero")
    a_inv, na = dense_ids(a)
    b_inv, nb = dense_ids(b)
    ab_keys, ab_inv = np.unique(a_inv * nb + b_inv, return_inverse=True)
    c_ab = np.bincount(ab_inv.ravel(), weights=w)
    c_a = np.bincount(a_inv, weights=w, minlength=na)[ab_keys // nb]
    c_b = np.bincount(b_inv, weights=w, minlength=nb)[ab_keys % nb]
    keep = c_ab > 0
    c_ab, c_a, c_b = c_ab[keep], c_a[keep], c_b[keep]
    terms = (c_ab / total) * np.log2((c_ab / c_a) * (total / c_b))
    return max(math.fsum(terms.tolist()), 0.0)


class JointDistribution:
    """Interface shared by explicit and enumerated joints.

    Subclasses implement :meth:`unit_columns`, returning per-unit arrays used
    by predicates, and :meth:`keys`, returning one integer key per group of
    variables plus row weights.
    """

    def unit_columns(self) -> dict:
        raise NotImplementedError

    def keys(self, groups, given=None) -> tuple[list[np.ndarray], np.ndarray]:
        raise NotImplementedError

    def probability(self, given=None) -> float:
        cols = self.unit_columns()
        p = cols["p"]
        mask = np.ones(p.size, dtype=bool) if given is None else np.asarray(given(cols), bool)
        return math.fsum(p[mask].tolist())

    def total_mass(self) -> float:
        return self.probability()


class ExplicitJoint(JointDistribution):
    """A joint given as a list of atoms ``({name: value}, probability)``."""

    def __init__(self, atoms):
        atoms = list(atoms)
        names = list(atoms[0][0]) if atoms else []
        self.names = names
        self._codes = {}
        for name in names:
            values = [a[0][name] for a in atoms]
            table = {}
            self._codes[name] = np.array([table.setdefault(v, len(table)) for v in values],
                                         dtype=np.int64)
        self._p = np.array([float(a[1]) for a in atoms], dtype=np.float64)
        self._raw = {name: [a[0][name] for a in atoms] for name in names}

    def unit_columns(self) -> dict:
        cols = {name: np.asarray(self._raw[name], dtype=object) for name in self.names}
        cols["p"] = self._p
        return cols

    def keys(self, groups, given=None):
        mask = (np.ones(self._p.size, dtype=bool) if given is None
                else np.asarray(given(self.unit_columns()), dtype=bool))
        out = []
        for group in groups:
            cols = [(self._codes[name][mask], int(self._codes[name].max()) + 1) for name in group]
            out.append(combine(cols).ravel())
        return out, self._p[mask]


def _as_list(names):
    return [names] if isinstance(names, str) else list(names)


def mutual_information(joint: JointDistribution, left, right, given=None) -> float:
    """Plug-in ``I(left; right | given)`` in bits.

    Parameters
    ----------
    joint : JointDistribution
    left, right : str or list of str
        Variable names; view names such as ``"V_B"`` expand to their parts.
    given : callable, optional
        Predicate over :meth:`JointDistribution.unit_columns` selecting the
        conditioning event.

    Raises
    ------
    ZeroProbabilityCondition
        If the event selected by ``given`` has probability zero.
    """
    (a, b), w = joint.keys([_as_list(left), _as_list(right)], given)
    if w.size == 0:
        raise ZeroProbabilityCondition("conditioning event is empty")
    a = np.broadcast_to(a, w.shape).ravel() if a.size != w.size else a.ravel()
    b = np.broadcast_to(b, w.shape).ravel() if b.size != w.size else b.ravel()
    return mi_from_keys(a, b, w.ravel())


def total_variation(p: dict, q: dict) -> float:
    """Total variation distance between two finite distributions given as dicts."""
    support = set(p) | set(q)
    return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in support)


def empirical_distribution(samples) -> dict:
    counts: dict = {}
    for s in samples:
        counts[s] = counts.get(s, 0) + 1
    total = sum(counts.values())
    return {k: c / total for k, c in counts.items()}
