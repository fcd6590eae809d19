"""Stable multi-matching: repeated simultaneous mutual-nearest pairing.

Each round connects every pair (x, y) such that y is the nearest compatible
partner of x and vice versa, where compatible means both still hold at least
one stub and the pair is not already linked. Stubs decrement, the round
repeats, and the process stops when no pair can be added. On finite windows
the fixpoint can leave stubs unmatched; these are reported, never forced.

The per-round scan is exact with a bounded candidate window: while a point
is active it has at most ``k_max - 1`` existing edges, so its nearest
compatible partner on a given side is among the ``k_max`` nearest active
points on that side.
"""

from __future__ import annotations

import numpy as np

from ..degrees import MarkedConfig
from .base import Matching, edges_from_lists

__all__ = ["stable_multimatch"]


def stable_multimatch(marked: MarkedConfig) -> Matching:
    cfg = marked.config
    pos = cfg.positions
    n = pos.size
    if n == 0:
        return Matching("stable", 0, np.empty((0, 2), np.int64), np.empty(0, np.int64), 0)

    stubs = marked.degrees.copy()
    kmax = int(stubs.max())
    # partner slots double as the existing-edge test inside each round
    partners = np.full((n, kmax), -1, dtype=np.int64)
    filled = np.zeros(n, dtype=np.int64)
    is_cycle = cfg.topology.is_cycle
    extent = cfg.topology.extent

    edges_u: list = []
    edges_v: list = []
    active = np.flatnonzero(stubs > 0)
    rounds = 0
    while active.size >= 2:
        if active.size <= 2 * kmax + 2:
            u, v = _round_small(pos, extent, is_cycle, active, partners, filled)
        else:
            u, v = _round_vector(pos, extent, is_cycle, active, partners, filled, kmax)
        if u.size == 0:
            break
        rounds += 1
        stubs[u] -= 1
        stubs[v] -= 1
        partners[u, filled[u]] = v
        filled[u] += 1
        partners[v, filled[v]] = u
        filled[v] += 1
        edges_u.append(u)
        edges_v.append(v)
        active = active[stubs[active] > 0]

    return Matching("stable", n, edges_from_lists(edges_u, edges_v), stubs, rounds)


def _round_vector(pos, extent, is_cycle, active, partners, filled, kmax):
    """One simultaneous round over the active set, vectorized.

    Candidate columns are ordered by ascending partner index so that exact
    distance ties resolve to the smaller index pair (argmin keeps the first
    minimum).
    """
    nA = active.size
    t = np.arange(nA)
    offs = np.concatenate([np.arange(-kmax, 0), np.arange(1, kmax + 1)])
    idx = t[:, None] + offs[None, :]
    if is_cycle:
        idx %= nA
        valid = np.ones(idx.shape, dtype=bool)
    else:
        valid = (idx >= 0) & (idx < nA)
        idx = np.clip(idx, 0, nA - 1)
    cand = active[idx]
    posA = pos[active]
    d = np.abs(posA[:, None] - pos[cand])
    if is_cycle:
        d = np.minimum(d, extent - d)

    blocked = np.zeros(d.shape, dtype=bool)
    for s in range(kmax):
        blocked |= partners[active, s][:, None] == cand
    d[~valid | blocked] = np.inf

    col = np.argmin(d, axis=1)
    has = np.isfinite(d[t, col])
    choice = idx[t, col]
    safe = np.where(has, choice, 0)
    back = np.where(has[safe], choice[safe], -1)
    mutual = has & (back == t)
    sel = np.flatnonzero(mutual & (t < choice))
    return active[sel], active[choice[sel]]


def _round_small(pos, extent, is_cycle, active, partners, filled):
    # plain quadratic scan; exact fallback when the offset window would wrap
    best = {}
    act = active.tolist()
    for i in act:
        mine = set(partners[i, : filled[i]].tolist())
        bd = np.inf
        bj = -1
        for j in act:
            if j == i or j in mine:
                continue
            dd = abs(pos[i] - pos[j])
            if is_cycle:
                dd = min(dd, extent - dd)
            if dd < bd or (dd == bd and j < bj):
                bd, bj = dd, j
        if bj >= 0:
            best[i] = bj
    u = []
    v = []
    for i in act:
        j = best.get(i, -1)
        if j > i and best.get(j) == i:
            u.append(i)
            v.append(j)
    return np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64)
