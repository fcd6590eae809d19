"""Iterated stable matching: rounds of partial 1-matchings without multi-edges.

Each outer round runs a stable 1-matching among the points that still hold
stubs — repeated mutual-nearest pairing where matched points leave the pool
for the rest of the round — while pairs already joined in earlier rounds are
excluded. A matched point consumes one stub per round and may re-enter the
next round. The per-pass kernel is shared with the plain stable matcher.
"""

from __future__ import annotations

import numpy as np

from ..degrees import MarkedConfig
from .base import Matching, edges_from_lists
from .stable import _round_small, _round_vector

__all__ = ["iterated_stable_match"]


def iterated_stable_match(marked: MarkedConfig) -> Matching:
    cfg = marked.config
    pos = cfg.positions
    n = pos.size
    if n == 0:
        return Matching("iterated", 0, np.empty((0, 2), np.int64), np.empty(0, np.int64), 0)

    stubs = marked.degrees.copy()
    kmax = int(stubs.max())
    partners = np.full((n, kmax), -1, dtype=np.int64)
    filled = np.zeros(n, dtype=np.int64)
    is_cycle = cfg.topology.is_cycle
    extent = cfg.topology.extent
    cap = int(stubs.sum())

    edges_u: list = []
    edges_v: list = []
    rounds = 0
    while True:
        pool = np.flatnonzero(stubs > 0)
        progressed = False
        while pool.size >= 2:
            if pool.size <= 2 * kmax + 2:
                u, v = _round_small(pos, extent, is_cycle, pool, partners, filled)
            else:
                u, v = _round_vector(pos, extent, is_cycle, pool, partners, filled, kmax)
            if u.size == 0:
                break
            progressed = True
            stubs[u] -= 1
            stubs[v] -= 1
            partners[u, filled[u]] = v
            filled[u] += 1
            partners[v, filled[v]] = u
            filled[v] += 1
            edges_u.append(u)
            edges_v.append(v)
            # matched points sit out the rest of this round
            gone = np.zeros(pos.size, dtype=bool)
            gone[u] = True
            gone[v] = True
            pool = pool[~gone[pool]]
        if not progressed:
            break
        rounds += 1
        if rounds > cap:
            raise RuntimeError("iterated matching exceeded its round cap; this is a bug")

    return Matching("iterated", n, edges_from_lists(edges_u, edges_v), stubs, rounds)
