"""Core multi-matching on a bounded window.

The window complement acts as a sentinel competitor at both endpoints: it
always has an unused stub and never forms an edge. Each round, every point
with an unused stub aims an arrow at the closest eligible element (active
points it has no edge with, or the sentinel); mutual arrows become edges.
Edges found this way belong to every stable multi-matching that extends the
window, which is what makes the goodness experiments conservative.

For degree 2 everywhere the scan narrows: an active point has at most one
existing edge, so its arrow target is among its two nearest active
neighbors per side, and mutual arrows only join actively-adjacent points.
That specialization is the fast path; the general algorithm stays available
and the two are checked against each other in the test suite.
"""

from __future__ import annotations

import numpy as np

from ..degrees import MarkedConfig
from .base import Matching, edges_from_lists

__all__ = ["core_match", "arrow_round"]

_DELTAS = np.array([-2, -1, 1, 2])


def core_match(marked: MarkedConfig, method: str = "auto") -> Matching:
    """Core multi-matching of an interval config against its own window.

    method: "auto" picks the degree-2 fast path when applicable, "fast"
    demands it, "general" forces the unspecialized algorithm.
    """
    cfg = marked.config
    if cfg.topology.is_cycle:
        raise ValueError("core matching is defined relative to a bounded interval window")
    if method not in ("auto", "fast", "general"):
        raise ValueError(f"unknown method {method!r}")
    all_two = bool(np.all(marked.degrees == 2))
    if method == "fast" and not all_two:
        raise ValueError("fast core matching requires degree 2 at every point")
    a, b = 0.0, cfg.topology.extent
    if method == "general" or not all_two:
        edges, leftover, rounds = _core_general(cfg.positions, a, b, marked.degrees)
    else:
        edges, leftover, rounds = _core_fast(cfg.positions, a, b)
    return Matching("core", cfg.n, edges, leftover, rounds)


def _core_fast(pos: np.ndarray, a: float, b: float):
    n = pos.size
    stubs = np.full(n, 2, dtype=np.int64)
    p1 = np.full(n, -1, dtype=np.int64)
    p2 = np.full(n, -1, dtype=np.int64)
    edges_u: list = []
    edges_v: list = []
    rounds = 0
    active = np.flatnonzero(stubs > 0)
    while active.size:
        nA = active.size
        # two never-exhausted sentinel entries at each end of the active list
        px = np.concatenate(([a, a], pos[active], [b, b]))
        pid = np.concatenate(([-2, -2], active, [-2, -2]))
        rows = np.arange(nA) + 2
        cand = rows[:, None] + _DELTAS[None, :]
        d = np.abs(px[rows][:, None] - px[cand])
        cid = pid[cand]
        blocked = (p1[active][:, None] == cid) | (p2[active][:, None] == cid)
        d[blocked] = np.inf
        off = _DELTAS[np.argmin(d, axis=1)]
        # mutual arrows occur only between active-adjacent points
        ts = np.flatnonzero((off[:-1] == 1) & (off[1:] == -1))
        if ts.size == 0:
            break
        rounds += 1
        u = active[ts]
        v = active[ts + 1]
        stubs[u] -= 1
        stubs[v] -= 1
        for x, y in ((u, v), (v, u)):
            empty = p1[x] == -1
            p1[x[empty]] = y[empty]
            p2[x[~empty]] = y[~empty]
        edges_u.append(u)
        edges_v.append(v)
        active = active[stubs[active] > 0]
    return edges_from_lists(edges_u, edges_v), stubs, rounds


def arrow_round(pos: np.ndarray, a: float, b: float, act_list: list, partners: list) -> dict:
    """Arrow targets for one round: nearest eligible element per active point.

    Eligible means an active point with no existing edge to the owner, or
    the window complement (encoded as -1). Ties: an existing best is only
    displaced by a strictly smaller distance, and candidates are tried
    sentinel first, then left, then right, which keeps the choice
    deterministic.
    """
    arrow = {}
    index_of = {i: t for t, i in enumerate(act_list)}
    for i in act_list:
        t = index_of[i]
        bd = min(pos[i] - a, b - pos[i])
        bj = -1  # sentinel
        tt = t - 1
        while tt >= 0:
            j = act_list[tt]
            if j not in partners[i]:
                if pos[i] - pos[j] < bd:
                    bd = pos[i] - pos[j]
                    bj = j
                break
            tt -= 1
        tt = t + 1
        while tt < len(act_list):
            j = act_list[tt]
            if j not in partners[i]:
                if pos[j] - pos[i] < bd:
                    bd = pos[j] - pos[i]
                    bj = j
                break
            tt += 1
        arrow[i] = bj
    return arrow


def _core_general(pos: np.ndarray, a: float, b: float, degs: np.ndarray):
    """Reference arrow algorithm for arbitrary degree marks (quadratic-ish)."""
    n = pos.size
    stubs = degs.astype(np.int64).copy()
    partners = [set() for _ in range(n)]
    edges_u: list = []
    edges_v: list = []
    rounds = 0
    while True:
        act = np.flatnonzero(stubs > 0)
        if act.size == 0:
            break
        arrow = arrow_round(pos, a, b, act.tolist(), partners)
        added = False
        u_round = []
        v_round = []
        for i, j in arrow.items():
            if j >= 0 and i < j and arrow.get(j) == i:
                u_round.append(i)
                v_round.append(j)
                added = True
        if not added:
            break
        rounds += 1
        for i, j in zip(u_round, v_round):
            stubs[i] -= 1
            stubs[j] -= 1
            partners[i].add(j)
            partners[j].add(i)
        edges_u.append(np.asarray(u_round, dtype=np.int64))
        edges_v.append(np.asarray(v_round, dtype=np.int64))
    return edges_from_lists(edges_u, edges_v), stubs, rounds
