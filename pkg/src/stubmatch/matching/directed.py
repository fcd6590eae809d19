"""Random-direction matching: pass-ordered pairing of right-stubs to left-stubs.

Pass s = 0, 1, 2, ... considers every pair x < y with exactly s points
strictly between them; an edge is created when x still holds a right-stub
and y a left-stub, consuming one of each. Within a pass each point appears
in at most one pair per stub side, so simultaneous and sequential processing
agree. Defined on interval topology only ("right" is ill-posed on a cycle).
"""

from __future__ import annotations

import numpy as np

from ..degrees import MarkedConfig
from .base import Matching, edges_from_lists

__all__ = ["random_direction_match"]

_ENDGAME = 48


def random_direction_match(marked: MarkedConfig) -> Matching:
    if marked.rights is None:
        raise ValueError("random_direction_match requires direction marks (rights)")
    if marked.config.topology.is_cycle:
        raise ValueError("random_direction_match is defined on interval topology only")
    rights = marked.rights.copy()
    lefts = (marked.degrees - marked.rights).copy()
    n = marked.n
    edges_u, edges_v, passes = _directed_pass(rights, lefts)
    return Matching(
        "random_direction",
        n,
        edges_from_lists(edges_u, edges_v),
        rights + lefts,
        passes,
        leftover_right=rights,
        leftover_left=lefts,
    )


def _directed_pass(rights: np.ndarray, lefts: np.ndarray):
    """Run the passes in place on the stub-count arrays; returns edge lists.

    The dense phase walks pass by pass over the surviving right-stub holders.
    Once few remain, every still-possible pair is enumerated outright and
    replayed in pass order, which skips the long empty stretches between the
    last few matches.
    """
    n = rights.size
    edges_u: list = []
    edges_v: list = []
    if n < 2:
        return edges_u, edges_v, 0

    act = np.flatnonzero(rights > 0)
    maxl = n - 1
    s = 0
    while s <= n - 2 and act.size:
        act = act[act + s + 1 < n]
        if not act.size:
            break
        while maxl >= 0 and lefts[maxl] == 0:
            maxl -= 1
        if maxl < 0 or act[0] >= maxl:
            break
        if act.size <= _ENDGAME:
            _endgame(act, rights, lefts, s, edges_u, edges_v)
            break
        js = act + s + 1
        hit = lefts[js] > 0
        if hit.any():
            mi = act[hit]
            mj = js[hit]
            rights[mi] -= 1
            lefts[mj] -= 1
            edges_u.append(mi)
            edges_v.append(mj)
            act = act[rights[act] > 0]
        s += 1
    return edges_u, edges_v, s


def _endgame(act, rights, lefts, s, edges_u, edges_v):
    """Enumerate the still-reachable pairs (i, j) with span >= s and replay them.

    A pair is considered at exactly one pass (its span), and pairs of equal
    span are disjoint in both endpoints, so processing in span order with a
    stable sort reproduces the pass semantics exactly. For a right-stub
    holder i to match its t-th candidate, every earlier candidate must have
    been consumed by another holder or by i itself, so t never exceeds the
    total remaining right-stub count plus i's own; candidates beyond that
    are unreachable and skipped.
    """
    lef = np.flatnonzero(lefts > 0)
    if not lef.size:
        return
    total = int(rights[act].sum())
    pi_parts = []
    pj_parts = []
    for i in act.tolist():
        start = int(np.searchsorted(lef, i + s + 1, side="left"))
        cap = total + int(rights[i]) + 1
        js = lef[start : start + cap]
        if js.size:
            pi_parts.append(np.full(js.size, i, dtype=np.int64))
            pj_parts.append(js)
    if not pi_parts:
        return
    pi = np.concatenate(pi_parts)
    pj = np.concatenate(pj_parts)
    order = np.argsort(pj - pi - 1, kind="stable")
    u = []
    v = []
    for k in order:
        i = int(pi[k])
        j = int(pj[k])
        if rights[i] > 0 and lefts[j] > 0:
            rights[i] -= 1
            lefts[j] -= 1
            u.append(i)
            v.append(j)
    if u:
        edges_u.append(np.asarray(u, dtype=np.int64))
        edges_v.append(np.asarray(v, dtype=np.int64))
