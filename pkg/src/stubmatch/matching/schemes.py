"""Two degree-2 matching schemes with structurally opposite behavior.

``opposite_stub_match`` spends one stub per point on a stable 1-matching,
orients the remaining stub away from the first edge, and connects the
oriented stubs with the directed pass procedure. Interior points end up
with one edge on each side.

``seed_group_match`` partitions points into groups of size >= 3 (between
consecutive good seeds) and wires each group as a path plus a closing edge,
producing only finite components.
"""

from __future__ import annotations

import numpy as np

from ..degrees import MarkedConfig
from .base import Matching, edges_from_lists, require_degrees
from .directed import _directed_pass
from .stable import stable_multimatch

__all__ = ["opposite_stub_match", "seed_group_match"]


def _interval_only(marked: MarkedConfig, what: str) -> None:
    if marked.config.topology.is_cycle:
        raise ValueError(f"{what} is defined on interval topology only")


def opposite_stub_match(marked: MarkedConfig) -> Matching:
    """Stable 1-matching, then the directed pass on the opposite stubs."""
    require_degrees(marked, 2)
    _interval_only(marked, "opposite_stub_match")
    cfg = marked.config
    n = cfg.n
    first = stable_multimatch(MarkedConfig(cfg, np.ones(n, dtype=np.int64)))

    # second stub points away from the first edge; unmatched points sit out
    rights = np.zeros(n, dtype=np.int64)
    lefts = np.zeros(n, dtype=np.int64)
    lefts[first.edges[:, 0]] = 1  # first edge went right
    rights[first.edges[:, 1]] = 1
    eu, ev, passes = _directed_pass(rights, lefts)
    edges = np.vstack([first.edges, edges_from_lists(eu, ev)])

    leftover = np.full(n, 2, dtype=np.int64)
    np.add.at(leftover, edges.ravel(), -1)
    return Matching("opposite_stub", n, edges, leftover, first.rounds + passes)


def seed_group_match(marked: MarkedConfig) -> Matching:
    """Group points between consecutive good seeds; path plus closing edge.

    A point is a seed when another point lies within distance 1 of it. A
    seed is good when at least two points sit strictly between it and the
    next seed (those are never seeds themselves). Points before the first
    good seed, or from the last one on, have no group on a finite window
    and keep their stubs.
    """
    require_degrees(marked, 2)
    _interval_only(marked, "seed_group_match")
    pos = marked.config.positions
    n = marked.n

    gaps = np.diff(pos)
    near_left = np.concatenate(([False], gaps <= 1.0))
    near_right = np.concatenate((gaps <= 1.0, [False]))
    seeds = np.flatnonzero(near_left | near_right)
    good = seeds[:-1][np.diff(seeds) >= 3] if seeds.size >= 2 else seeds[:0]

    edges_u: list = []
    edges_v: list = []
    for a, b in zip(good[:-1], good[1:]):
        grp = np.arange(a, b)
        if grp.size < 3:  # cannot happen between good seeds
            continue
        edges_u.append(grp[:-1])
        edges_v.append(grp[1:])
        edges_u.append(grp[:1])
        edges_v.append(grp[-1:])
    edges = edges_from_lists(edges_u, edges_v)

    leftover = np.full(n, 2, dtype=np.int64)
    if edges.size:
        np.add.at(leftover, edges.ravel(), -1)
    return Matching("seed_group", n, edges, leftover, 1)
