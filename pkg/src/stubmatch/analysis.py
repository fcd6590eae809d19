"""Graph and geometric analytics over matchings.

Components and goodness, edge crossings and the crossing-closure rule,
monotone spanning paths, per-point edge statistics (longest / mean incident
edge, neighbor gaps), desire counts, direction classes, and per-scheme
stability audits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.csgraph import connected_components

from .degrees import MarkedConfig
from .matching.base import Matching
from .matching.core import arrow_round
from .pointsets import PointConfig

__all__ = [
    "ComponentSummary",
    "EdgeStats",
    "components",
    "is_good",
    "spanning_path",
    "crossing_pairs",
    "crossing_count",
    "check_cross_closure",
    "point_stats",
    "desire_count",
    "desire_profile",
    "crossings_at",
    "classify_beaks",
    "f_walk",
    "interior_mask",
    "stability_audit",
]


# ---------------------------------------------------------------------------
# components and goodness


@dataclass(frozen=True)
class ComponentSummary:
    """Connected components, labeled in order of first appearance.

    Isolated vertices count as singleton components.
    """

    labels: np.ndarray  # (n,) component id per vertex
    sizes: np.ndarray  # (k,) vertex count per component id

    @property
    def n(self) -> int:
        return int(self.labels.size)

    @property
    def n_components(self) -> int:
        return int(self.sizes.size)

    @property
    def largest_fraction(self) -> float:
        if self.n == 0:
            return 0.0
        return float(self.sizes.max() / self.n)

    def component_lists(self) -> list:
        """Vertex indices per component, each ascending."""
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(self.sizes)[:-1]
        return [np.sort(part) for part in np.split(order, bounds)]


def components(matching: Matching) -> ComponentSummary:
    n = matching.n
    if n == 0:
        empty = np.empty(0, dtype=np.int64)
        return ComponentSummary(empty, empty.copy())
    e = matching.edges
    adj = coo_matrix(
        (np.ones(e.shape[0], dtype=np.int8), (e[:, 0], e[:, 1])), shape=(n, n)
    )
    _, raw = connected_components(adj, directed=False)
    _, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
    relabel = np.argsort(np.argsort(first))
    labels = relabel[inverse].astype(np.int64)
    return ComponentSummary(labels, np.bincount(labels).astype(np.int64))


def _quarters(config: PointConfig, interval):
    if config.topology.is_cycle:
        raise ValueError("goodness is defined for interval windows")
    a, b = (0.0, config.topology.extent) if interval is None else map(float, interval)
    if not b > a:
        raise ValueError("empty goodness interval")
    q = (b - a) / 4.0
    return a + q, b - q


def is_good(matching: Matching, config: PointConfig, interval=None) -> bool:
    """Whether one component touches both closed outer quarters of the window."""
    lo, hi = _quarters(config, interval)
    pos = config.positions
    in_lo = pos <= lo
    in_hi = pos >= hi
    if not (in_lo.any() and in_hi.any()):
        return False
    labels = components(matching).labels
    return bool(np.intersect1d(labels[in_lo], labels[in_hi]).size)


def spanning_path(matching: Matching, config: PointConfig, interval=None):
    """A strictly increasing path from the first quarter to the last, or None.

    Single pass over edges in ascending right-endpoint order: when edge
    (a, b) is reached every path into a is already known, so reachability
    propagates in one sweep.
    """
    lo, hi = _quarters(config, interval)
    pos = config.positions
    n = config.n
    reach = pos <= lo
    parent = np.full(n, -1, dtype=np.int64)
    e = matching.edges
    order = np.lexsort((e[:, 0], e[:, 1]))
    for a, b in e[order]:
        if reach[a] and not reach[b]:
            reach[b] = True
            parent[b] = a
    targets = np.flatnonzero(reach & (pos >= hi))
    if not targets.size:
        return None
    path = [int(targets[0])]
    while parent[path[-1]] >= 0:
        path.append(int(parent[path[-1]]))
    return np.asarray(path[::-1], dtype=np.int64)


# ---------------------------------------------------------------------------
# crossings


def _crossing_rows(edges: np.ndarray, stop_early: bool = False, chunk: int = 256):
    """Yield (r, s) edge-row index arrays with lo_r < lo_s < hi_r < hi_s."""
    m = edges.shape[0]
    lo = edges[:, 0]
    hi = edges[:, 1]
    for start in range(0, m, chunk):
        r = np.arange(start, min(start + chunk, m))
        cross = (
            (lo[r][:, None] < lo[None, :])
            & (lo[None, :] < hi[r][:, None])
            & (hi[r][:, None] < hi[None, :])
        )
        rr, ss = np.nonzero(cross)
        if rr.size:
            yield r[rr], ss
            if stop_early:
                return


def crossing_pairs(matching: Matching) -> list:
    """All crossing edge pairs ((a,b),(c,d)) with a < c < b < d. Quadratic."""
    out = []
    e = matching.edges
    for rr, ss in _crossing_rows(e):
        for r, s in zip(rr.tolist(), ss.tolist()):
            out.append(((int(e[r, 0]), int(e[r, 1])), (int(e[s, 0]), int(e[s, 1]))))
    return out


def crossing_count(matching: Matching) -> int:
    return sum(rr.size for rr, _ in _crossing_rows(matching.edges))


def check_cross_closure(matching: Matching) -> list:
    """Crossing pairs whose implied edge (c, b) is missing."""
    present = matching.edge_set()
    return [
        (ab, cd)
        for ab, cd in crossing_pairs(matching)
        if (cd[0], ab[1]) not in present
    ]


# ---------------------------------------------------------------------------
# per-point statistics


@dataclass(frozen=True)
class EdgeStats:
    """Per-point edge statistics; zeros for isolated points.

    M: longest incident edge. X: mean incident edge length. Z: larger of the
    gaps to the two neighboring points (one-sided at interval ends).
    classes: direction class per point.
    """

    M: np.ndarray
    X: np.ndarray
    Z: np.ndarray
    classes: np.ndarray


def _incident_max_mean(matching: Matching, config: PointConfig):
    n = matching.n
    M = np.zeros(n, dtype=np.float64)
    total = np.zeros(n, dtype=np.float64)
    deg = matching.graph_degrees()
    if matching.m:
        lengths = matching.edge_lengths(config)
        for side in (0, 1):
            idx = matching.edges[:, side]
            np.maximum.at(M, idx, lengths)
            np.add.at(total, idx, lengths)
    X = np.divide(total, deg, out=np.zeros_like(total), where=deg > 0)
    return M, X


def neighbor_gap(config: PointConfig) -> np.ndarray:
    """Z per point: max distance to the adjacent points of the configuration."""
    pos = config.positions
    n = pos.size
    if n < 2:
        return np.zeros(n, dtype=np.float64)
    gaps = np.diff(pos)
    if config.topology.is_cycle:
        wrap = config.topology.extent - (pos[-1] - pos[0])
        left = np.concatenate(([wrap], gaps))
        right = np.concatenate((gaps, [wrap]))
    else:
        left = np.concatenate(([-np.inf], gaps))
        right = np.concatenate((gaps, [-np.inf]))
    return np.maximum(left, right)


def point_stats(matching: Matching, marked: MarkedConfig) -> EdgeStats:
    config = marked.config
    M, X = _incident_max_mean(matching, config)
    return EdgeStats(M, X, neighbor_gap(config), classify_beaks(matching, marked))


def desire_count(matching: Matching, config: PointConfig, z: float) -> int:
    """Number of points whose longest incident edge reaches strictly past z."""
    M, _ = _incident_max_mean(matching, config)
    d = config.distance(config.positions, float(z))
    return int(np.count_nonzero(d < M))


def desire_profile(matching: Matching, config: PointConfig, sites: np.ndarray) -> np.ndarray:
    """desire_count at many sites via one interval sweep."""
    sites = np.asarray(sites, dtype=np.float64)
    order = np.argsort(sites, kind="stable")
    ss = sites[order]
    M, _ = _incident_max_mean(matching, config)
    pos = config.positions[M > 0]
    M = M[M > 0]
    delta = np.zeros(ss.size + 1, dtype=np.int64)
    spans = [(pos - M, pos + M)]
    if config.topology.is_cycle:
        ext = config.topology.extent
        lo, hi = spans[0]
        spans = [(np.maximum(lo, 0.0), np.minimum(hi, ext)), (lo + ext, hi + ext), (lo - ext, hi - ext)]
    for lo, hi in spans:
        np.add.at(delta, np.searchsorted(ss, lo, side="right"), 1)
        np.add.at(delta, np.searchsorted(ss, hi, side="left"), -1)
    counts = np.cumsum(delta[:-1])
    out = np.empty_like(counts)
    out[order] = counts
    return out


def crossings_at(matching: Matching, config: PointConfig, z: float) -> int:
    """Edges whose (geodesic, on cycles) span strictly contains site z."""
    if not matching.m:
        return 0
    pos = config.positions
    u = pos[matching.edges[:, 0]]
    v = pos[matching.edges[:, 1]]
    inside = (u < z) & (z < v)
    if config.topology.is_cycle:
        outer = (v - u) > config.topology.extent / 2.0
        inside = np.where(outer, ~((u <= z) & (z <= v)), inside)
    return int(np.count_nonzero(inside))


def classify_beaks(matching: Matching | None, marked: MarkedConfig | None = None) -> np.ndarray:
    """Direction class per point: bird, left-beak, right-beak, or other.

    Uses the direction marks when present (left/right stub counts);
    otherwise falls back to realized edge directions, which requires a
    matching. Points without two classified stubs/edges are "other".
    """
    if marked is not None and marked.rights is not None:
        n = marked.n
        rights = marked.rights
        lefts = marked.degrees - marked.rights
        full = marked.degrees == 2
    else:
        if matching is None:
            raise ValueError("realized classification needs a matching")
        n = matching.n
        rights = np.zeros(n, dtype=np.int64)
        lefts = np.zeros(n, dtype=np.int64)
        if matching.m:
            np.add.at(rights, matching.edges[:, 0], 1)
            np.add.at(lefts, matching.edges[:, 1], 1)
        full = rights + lefts == 2
    classes = np.full(n, "other", dtype="<U10")
    classes[full & (lefts == 1)] = "bird"
    classes[full & (lefts == 2)] = "left-beak"
    classes[full & (rights == 2)] = "right-beak"
    return classes


def f_walk(marked: MarkedConfig) -> np.ndarray:
    """Cumulative sum of (left stubs - right stubs) in position order."""
    if marked.rights is None:
        raise ValueError("f_walk needs direction marks")
    return np.cumsum(marked.degrees - 2 * marked.rights)


def interior_mask(config: PointConfig, margin_gaps: float = 10.0) -> np.ndarray:
    """Points away from interval ends by margin_gaps mean gaps (all, on cycles)."""
    pos = config.positions
    if config.topology.is_cycle or pos.size == 0:
        return np.ones(pos.size, dtype=bool)
    margin = margin_gaps * config.topology.extent / pos.size
    return (pos >= margin) & (pos <= config.topology.extent - margin)


# ---------------------------------------------------------------------------
# stability audits


def _adjacency(matching: Matching) -> csr_matrix:
    n = matching.n
    e = matching.edges
    data = np.ones(e.shape[0], dtype=bool)
    adj = csr_matrix((data, (e[:, 0], e[:, 1])), shape=(n, n))
    return (adj + adj.T).tocsr()


def _audit_undirected(matching: Matching, marked: MarkedConfig, chunk: int = 512) -> list:
    """Unlinked pairs both willing: a free stub, or an incident edge longer
    than the pair distance, on each side."""
    cfg = marked.config
    pos = cfg.positions
    n = cfg.n
    M, _ = _incident_max_mean(matching, cfg)
    free = matching.leftover > 0
    adj = _adjacency(matching)
    out = []
    for start in range(0, n, chunk):
        rows = np.arange(start, min(start + chunk, n))
        d = cfg.distance(pos[rows][:, None], pos[None, :])
        willing_r = free[rows][:, None] | (M[rows][:, None] > d)
        willing_c = free[None, :] | (M[None, :] > d)
        bad = willing_r & willing_c & ~adj[rows].toarray()
        bad &= rows[:, None] < np.arange(n)[None, :]
        for r, c in zip(*np.nonzero(bad)):
            out.append((int(rows[r]), int(c)))
    return out


def _audit_iterated(matching: Matching, marked: MarkedConfig) -> list:
    """Unlinked pairs where both points still hold stubs (another round
    would join them)."""
    free = np.flatnonzero(matching.leftover > 0)
    linked = matching.edge_set()
    return [
        (int(i), int(j))
        for k, i in enumerate(free.tolist())
        for j in free[k + 1 :].tolist()
        if (i, j) not in linked
    ]


def _audit_directed(matching: Matching, marked: MarkedConfig, chunk: int = 512) -> list:
    """Pairs x < y, unlinked, x right-willing and y left-willing."""
    if matching.leftover_right is None or matching.leftover_left is None:
        raise ValueError("directed audit needs per-side leftover counts")
    cfg = marked.config
    pos = cfg.positions
    n = cfg.n
    max_r = np.zeros(n, dtype=np.float64)
    max_l = np.zeros(n, dtype=np.float64)
    if matching.m:
        lengths = matching.edge_lengths(cfg)
        np.maximum.at(max_r, matching.edges[:, 0], lengths)
        np.maximum.at(max_l, matching.edges[:, 1], lengths)
    free_r = matching.leftover_right > 0
    free_l = matching.leftover_left > 0
    adj = _adjacency(matching)
    out = []
    for start in range(0, n, chunk):
        rows = np.arange(start, min(start + chunk, n))
        d = pos[None, :] - pos[rows][:, None]  # >0 only right of the row point
        willing_x = free_r[rows][:, None] | (max_r[rows][:, None] > d)
        willing_y = free_l[None, :] | (max_l[None, :] > d)
        bad = willing_x & willing_y & (d > 0) & ~adj[rows].toarray()
        for r, c in zip(*np.nonzero(bad)):
            out.append((int(rows[r]), int(c)))
    return out


def _audit_core(matching: Matching, marked: MarkedConfig) -> list:
    """Mutual-arrow pairs remaining at the claimed fixpoint (must be none)."""
    cfg = marked.config
    pos = cfg.positions
    partners = [set() for _ in range(cfg.n)]
    for i, j in matching.edges:
        partners[i].add(int(j))
        partners[j].add(int(i))
    act = np.flatnonzero(matching.leftover > 0).tolist()
    arrow = arrow_round(pos, 0.0, cfg.topology.extent, act, partners)
    return [
        (i, j) for i, j in arrow.items() if j >= 0 and i < j and arrow.get(j) == i
    ]


_AUDITS = {
    "stable": _audit_undirected,
    "iterated": _audit_iterated,
    "random_direction": _audit_directed,
    "core": _audit_core,
}


def stability_audit(matching: Matching, marked: MarkedConfig, scheme: str | None = None) -> list:
    """Exhaustive per-scheme instability check; empty for matcher outputs.

    stable: no unlinked pair may be willing on both sides (free stub or a
    strictly longer incident edge). random_direction: same, per direction.
    iterated: no unlinked pair may hold free stubs on both sides. core: one
    more arrow round on the final state must produce no mutual arrows (the
    pairwise predicate is the wrong notion here -- the window complement
    can out-compete a real point).
    """
    scheme = matching.scheme if scheme is None else scheme
    try:
        audit = _AUDITS[scheme]
    except KeyError:
        raise ValueError(f"no stability predicate for scheme {scheme!r}") from None
    return audit(matching, marked)
