"""Matching container and helpers shared by the matching engines."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..degrees import MarkedConfig
from ..pointsets import PointConfig

__all__ = ["Matching", "edges_from_lists", "EMPTY_EDGES"]

EMPTY_EDGES = np.empty((0, 2), dtype=np.int64)


@dataclass(frozen=True)
class Matching:
    """A simple graph over point indices plus leftover-stub accounting.

    ``edges`` is an (m, 2) int array with i < j per row, in construction
    order (deterministic for a fixed input). ``degree(i) + leftover[i]``
    equals the degree mark of point i; directed schemes additionally track
    per-side leftovers.
    """

    scheme: str
    n: int
    edges: np.ndarray
    leftover: np.ndarray
    rounds: int
    leftover_right: np.ndarray | None = None
    leftover_left: np.ndarray | None = None

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "leftover", np.asarray(self.leftover, dtype=np.int64))
        if e.size:
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loop in matching")
            if np.any(e < 0) or np.any(e >= self.n):
                raise ValueError("edge index out of range")

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def edge_set(self) -> set:
        return {(int(i), int(j)) for i, j in self.edges}

    def graph_degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        if self.edges.size:
            np.add.at(deg, self.edges[:, 0], 1)
            np.add.at(deg, self.edges[:, 1], 1)
        return deg

    def edge_lengths(self, config: PointConfig) -> np.ndarray:
        if not self.edges.size:
            return np.empty(0, dtype=np.float64)
        p = config.positions
        return config.distance(p[self.edges[:, 0]], p[self.edges[:, 1]])


def edges_from_lists(us, vs) -> np.ndarray:
    """Stack per-round endpoint arrays into the final (m, 2) edge array."""
    if not us:
        return EMPTY_EDGES.copy()
    u = np.concatenate([np.atleast_1d(np.asarray(x, dtype=np.int64)) for x in us])
    v = np.concatenate([np.atleast_1d(np.asarray(x, dtype=np.int64)) for x in vs])
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    return np.column_stack([lo, hi])


def require_degrees(marked: MarkedConfig, constant: int | None = None) -> None:
    if constant is not None and np.any(marked.degrees != constant):
        raise ValueError(f"this scheme requires degree {constant} at every point")
