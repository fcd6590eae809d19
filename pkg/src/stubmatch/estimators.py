"""Scikit-learn style estimator facade over the matching engines.

Each estimator samples degree marks, runs its matching scheme in ``fit``,
and exposes the component structure as cluster labels. Per-point outputs
(``labels_``, ``leftover_``, ``degrees_``) are row-aligned with the input
X; the graph itself (``edges_``) is expressed in sorted-position indices,
with ``order_`` mapping sorted index -> input row.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from .analysis import components
from .degrees import MarkedConfig, assign_directions, parse_degree_spec
from .matching import core_match, iterated_stable_match, stable_multimatch
from .matching import random_direction_match
from .pointsets import CYCLE, INTERVAL, PointConfig, Topology
from .validation import as_generator

__all__ = [
    "BaseStubMatcher",
    "StableMultiMatching",
    "RandomDirectionMatching",
    "CoreMatching",
    "IteratedStableMatching",
]


class BaseStubMatcher(ClusterMixin, BaseEstimator):
    """Fit a stub matching to 1-d points; labels are connected components.

    Parameters
    ----------
    degrees : int, str, or DegreeDistribution, default=2
        Degree specification ("2", "e=2.1", "2:0.5,3:0.5", ...).
    topology : "interval" or "cycle"
    extent : float, optional
        Window length / circumference. Defaults to just past the largest
        position on an interval; required on a cycle.
    random_state : int, Generator, or None
        Drives degree sampling (and direction marks where applicable).
    """

    def __init__(self, degrees=2, topology=INTERVAL, extent=None, random_state=None):
        self.degrees = degrees
        self.topology = topology
        self.extent = extent
        self.random_state = random_state

    def _prepare(self, marked, rng):
        return marked

    def _engine(self, marked):
        raise NotImplementedError

    def fit(self, X, y=None):
        x = np.asarray(X, dtype=np.float64)
        if x.ndim == 2 and x.shape[1] == 1:
            x = x[:, 0]
        if x.ndim != 1:
            raise ValueError(f"expected 1-d positions or a single column, got shape {x.shape}")
        if x.size and not np.all(np.isfinite(x)):
            raise ValueError("positions must be finite")
        order = np.argsort(x, kind="stable")
        pos = x[order]
        if pos.size > 1 and np.any(np.diff(pos) == 0):
            raise ValueError("duplicate positions are not allowed")

        if self.extent is None:
            if self.topology == CYCLE:
                raise ValueError("extent is required on a cycle")
            extent = float(np.nextafter(pos[-1], np.inf)) if pos.size else 1.0
        else:
            extent = float(self.extent)
        config = PointConfig(Topology(self.topology, extent), pos)

        rng, _ = as_generator(self.random_state)
        degs = parse_degree_spec(self.degrees).sample(rng, config.n)
        marked = self._prepare(MarkedConfig(config, degs), rng)
        matching = self._engine(marked)

        self.n_features_in_ = 1
        self.order_ = order
        self.positions_ = pos
        self.config_ = config
        self.marked_ = marked
        self.matching_ = matching
        self.edges_ = matching.edges
        self.n_rounds_ = matching.rounds
        inverse = np.empty_like(order)
        inverse[order] = np.arange(order.size)
        self.labels_ = components(matching).labels[inverse]
        self.leftover_ = matching.leftover[inverse]
        self.degrees_ = degs[inverse]
        return self


class StableMultiMatching(BaseStubMatcher):
    """Mutual-nearest multi-matching run to its fixpoint."""

    def _engine(self, marked):
        return stable_multimatch(marked)


class RandomDirectionMatching(BaseStubMatcher):
    """Directed pass matching with Binomial(D, 1/2) right-stub marks."""

    def _prepare(self, marked, rng):
        return assign_directions(marked, rng)

    def _engine(self, marked):
        return random_direction_match(marked)


class IteratedStableMatching(BaseStubMatcher):
    """Rounds of stable 1-matchings without multi-edges."""

    def _engine(self, marked):
        return iterated_stable_match(marked)


class CoreMatching(BaseStubMatcher):
    """Window-relative core matching (interval only).

    method: "auto", "fast" (degree-2 specialization), or "general".
    """

    def __init__(self, degrees=2, topology=INTERVAL, extent=None, random_state=None, method="auto"):
        super().__init__(degrees=degrees, topology=topology, extent=extent, random_state=random_state)
        self.method = method

    def _engine(self, marked):
        return core_match(marked, method=self.method)
