"""Degree marks: per-point stub counts D_x and random left/right splits R_x.

The degree law is a finite pmf on the strictly positive integers. The
expected-degree shorthand (e.g. 2.5) denotes the unique mixture of the two
consecutive integers around it with that mean.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pointsets import PointConfig

__all__ = [
    "DegreeDistribution",
    "MarkedConfig",
    "from_constant",
    "from_pmf",
    "from_expected_degree",
    "parse_degree_spec",
    "assign_degrees",
    "assign_directions",
]

_PROB_TOL = 1e-12


@dataclass(frozen=True)
class DegreeDistribution:
    """Finite pmf over positive integer degrees."""

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64)
        p = np.asarray(self.probs, dtype=np.float64)
        if v.ndim != 1 or p.shape != v.shape or v.size == 0:
            raise ValueError("degree pmf needs matching 1-d value/probability arrays")
        if np.any(v <= 0):
            raise ValueError("degree support must be strictly positive integers")
        if v.size != np.unique(v).size:
            raise ValueError("degree support has repeated values")
        if np.any(p < 0):
            raise ValueError("negative probability mass")
        if abs(p.sum() - 1.0) > _PROB_TOL:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        order = np.argsort(v)
        object.__setattr__(self, "values", v[order])
        object.__setattr__(self, "probs", p[order])

    @property
    def max_degree(self) -> int:
        return int(self.values[-1])

    def mean(self) -> float:
        return float(np.dot(self.values, self.probs))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.values.size == 1:
            # degenerate law; consume no randomness
            return np.full(size, self.values[0], dtype=np.int64)
        return rng.choice(self.values, size=size, p=self.probs).astype(np.int64)


def from_constant(k) -> DegreeDistribution:
    return DegreeDistribution(np.array([int(k)]), np.array([1.0]))


def from_pmf(pmf: dict) -> DegreeDistribution:
    values = np.array(sorted(pmf), dtype=np.int64)
    probs = np.array([pmf[int(v)] for v in values], dtype=np.float64)
    return DegreeDistribution(values, probs)


def from_expected_degree(e) -> DegreeDistribution:
    """Two-consecutive-integer mixture with mean exactly e (e >= 1)."""
    e = float(e)
    if not np.isfinite(e) or e < 1:
        raise ValueError(f"expected degree must be >= 1, got {e!r}")
    lo = int(np.floor(e))
    frac = e - lo
    if frac == 0.0:
        return from_constant(lo)
    return DegreeDistribution(np.array([lo, lo + 1]), np.array([1.0 - frac, frac]))


def parse_degree_spec(spec) -> DegreeDistribution:
    """CLI degree grammar: "k" constant, "a:p,b:q" pmf, "e=2.5" expected degree."""
    if isinstance(spec, DegreeDistribution):
        return spec
    if isinstance(spec, (int, np.integer)):
        return from_constant(spec)
    text = str(spec).strip()
    if text.startswith("e="):
        try:
            return from_expected_degree(float(text[2:]))
        except ValueError as exc:
            raise ValueError(f"bad degree spec {spec!r}: {exc}") from None
    if ":" in text:
        pmf = {}
        for chunk in text.split(","):
            try:
                k, p = chunk.split(":")
                pmf[int(k)] = float(p)
            except ValueError:
                raise ValueError(f"bad degree spec {spec!r}: cannot parse {chunk!r}") from None
        return from_pmf(pmf)
    try:
        return from_constant(int(text))
    except ValueError:
        raise ValueError(f"bad degree spec {spec!r}") from None


@dataclass(frozen=True)
class MarkedConfig:
    """A PointConfig plus degrees, and optionally right-stub counts."""

    config: PointConfig
    degrees: np.ndarray
    rights: np.ndarray | None = None

    def __post_init__(self):
        d = np.asarray(self.degrees, dtype=np.int64)
        object.__setattr__(self, "degrees", d)
        if d.shape != (self.config.n,):
            raise ValueError("degrees must have one entry per point")
        if np.any(d <= 0):
            raise ValueError("degrees must be strictly positive")
        if self.rights is not None:
            r = np.asarray(self.rights, dtype=np.int64)
            object.__setattr__(self, "rights", r)
            if r.shape != d.shape:
                raise ValueError("rights must have one entry per point")
            if np.any(r < 0) or np.any(r > d):
                raise ValueError("rights must satisfy 0 <= R_x <= D_x")

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def lefts(self) -> np.ndarray:
        if self.rights is None:
            raise ValueError("no direction marks assigned")
        return self.degrees - self.rights


def assign_degrees(config: PointConfig, dist, rng) -> MarkedConfig:
    """Draw i.i.d. degrees for every point; ``dist`` is a DegreeDistribution
    or any spec accepted by :func:`parse_degree_spec` ("2", "e=2.1", ...)."""
    from .validation import as_generator

    gen, _ = as_generator(rng)
    return MarkedConfig(config, parse_degree_spec(dist).sample(gen, config.n))


def assign_directions(marked: MarkedConfig, rng) -> MarkedConfig:
    """Split each point's stubs with R_x ~ Binomial(D_x, 1/2).

    Existing rights, if any, are replaced by a fresh draw.
    """
    from .validation import as_generator

    gen, _ = as_generator(rng)
    rights = gen.binomial(marked.degrees, 0.5).astype(np.int64)
    return MarkedConfig(marked.config, marked.degrees, rights)
