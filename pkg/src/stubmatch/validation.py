"""Input validation and RNG plumbing shared across the package."""

from __future__ import annotations

import numbers

import numpy as np

__all__ = ["as_generator", "check_positions", "check_extent"]


def as_generator(seed):
    """Return (rng, seed_record) for ints, Generators, SeedSequences or None.

    Integer seeds are recorded so downstream artifacts can report the seed
    that produced them; passing an existing Generator keeps the stream but
    loses the record (the caller owns it).
    """
    if isinstance(seed, np.random.Generator):
        return seed, None
    if seed is None:
        return np.random.default_rng(), None
    if isinstance(seed, np.random.SeedSequence):
        return np.random.default_rng(seed), None
    if isinstance(seed, numbers.Integral):
        s = int(seed)
        if s < 0:
            raise ValueError("seed must be a non-negative integer")
        return np.random.default_rng(s), s
    raise TypeError(f"cannot build a random generator from {seed!r}")


def check_extent(extent) -> float:
    ext = float(extent)
    if not np.isfinite(ext) or ext <= 0:
        raise ValueError(f"extent must be a positive finite real, got {extent!r}")
    return ext


def check_positions(X, *, sort: bool = True) -> np.ndarray:
    """Coerce X to a 1-d strictly increasing float64 position array.

    Accepts shape (n,) or a single-column (n, 1) array. Duplicate positions
    are rejected: every downstream distance comparison assumes distinct
    points.
    """
    pos = np.asarray(X, dtype=np.float64)
    if pos.ndim == 2 and pos.shape[1] == 1:
        pos = pos[:, 0]
    if pos.ndim != 1:
        raise ValueError(f"positions must be 1-d (or a single column), got shape {pos.shape}")
    if pos.size and not np.all(np.isfinite(pos)):
        raise ValueError("positions must be finite")
    if sort:
        pos = np.sort(pos)
    elif pos.size > 1 and not np.all(np.diff(pos) > 0):
        raise ValueError("positions must be strictly increasing")
    if pos.size > 1 and np.any(np.diff(pos) == 0):
        raise ValueError("duplicate positions are not allowed")
    return pos
