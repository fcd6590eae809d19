"""Point configurations on an interval or a cycle, and their generators.

A configuration is a strictly increasing array of positions in ``[0, extent)``
together with topology metadata. Generators cover the homogeneous Poisson
process on an interval (intensity fixed at 1; rescale the length for other
intensities), a fixed number of uniform points on a cycle, and the
perturbed-lattice processes used by the counterexample schemes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .validation import as_generator, check_extent

__all__ = [
    "INTERVAL",
    "CYCLE",
    "Topology",
    "PointConfig",
    "PointFileError",
    "sample_poisson_interval",
    "sample_uniform_cycle",
    "gen_perturbed_lattice",
    "points_text",
    "save_points",
    "load_points",
]

INTERVAL = "interval"
CYCLE = "cycle"


@dataclass(frozen=True)
class Topology:
    """Ambient space of a configuration: a segment [0, extent] or a circle."""

    kind: str
    extent: float

    def __post_init__(self):
        if self.kind not in (INTERVAL, CYCLE):
            raise ValueError(f"unknown topology kind {self.kind!r}")
        object.__setattr__(self, "extent", check_extent(self.extent))

    @property
    def is_cycle(self) -> bool:
        return self.kind == CYCLE

    def distance(self, x, y):
        """Metric distance; circular distance wraps at extent/2."""
        d = np.abs(np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64))
        if self.kind == CYCLE:
            d = np.minimum(d, self.extent - d)
        return d


@dataclass(frozen=True)
class PointConfig:
    """Sorted point positions plus topology; optionally the seed that made it."""

    topology: Topology
    positions: np.ndarray
    seed_record: int | None = None

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float64)
        object.__setattr__(self, "positions", pos)
        if pos.ndim != 1:
            raise ValueError("positions must be a 1-d array")
        if pos.size:
            if not np.all(np.isfinite(pos)):
                raise ValueError("positions must be finite")
            if pos[0] < 0 or pos[-1] >= self.topology.extent:
                raise ValueError("positions must lie in [0, extent)")
            if pos.size > 1 and not np.all(np.diff(pos) > 0):
                raise ValueError("positions must be strictly increasing with no duplicates")

    @property
    def n(self) -> int:
        return int(self.positions.size)

    def distance(self, x, y):
        return self.topology.distance(x, y)


def _draw_sorted_uniform(rng, n: int, extent: float) -> np.ndarray:
    # Redraw on (measure-zero) float collisions so strict monotonicity holds.
    pos = np.sort(rng.random(n) * extent)
    while n > 1 and np.any(np.diff(pos) == 0):
        pos = np.sort(rng.random(n) * extent)
    return pos


def sample_poisson_interval(length, rng=None) -> PointConfig:
    """Homogeneous Poisson process of intensity 1 on the interval [0, length).

    The point count is a single Poisson(length) draw; given the count the
    positions are i.i.d. uniforms, sorted.

    Parameters
    ----------
    length : positive real
    rng : int seed, numpy Generator, or None

    Returns
    -------
    PointConfig with interval topology and extent ``length``.
    """
    length = check_extent(length)
    gen, record = as_generator(rng)
    n = int(gen.poisson(length))
    pos = _draw_sorted_uniform(gen, n, length)
    return PointConfig(Topology(INTERVAL, length), pos, seed_record=record)


def sample_uniform_cycle(n, circumference, rng=None) -> PointConfig:
    """Exactly ``n`` uniform points on a cycle of the given circumference.

    With ``circumference = n`` this emulates intensity 1.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be a positive integer")
    circumference = check_extent(circumference)
    gen, record = as_generator(rng)
    pos = _draw_sorted_uniform(gen, n, circumference)
    return PointConfig(Topology(CYCLE, circumference), pos, seed_record=record)


def gen_perturbed_lattice(cells, copies, rng=None) -> PointConfig:
    """Perturbed-lattice points ``(i + X + U) mod cells`` on a cycle.

    One global uniform shift U on [0,1]; per cell ``i`` there are ``copies``
    points, each displaced by an independent X uniform on [0, 1/3]. The draw
    order is U first, then the cells-by-copies X block, which pins the output
    for a given seed.
    """
    cells = int(cells)
    if cells < 2:
        raise ValueError("cells must be at least 2")
    if copies not in (1, 3):
        raise ValueError("copies must be 1 or 3")
    gen, record = as_generator(rng)
    u = gen.random()
    x = gen.random((cells, copies)) / 3.0
    base = np.arange(cells, dtype=np.float64)[:, None]
    pos = np.sort(((base + x + u) % cells).ravel())
    while pos.size > 1 and np.any(np.diff(pos) == 0):
        u = gen.random()
        x = gen.random((cells, copies)) / 3.0
        pos = np.sort(((base + x + u) % cells).ravel())
    return PointConfig(Topology(CYCLE, float(cells)), pos, seed_record=record)


class PointFileError(ValueError):
    """Malformed point file; message names the offending line."""

    def __init__(self, path, line_no, message):
        self.path = str(path)
        self.line_no = line_no
        super().__init__(f"{path}:{line_no}: {message}")


_HEADER_RE = re.compile(r"^topology=(interval|cycle)\s+extent=(\S+)$")


def points_text(config: PointConfig) -> str:
    """Point-file payload: header line, then one full-precision position per line."""
    lines = [f"topology={config.topology.kind} extent={config.topology.extent!r}"]
    lines.extend(repr(float(p)) for p in config.positions)
    return "\n".join(lines) + "\n"


def save_points(config: PointConfig, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(points_text(config))


def load_points(path) -> PointConfig:
    """Parse a point file written by save_points; errors name the line number."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read().splitlines()
    if not raw:
        raise PointFileError(path, 1, "missing header line")
    m = _HEADER_RE.match(raw[0].strip())
    if m is None:
        raise PointFileError(path, 1, f"bad header {raw[0]!r}")
    kind = m.group(1)
    try:
        extent = float(m.group(2))
    except ValueError:
        raise PointFileError(path, 1, f"bad extent {m.group(2)!r}") from None
    if not np.isfinite(extent) or extent <= 0:
        raise PointFileError(path, 1, f"extent must be positive, got {extent}")

    values = []
    prev = None
    for line_no, line in enumerate(raw[1:], start=2):
        text = line.strip()
        if not text:
            continue
        try:
            v = float(text)
        except ValueError:
            raise PointFileError(path, line_no, f"not a number: {text!r}") from None
        if not np.isfinite(v):
            raise PointFileError(path, line_no, f"position must be finite, got {text}")
        if v < 0 or v >= extent:
            raise PointFileError(path, line_no, f"position {v!r} outside [0, {extent})")
        if prev is not None and v <= prev:
            raise PointFileError(path, line_no, "not sorted (positions must strictly increase)")
        values.append(v)
        prev = v
    return PointConfig(Topology(kind, extent), np.asarray(values, dtype=np.float64))
