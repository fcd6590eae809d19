"""Monte-Carlo experiment harness with exact binomial testing.

Every experiment returns an ExperimentReport: the resolved spec, one record
per replica, aggregates recomputable from the records, and test verdicts.
Replica seeds derive from the base seed and the replica index through
SeedSequence spawn keys, so reports are identical no matter how many worker
processes run the replicas.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np
import scipy
from scipy.special import gammaln, logsumexp
from scipy.stats import beta

from .analysis import components, interior_mask, is_good, point_stats
from .degrees import DegreeDistribution, MarkedConfig, assign_directions, parse_degree_spec
from .matching import core_match, random_direction_match, stable_multimatch
from .pointsets import INTERVAL, PointConfig, Topology, sample_poisson_interval, sample_uniform_cycle

__all__ = [
    "ExperimentReport",
    "replica_rng",
    "binomial_tail",
    "clopper_pearson",
    "run_goodness",
    "run_table1",
    "renorm_map",
    "renorm_iterate",
    "renorm_threshold",
    "tail_suite",
    "block_combination_check",
    "GOODNESS_P0",
    "SIGNIFICANCE",
    "MIN_TEST_SAMPLES",
]

GOODNESS_P0 = 0.968
SIGNIFICANCE = 1e-6
MIN_TEST_SAMPLES = 30


# ---------------------------------------------------------------------------
# report plumbing


def _plain(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


@dataclass
class ExperimentReport:
    """Versioned experiment result; JSON (full) and CSV (per-replica rows)."""

    kind: str
    spec: dict
    replicas: list
    aggregates: dict
    verdicts: dict
    meta: dict = field(default_factory=dict)

    def to_dict(self, include_meta: bool = True) -> dict:
        out = {
            "schema": 1,
            "kind": self.kind,
            "spec": self.spec,
            "replicas": self.replicas,
            "aggregates": self.aggregates,
            "verdicts": self.verdicts,
        }
        if include_meta:
            out["meta"] = self.meta
        return out

    def to_json(self, include_meta: bool = True) -> str:
        return json.dumps(self.to_dict(include_meta), indent=2, sort_keys=True, default=_plain) + "\n"

    def replica_csv(self) -> str:
        buf = io.StringIO()
        if self.replicas:
            names = list(self.replicas[0])
            for rec in self.replicas[1:]:
                names.extend(k for k in rec if k not in names)
            writer = csv.DictWriter(buf, fieldnames=names, restval="", lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.replicas)
        return buf.getvalue()


def replica_rng(base_seed: int, *key: int) -> np.random.Generator:
    """Generator for one replica: derived, not sequential, so any subset of
    replicas can run in any process and still see the same stream."""
    return np.random.default_rng(np.random.SeedSequence(int(base_seed), spawn_key=tuple(key)))


def _run(worker, common: tuple, count: int, jobs: int | None) -> list:
    args = [(common, idx) for idx in range(count)]
    if jobs is not None and jobs > 1 and count > 1:
        with multiprocessing.Pool(processes=jobs) as pool:
            return pool.map(worker, args)
    return [worker(a) for a in args]


def _meta(t0: float, jobs) -> dict:
    return {
        "elapsed_s": round(time.perf_counter() - t0, 3),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "jobs": jobs,
    }


# ---------------------------------------------------------------------------
# numerical kernels


def binomial_tail(n: int, k: int, p0: float) -> float:
    """Exact upper tail P[Binomial(n, p0) >= k], in log space."""
    n = int(n)
    k = int(k)
    p0 = float(p0)
    if n < 0 or not 0 <= k <= n or not 0.0 <= p0 <= 1.0:
        raise ValueError("need 0 <= k <= n and p0 in [0, 1]")
    if k == 0:
        return 1.0
    if p0 == 0.0:
        return 0.0
    if p0 == 1.0:
        return 1.0
    j = np.arange(k, n + 1, dtype=np.float64)
    log_pmf = (
        gammaln(n + 1.0)
        - gammaln(j + 1.0)
        - gammaln(n - j + 1.0)
        + j * np.log(p0)
        + (n - j) * np.log1p(-p0)
    )
    return float(min(1.0, np.exp(logsumexp(log_pmf))))


def clopper_pearson(k: int, n: int, level: float = 0.99) -> tuple:
    """Exact two-sided confidence interval for a binomial proportion."""
    k = int(k)
    n = int(n)
    if n < 1 or not 0 <= k <= n or not 0.0 < level < 1.0:
        raise ValueError("need 0 <= k <= n, n >= 1, level in (0, 1)")
    alpha = 1.0 - level
    lo = 0.0 if k == 0 else float(beta.ppf(alpha / 2.0, k, n - k + 1))
    hi = 1.0 if k == n else float(beta.ppf(1.0 - alpha / 2.0, k + 1, n - k))
    return lo, hi


def renorm_map(p: float) -> float:
    """One renormalization step for the goodness probability, f(p) = p^9 + 9 p^8 (1-p)."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return p**9 + 9.0 * p**8 * (1.0 - p)


def renorm_iterate(p0: float, k_max: int = 200) -> dict:
    """Iterate the renormalization map; convergence means 1 - p < 1e-12."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    p0 = float(p0)
    if not 0.0 <= p0 <= 1.0:
        raise ValueError("p0 must lie in [0, 1]")
    seq = [p0]
    while len(seq) <= k_max and 1.0 - seq[-1] >= 1e-12:
        seq.append(renorm_map(seq[-1]))
    return {
        "sequence": seq,
        "converged": bool(1.0 - seq[-1] < 1e-12),
        "gap_sum": float(sum(1.0 - p for p in seq)),
    }


def renorm_threshold(tol: float = 1e-12) -> float:
    """Largest fixed point of the renormalization map strictly below 1."""
    grid = np.linspace(0.5, 1.0 - 1e-9, 4096)
    g = grid**9 + 9.0 * grid**8 * (1.0 - grid) - grid
    sign_up = np.flatnonzero((g[:-1] < 0) & (g[1:] >= 0))
    lo, hi = grid[sign_up[-1]], grid[sign_up[-1] + 1]
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if renorm_map(mid) - mid < 0:
            lo = mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


# ---------------------------------------------------------------------------
# goodness of a window under the core matching


def _degree2(cfg: PointConfig) -> MarkedConfig:
    return MarkedConfig(cfg, np.full(cfg.n, 2, dtype=np.int64))


def _goodness_replica(args):
    (length, base_seed), idx = args
    cfg = sample_poisson_interval(length, replica_rng(base_seed, idx))
    matching = core_match(_degree2(cfg))
    return {
        "replica": idx,
        "n": cfg.n,
        "edges": matching.m,
        "good": bool(is_good(matching, cfg)),
    }


def run_goodness(length: float, replicas: int, base_seed: int = 0, jobs: int | None = None) -> ExperimentReport:
    """Estimate P(window is good) and test it against p0 = 0.968 exactly."""
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    t0 = time.perf_counter()
    records = _run(_goodness_replica, (float(length), int(base_seed)), int(replicas), jobs)
    good = sum(r["good"] for r in records)
    aggregates = {
        "replicas": replicas,
        "good": good,
        "p_hat": good / replicas,
        "ci99": list(clopper_pearson(good, replicas, 0.99)),
    }
    if replicas >= MIN_TEST_SAMPLES:
        p_value = binomial_tail(replicas, good, GOODNESS_P0)
        verdict = "reject" if p_value < SIGNIFICANCE else "fail-to-reject"
    else:
        p_value, verdict = None, "insufficient-samples"
    verdicts = {
        "p0": GOODNESS_P0,
        "alpha": SIGNIFICANCE,
        "p_value": p_value,
        "verdict": verdict,
    }
    spec = {"length": float(length), "replicas": int(replicas), "base_seed": int(base_seed), "degrees": "2"}
    return ExperimentReport("goodness", spec, records, aggregates, verdicts, _meta(t0, jobs))


# ---------------------------------------------------------------------------
# largest-component table


def _table1_replica(args):
    (n, spec_str, base_seed, size_index), idx = args
    rng = replica_rng(base_seed, size_index, idx)
    cfg = sample_uniform_cycle(n, float(n), rng)
    degs = parse_degree_spec(spec_str).sample(rng, n)
    matching = stable_multimatch(MarkedConfig(cfg, degs))
    return {
        "replica": idx,
        "n": n,
        "largest_fraction": components(matching).largest_fraction,
    }


def run_table1(sizes, degree_spec, replicas: int, base_seed: int = 0, jobs: int | None = None) -> ExperimentReport:
    """Mean and sample sd of the largest component fraction per cycle size."""
    sizes = [int(s) for s in sizes]
    if not sizes or replicas < 1:
        raise ValueError("need at least one size and one replica")
    spec_str = _canonical_degree_spec(degree_spec)
    t0 = time.perf_counter()
    records = []
    per_size = []
    for si, n in enumerate(sizes):
        recs = _run(_table1_replica, (n, spec_str, int(base_seed), si), int(replicas), jobs)
        records.extend(recs)
        vals = np.array([r["largest_fraction"] for r in recs])
        per_size.append(
            {
                "n": n,
                "mean": float(vals.mean()),
                "sd": float(vals.std(ddof=1)) if vals.size > 1 else None,
            }
        )
    spec = {"sizes": sizes, "degrees": spec_str, "replicas": int(replicas), "base_seed": int(base_seed)}
    return ExperimentReport("table1", spec, records, {"per_size": per_size}, {}, _meta(t0, jobs))


def _canonical_degree_spec(degree_spec) -> str:
    if isinstance(degree_spec, DegreeDistribution):
        return ",".join(f"{k}:{p}" for k, p in zip(degree_spec.support, degree_spec.probs))
    return str(degree_spec)


# ---------------------------------------------------------------------------
# tail statistics over a geometric t-grid


def t_grid(extent: float, points: int = 11) -> np.ndarray:
    """Geometric grid with ratio 2 from the mean gap (1 at unit intensity),
    kept well inside the window. The default depth stops while the deepest
    cell still sees a usable number of exceedances at the window sizes the
    experiments run at; deeper cells are pure estimator noise."""
    grid = np.ldexp(1.0, np.arange(points))
    return grid[grid <= extent / 16.0]


def _tails_stable_replica(args):
    (n, spec_str, base_seed, grid), idx = args
    rng = replica_rng(base_seed, 0, idx)
    cfg = sample_uniform_cycle(n, float(n), rng)
    degs = parse_degree_spec(spec_str).sample(rng, n)
    marked = MarkedConfig(cfg, degs)
    stats = point_stats(stable_multimatch(marked), marked)
    # no trim: every cycle point is interior
    return [
        {"replica": idx, "family": "stable_M", "t": float(t), "value": float(t * np.mean(stats.M > t))}
        for t in grid
    ]


def _tails_directed_replica(args):
    (n, spec_str, base_seed, grid), idx = args
    rng = replica_rng(base_seed, 0, idx)
    cfg = sample_poisson_interval(float(n), rng)
    degs = parse_degree_spec(spec_str).sample(rng, cfg.n)
    marked = assign_directions(MarkedConfig(cfg, degs), rng)
    stats = point_stats(random_direction_match(marked), marked)
    keep = interior_mask(cfg)
    x = stats.X[keep]
    return [
        {
            "replica": idx,
            "family": "directed_X",
            "t": float(t),
            "value": float(np.mean(np.minimum(x, t)) / np.sqrt(t)) if x.size else 0.0,
        }
        for t in grid
    ]


def _tails_marks_replica(args):
    (spec_str, base_seed, grid), idx = args
    rng = replica_rng(base_seed, 1, idx)
    dist = parse_degree_spec(spec_str)
    out = []
    for t in grid:
        count = int(rng.poisson(2.0 * t))
        degs = dist.sample(rng, count)
        rights = rng.binomial(degs, 0.5) if count else np.empty(0, dtype=np.int64)
        surplus = float((2 * rights - degs).sum())
        out.append(
            {"replica": idx, "family": "marks_clt", "t": float(t), "value": max(surplus, 0.0) / np.sqrt(t)}
        )
    return out


_TAIL_WORKERS = {"stable": _tails_stable_replica, "random_direction": _tails_directed_replica}


def tail_suite(
    scheme: str,
    degree_spec,
    n: int,
    replicas: int,
    base_seed: int = 0,
    jobs: int | None = None,
    clt_replicas: int = 512,
) -> ExperimentReport:
    """Tail estimates on a geometric t-grid, plus the marks-level surplus check.

    stable: t * P*(M > t), averaged over replicas (bounded if the tail decays
    like 1/t). random_direction: E*[X ^ t] / sqrt(t) (bounded away from 0 if
    X has infinite square-root moment). marks_clt: E[(right-left surplus on a
    window of length 2t)+] / sqrt(t), flat under the CLT, estimated from
    marks alone.
    """
    if scheme not in _TAIL_WORKERS:
        raise ValueError("scheme must be 'stable' or 'random_direction'")
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    spec_str = _canonical_degree_spec(degree_spec)
    grid = t_grid(float(n))
    t0 = time.perf_counter()
    nested = _run(_TAIL_WORKERS[scheme], (int(n), spec_str, int(base_seed), grid), int(replicas), jobs)
    nested += _run(_tails_marks_replica, (spec_str, int(base_seed), grid), int(clt_replicas), jobs)
    records = [rec for group in nested for rec in group]

    aggregates = {"t_grid": [float(t) for t in grid]}
    for family in (("stable_M" if scheme == "stable" else "directed_X"), "marks_clt"):
        per_t = []
        for t in grid:
            vals = [r["value"] for r in records if r["family"] == family and r["t"] == float(t)]
            per_t.append(float(np.mean(vals)))
        entry = {"mean_per_t": per_t}
        if max(per_t) > 0:
            entry["min_over_max"] = float(min(per_t) / max(per_t))
        aggregates[family] = entry
    spec = {
        "scheme": scheme,
        "degrees": spec_str,
        "n": int(n),
        "replicas": int(replicas),
        "clt_replicas": int(clt_replicas),
        "base_seed": int(base_seed),
    }
    return ExperimentReport("tails", spec, records, aggregates, {}, _meta(t0, jobs))


# ---------------------------------------------------------------------------
# block combination (9-block goodness implication)


def _blocks_replica(args):
    (x, base_seed), idx = args
    cfg = sample_poisson_interval(9.0 * x, replica_rng(base_seed, idx))
    pos = cfg.positions
    blocks_good = 0
    for k in range(9):
        cuts = np.searchsorted(pos, [k * x, (k + 1) * x], side="left")
        sub = PointConfig(Topology(INTERVAL, x), pos[cuts[0] : cuts[1]] - k * x)
        if is_good(core_match(_degree2(sub)), sub):
            blocks_good += 1
    whole_good = bool(is_good(core_match(_degree2(cfg)), cfg))
    return {
        "replica": idx,
        "n": cfg.n,
        "blocks_good": blocks_good,
        "whole_good": whole_good,
        "violation": blocks_good >= 8 and not whole_good,
    }


def block_combination_check(x: float, replicas: int, base_seed: int = 0, jobs: int | None = None) -> ExperimentReport:
    """Check that >= 8 good ninth-blocks force a good whole window."""
    if x <= 0 or replicas < 1:
        raise ValueError("x must be positive and replicas >= 1")
    t0 = time.perf_counter()
    records = _run(_blocks_replica, (float(x), int(base_seed)), int(replicas), jobs)
    violations = [r["replica"] for r in records if r["violation"]]
    aggregates = {
        "replicas": replicas,
        "violations": len(violations),
        "violation_replicas": violations,
        "eight_or_more": sum(r["blocks_good"] >= 8 for r in records),
    }
    verdicts = {"holds": not violations}
    spec = {"x": float(x), "replicas": int(replicas), "base_seed": int(base_seed), "degrees": "2"}
    return ExperimentReport("blocks", spec, records, aggregates, verdicts, _meta(t0, jobs))
