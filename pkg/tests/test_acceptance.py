"""Acceptance gate: one test per headline claim, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict lines
as they happen. Every test recomputes its quantity from scratch with fixed
seeds; tolerances are stated inline next to each check.
"""

import math
from fractions import Fraction

import numpy as np

from stubmatch import (
    CYCLE,
    INTERVAL,
    MarkedConfig,
    PointConfig,
    Topology,
    assign_directions,
    binomial_tail,
    block_combination_check,
    check_cross_closure,
    components,
    core_match,
    crossing_count,
    crossings_at,
    desire_profile,
    gen_perturbed_lattice,
    parse_degree_spec,
    point_stats,
    random_direction_match,
    renorm_iterate,
    renorm_threshold,
    replica_rng,
    run_goodness,
    run_table1,
    sample_poisson_interval,
    sample_uniform_cycle,
    stability_audit,
    stable_multimatch,
    tail_suite,
)


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"[criterion {num:>2}] {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, f"criterion {num}: {detail}"


def _marked(cfg: PointConfig, spec, rng) -> MarkedConfig:
    return MarkedConfig(cfg, parse_degree_spec(spec).sample(rng, cfg.n))


# ---------------------------------------------------------------------------


def test_criterion_01_largest_component_table_degree2():
    # 10 replicas per size; means must sit within 3 reference sample sd.
    reference = {2**10: (0.244, 0.099), 2**14: (0.297, 0.014), 2**18: (0.292, 0.005)}
    report = run_table1(sorted(reference), "2", replicas=10, base_seed=0, jobs=1)
    rows = {row["n"]: row["mean"] for row in report.aggregates["per_size"]}
    checks = []
    for n, (mean_ref, sd_ref) in reference.items():
        checks.append(abs(rows[n] - mean_ref) <= 3 * sd_ref)
    detail = ", ".join(
        f"n=2^{int(math.log2(n))}: {rows[n]:.4f} vs {m}±{3 * s:.3f}"
        for n, (m, s) in reference.items()
    )
    _verdict(1, all(checks), detail)


def test_criterion_02_largest_component_decay_rows():
    r3 = run_table1([2**14], "3", replicas=10, base_seed=0, jobs=1)
    mean3 = r3.aggregates["per_size"][0]["mean"]
    r21 = run_table1([2**16], "e=2.1", replicas=10, base_seed=0, jobs=1)
    mean21 = r21.aggregates["per_size"][0]["mean"]
    ok = 0.03 <= mean3 <= 0.07 and mean21 <= 0.01
    _verdict(2, ok, f"degree 3: {mean3:.4f} in [0.03, 0.07]; e=2.1: {mean21:.4f} <= 0.01")


def test_criterion_03_goodness_experiment():
    full = run_goodness(13000.0, 1000, base_seed=1, jobs=1)
    good = full.aggregates["good"]
    p_value = full.verdicts["p_value"]
    reduced = run_goodness(13000.0, 100, base_seed=0, jobs=1)
    good_small = reduced.aggregates["good"]
    ok = (975 <= good <= 1000) and p_value < 1e-6 and good_small >= 94
    _verdict(
        3,
        ok,
        f"good {good}/1000 in [975, 1000], p={p_value:.3e} < 1e-6; "
        f"reduced {good_small}/100 >= 94",
    )


def test_criterion_04_structural_invariants_500_instances():
    failures = 0
    for i in range(500):
        rng = replica_rng(99, i)
        n = int(rng.integers(4, 501))
        extent = float(n)
        pos = np.unique(rng.uniform(0.0, extent, size=n))
        cfg = PointConfig(Topology(INTERVAL, extent), pos)
        degs = np.full(pos.size, 2, dtype=np.int64)
        marked = MarkedConfig(cfg, degs)

        stable = stable_multimatch(marked)
        if crossing_count(stable) != 0:
            failures += 1
        if stability_audit(stable, marked):
            failures += 1

        directed = assign_directions(marked, rng)
        rd = random_direction_match(directed)
        if check_cross_closure(rd):
            failures += 1
        if stability_audit(rd, directed):
            failures += 1

        # conservative window matching sits inside the full stable matching
        w = extent / 3.0
        mask = (pos >= w) & (pos < 2 * w)
        parent = np.flatnonzero(mask)
        sub_cfg = PointConfig(Topology(INTERVAL, w), pos[mask] - w)
        sub = MarkedConfig(sub_cfg, degs[mask])
        fast = core_match(sub, method="fast")
        general = core_match(sub, method="general")
        if fast.edge_set() != general.edge_set():
            failures += 1
        whole = stable.edge_set()
        mapped = {(int(parent[a]), int(parent[b])) for a, b in fast.edge_set()}
        if not mapped <= whole:
            failures += 1
    _verdict(4, failures == 0, f"violations over 500 instances: {failures}")


def test_criterion_05_lattice_processes_exact_structure():
    bad = []
    for seed in (0, 5, 8, 13):
        rng = np.random.default_rng(seed)
        single = gen_perturbed_lattice(60, 1, rng)
        m1 = stable_multimatch(_marked(single, "2", rng))
        n = single.n
        want = {(i, i + 1) for i in range(n - 1)} | {(0, n - 1)}
        comp = components(m1)
        if m1.edge_set() != want or comp.n_components != 1 or comp.largest_fraction != 1.0:
            bad.append((seed, 1))

        triple = gen_perturbed_lattice(60, 3, rng)
        m3 = stable_multimatch(_marked(triple, "2", rng))
        sizes = set(components(m3).sizes.tolist())
        if sizes != {3} or int(m3.leftover.sum()) != 0:
            bad.append((seed, 3))
    _verdict(5, not bad, f"seeds 0/5/8/13: copies=1 spans adjacently, copies=3 all triples; bad={bad}")


def test_criterion_06_random_direction_fraction_shrinks():
    means = {}
    for si, n in enumerate((2**12, 2**16)):
        vals = []
        for r in range(10):
            rng = replica_rng(11, si, r)
            cfg = sample_poisson_interval(float(n), rng)
            marked = assign_directions(_marked(cfg, "2", rng), rng)
            vals.append(components(random_direction_match(marked)).largest_fraction)
        means[n] = float(np.mean(vals))
    ok = means[2**16] < 0.5 * means[2**12]
    _verdict(6, ok, f"fraction 2^16 {means[2**16]:.5f} < half of 2^12 {means[2**12]:.5f}")


def test_criterion_07_mass_transport_identity():
    n = 2**16
    rng = replica_rng(21, 0)
    cfg = sample_uniform_cycle(n, float(n), rng)
    marked = _marked(cfg, "2", rng)
    matching = stable_multimatch(marked)
    mean_m = float(point_stats(matching, marked).M.mean())
    sites = rng.uniform(0.0, cfg.topology.extent, size=20000)
    mean_n = float(desire_profile(matching, cfg, sites).mean())
    ratio = mean_n / (2.0 * mean_m)
    _verdict(7, 0.9 <= ratio <= 1.1, f"E[N] / (2 E*[M]) = {ratio:.4f} in [0.9, 1.1]")


def test_criterion_08_tail_suite_bounds():
    stable16 = tail_suite("stable", "2", 2**16, replicas=8, base_seed=5, jobs=1,
                          clt_replicas=64)
    stable18 = tail_suite("stable", "2", 2**18, replicas=8, base_seed=5, jobs=1,
                          clt_replicas=64)
    a = np.array(stable16.aggregates["stable_M"]["mean_per_t"])
    b = np.array(stable18.aggregates["stable_M"]["mean_per_t"])
    k = min(a.size, b.size)
    ratios = a[:k] / b[:k]
    bounded = bool(np.all((ratios >= 0.5) & (ratios <= 2.0)))

    directed = tail_suite("random_direction", "2", 2**16, replicas=8, base_seed=5,
                          jobs=1, clt_replicas=64)
    frac = directed.aggregates["directed_X"]["min_over_max"]
    no_decay = frac >= 0.1
    _verdict(
        8,
        bounded and no_decay,
        f"t*P(M>t) ratios 2^16/2^18 in [{ratios.min():.3f}, {ratios.max():.3f}] "
        f"within 2x; X^t/sqrt(t) min/max {frac:.3f} >= 0.1",
    )


def test_criterion_09_odd_degree_crossings_grow():
    medians = {}
    for si, n in enumerate((2**12, 2**16)):
        vals = []
        for r in range(30):
            rng = replica_rng(11, 7 + si, r)
            cfg = sample_poisson_interval(float(n), rng)
            matching = stable_multimatch(_marked(cfg, "3", rng))
            vals.append(crossings_at(matching, cfg, n / 2.0))
        medians[n] = float(np.median(vals))
    ok = medians[2**16] > medians[2**12]
    _verdict(9, ok, f"median crossings at center: {medians[2**12]} (2^12) -> {medians[2**16]} (2^16)")


def test_criterion_10_numerical_kernels():
    worst = 0.0
    for n in range(1, 31):
        for k in range(0, n + 1):
            for p0 in (0.3, 0.5, 0.968):
                p = Fraction(p0).limit_denominator(10**6)
                exact = sum(
                    Fraction(math.comb(n, j)) * p**j * (1 - p) ** (n - j)
                    for j in range(k, n + 1)
                )
                worst = max(worst, abs(binomial_tail(n, k, float(p)) - float(exact)))
    tails_ok = worst <= 1e-12

    walk = renorm_iterate(0.968)
    threshold = renorm_threshold()
    renorm_ok = walk["converged"] and 0.968 > threshold

    blocks = block_combination_check(500.0, 200, base_seed=0, jobs=1)
    blocks_ok = blocks.aggregates["violations"] == 0
    _verdict(
        10,
        tails_ok and renorm_ok and blocks_ok,
        f"binomial tail max err {worst:.2e} <= 1e-12; iterate(0.968) -> 1 with "
        f"threshold {threshold:.6f} < 0.968; block violations {blocks.aggregates['violations']}/200",
    )
