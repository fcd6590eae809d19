import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.random import default_rng

from stubmatch.degrees import (
    DegreeDistribution,
    MarkedConfig,
    assign_degrees,
    assign_directions,
    parse_degree_spec,
)
from stubmatch.pointsets import sample_poisson_interval


def test_constant_spec():
    dist = parse_degree_spec("2")
    out = dist.sample(default_rng(0), 1000)
    assert np.all(out == 2)
    assert dist.max_degree == 2
    assert dist.mean() == 2.0


def test_spec_accepts_int_and_distribution():
    assert parse_degree_spec(3).mean() == 3.0
    dist = DegreeDistribution(np.array([1, 4]), np.array([0.25, 0.75]))
    assert parse_degree_spec(dist) is dist


def test_expected_degree_splits_between_neighbors():
    dist = parse_degree_spec("e=2.5")
    assert sorted(dist.values.tolist()) == [2, 3]
    assert dist.mean() == pytest.approx(2.5)
    out = dist.sample(default_rng(0), 200000)
    assert abs(out.mean() - 2.5) < 0.01

    dist = parse_degree_spec("e=2.1")
    out = dist.sample(default_rng(0), 200000)
    assert abs(np.mean(out == 3) - 0.1) < 0.005
    assert abs(out.mean() - 2.1) < 0.01


def test_pmf_spec():
    dist = parse_degree_spec("2:0.9,3:0.1")
    assert dist.mean() == pytest.approx(2.1)
    assert dist.max_degree == 3
    out = dist.sample(default_rng(5), 100000)
    assert set(np.unique(out)) <= {2, 3}


@pytest.mark.parametrize("bad", ["e=0.9", "0", "-1", "junk", "2:0.5,3:0.6", "2:0.5", ""])
def test_bad_specs_raise(bad):
    with pytest.raises(ValueError):
        parse_degree_spec(bad)


def test_degenerate_sampling_consumes_no_randomness():
    rng_a, rng_b = default_rng(7), default_rng(7)
    parse_degree_spec("2").sample(rng_a, 1000)
    assert rng_a.standard_normal() == rng_b.standard_normal()


@given(p=st.floats(0.01, 0.99), lo=st.integers(1, 6), gap=st.integers(1, 4))
@settings(max_examples=50, deadline=None)
def test_two_point_pmf_properties(p, lo, gap):
    hi = lo + gap
    dist = DegreeDistribution(np.array([lo, hi]), np.array([p, 1.0 - p]))
    assert dist.mean() == pytest.approx(lo * p + hi * (1.0 - p))
    assert dist.max_degree == hi
    out = dist.sample(default_rng(0), 500)
    assert set(np.unique(out)) <= {lo, hi}


def test_assign_degrees_matches_config():
    cfg = sample_poisson_interval(200.0, 1)
    marked = assign_degrees(cfg, parse_degree_spec("e=2.5"), default_rng(2))
    assert marked.config is cfg
    assert marked.degrees.shape == (cfg.n,)
    assert marked.rights is None


def test_assign_directions_binomial_half():
    cfg = sample_poisson_interval(50000.0, 3)
    marked = assign_degrees(cfg, parse_degree_spec("2"), default_rng(3))
    directed = assign_directions(marked, default_rng(4))
    r = directed.rights
    assert np.all((r >= 0) & (r <= 2))
    # R ~ Binomial(2, 1/2): mean 1, and L - R = D - 2R has variance 2
    assert abs(r.mean() - 1.0) < 0.02
    assert abs(np.var(directed.degrees - 2 * r) - 2.0) < 0.1
    assert np.array_equal(directed.lefts, directed.degrees - r)


def test_marked_config_validation():
    cfg = sample_poisson_interval(10.0, 6)
    n = cfg.n
    with pytest.raises(ValueError):
        MarkedConfig(cfg, np.zeros(n, dtype=np.int64))
    with pytest.raises(ValueError):
        MarkedConfig(cfg, np.full(n + 1, 2, dtype=np.int64))
    with pytest.raises(ValueError):
        MarkedConfig(cfg, np.full(n, 2, dtype=np.int64), np.full(n, 3, dtype=np.int64))
