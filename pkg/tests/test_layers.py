import math
import random

import pytest
from hypothesis import given, strategies as st

from overlap_graph_lab.errors import ConfigError
from overlap_graph_lab.layers import (
    BinomialSize,
    FiniteTable,
    PointMass,
    cross_moment,
    monte_carlo_cross_moment,
    parse_distribution,
    sample_layer,
    truncated_cross_moment,
)


def binom_factorial_moment_by_pmf(N, p, r):
    # independent oracle: sum (k)_r * pmf(k) term by term
    total = 0.0
    for k in range(N + 1):
        ff = 1
        for i in range(r):
            ff *= k - i
        total += ff * math.comb(N, k) * p**k * (1 - p) ** (N - k)
    return total


def test_point_mass_sample_is_degenerate():
    rng = random.Random(1)
    d = PointMass(5, 0.5)
    assert {sample_layer(d, rng) for _ in range(100)} == {(5, 0.5)}


def test_table_sampling_frequency():
    rng = random.Random(7)
    d = FiniteTable(((2, 1.0, 0.5), (3, 0.2, 0.5)))
    draws = 100_000
    hits = sum(sample_layer(d, rng).x == 2 for _ in range(draws))
    se = math.sqrt(0.25 / draws)
    assert abs(hits / draws - 0.5) < 3 * se


def test_table_strength_follows_size():
    rng = random.Random(3)
    d = FiniteTable(((2, 1.0, 0.5), (3, 0.2, 0.5)))
    for _ in range(200):
        x, y = sample_layer(d, rng)
        assert y == (1.0 if x == 2 else 0.2)


def test_binomial_sampling_mean():
    rng = random.Random(11)
    d = BinomialSize(10, 0.3, 1.0)
    draws = 100_000
    xs = [sample_layer(d, rng).x for _ in range(draws)]
    se = math.sqrt(10 * 0.3 * 0.7 / draws)
    assert abs(sum(xs) / draws - 3.0) < 3 * se


@pytest.mark.parametrize(
    "dist, r, s, expected",
    [
        (PointMass(5, 0.5), 3, 3, 7.5),
        (PointMass(2, 0.9), 3, 1, 0),
        (PointMass(4, 1.0), 0, 0, 1),
    ],
)
def test_cross_moment_trivial(dist, r, s, expected):
    assert cross_moment(dist, r, s) == pytest.approx(expected)


def test_binomial_factorial_moment_matches_pmf_sum():
    oracle = binom_factorial_moment_by_pmf(10, 0.3, 2)
    assert oracle == pytest.approx(8.1, rel=1e-12)
    assert cross_moment(BinomialSize(10, 0.3, 1.0), 2, 0) == pytest.approx(oracle, rel=1e-12)
    for r in range(0, 12):
        assert cross_moment(BinomialSize(10, 0.3, 0.7), r, 2) == pytest.approx(
            binom_factorial_moment_by_pmf(10, 0.3, r) * 0.49, rel=1e-10, abs=1e-300
        )


def test_table_moment_is_weighted_sum():
    rows = ((2, 1.0, 0.25), (3, 0.2, 0.5), (7, 0.6, 0.25))
    d = FiniteTable(rows)
    for r in range(5):
        for s in range(4):
            explicit = sum(w * math.perm(x, r) * y**s for x, y, w in rows)
            assert cross_moment(d, r, s) == pytest.approx(explicit, rel=1e-15, abs=1e-15)


@pytest.mark.parametrize(
    "dist, a, b, M, expected",
    [
        (PointMass(5, 0.5), 3, 3, 5, 0),
        (PointMass(5, 0.5), 3, 3, 4, 7.5),
        (BinomialSize(10, 0.3, 1.0), 2, 0, 10, 0),
    ],
)
def test_truncated_moment_examples(dist, a, b, M, expected):
    assert truncated_cross_moment(dist, a, b, M) == pytest.approx(expected)


DISTS = [
    PointMass(5, 0.5),
    PointMass(0, 0.3),
    FiniteTable(((0, 0.4, 0.2), (2, 1.0, 0.3), (6, 0.25, 0.5))),
    BinomialSize(12, 0.35, 0.6),
]


@pytest.mark.parametrize("dist", DISTS, ids=str)
def test_truncated_moment_properties(dist):
    assert cross_moment(dist, 0, 0) == pytest.approx(1)
    for a in range(4):
        for b in range(3):
            full = cross_moment(dist, a, b)
            prev = math.inf
            for M in range(0, 14):
                t = truncated_cross_moment(dist, a, b, M)
                assert -1e-15 <= t <= full + 1e-12
                assert t <= prev + 1e-12
                prev = t
            if a >= 1:
                assert truncated_cross_moment(dist, a, b, 0) == pytest.approx(full)


def test_monte_carlo_moment_within_4se():
    d = BinomialSize(10, 0.3, 0.7)
    est, se = monte_carlo_cross_moment(d, 2, 2, samples=1_000_000, seed=5)
    assert abs(est - cross_moment(d, 2, 2)) < 4 * se


@given(st.lists(st.tuples(st.integers(0, 9), st.floats(0, 1), st.floats(0.01, 1)), min_size=1, max_size=5))
def test_table_normalised_weights(rows):
    total = sum(w for _, _, w in rows)
    rows = tuple((x, y, w / total) for x, y, w in rows)
    if abs(sum(w for _, _, w in rows) - 1) > 1e-9:
        return
    d = FiniteTable(rows)
    assert cross_moment(d, 0, 0) == pytest.approx(1)


def test_parse_distribution():
    assert parse_distribution("point:x=5,y=0.5") == PointMass(5, 0.5)
    assert parse_distribution("table:(2,1.0,0.5);(3,0.2,0.5)") == FiniteTable(((2, 1.0, 0.5), (3, 0.2, 0.5)))
    assert parse_distribution("binom:N=10,p=0.3,y=0.5") == BinomialSize(10, 0.3, 0.5)
    assert parse_distribution(PointMass(5, 0.5).spec) == PointMass(5, 0.5)


@pytest.mark.parametrize(
    "bad",
    [
        "table:(2,1.0,0.5);(3,0.2,0.4)",
        "point:x=5,y=1.5",
        "binom:N=10,p=0.3,y=-0.1",
        "point:x=2.5,y=0.5",
        "gamma:k=1",
        "point:y=0.5",
    ],
)
def test_parse_distribution_rejects(bad):
    with pytest.raises(ConfigError):
        parse_distribution(bad)
