import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringforge.distmath import (
    DiscreteDist,
    EmptyInput,
    INF_ORDER,
    SupportViolation,
    empirical_dist,
    iid_power,
    kl_divergence,
    map_labels,
    renyi_divergence,
    stat_distance,
)

LABELS = "abcde"


@st.composite
def dists(draw, n=5):
    weights = draw(
        st.lists(st.floats(0.01, 1.0, allow_nan=False), min_size=n, max_size=n)
    )
    total = sum(weights)
    return DiscreteDist({l: w / total for l, w in zip(LABELS, weights)})


def test_stat_distance_examples():
    p = DiscreteDist({"a": 1.0})
    q = DiscreteDist({"a": 0.5, "b": 0.5})
    assert stat_distance(p, q) == pytest.approx(0.5)
    assert stat_distance(p, p) == 0.0
    r = DiscreteDist({"a": 0.9, "b": 0.1})
    s = DiscreteDist({"a": 0.5, "b": 0.5})
    assert stat_distance(r, s) == pytest.approx(0.4)


def test_renyi_examples():
    assert renyi_divergence(
        INF_ORDER, DiscreteDist({"a": 0.5, "b": 0.5}), DiscreteDist({"a": 0.25, "b": 0.75})
    ) == pytest.approx(2.0)
    p = DiscreteDist({"a": 0.75, "b": 0.25})
    u = DiscreteDist({"a": 0.5, "b": 0.5})
    assert renyi_divergence(2, p, u) == pytest.approx(1.25)
    assert renyi_divergence(2, p, p) == pytest.approx(1.0)


def test_renyi_support_violation():
    p = DiscreteDist({"a": 0.5, "b": 0.5})
    q = DiscreteDist({"a": 1.0})
    with pytest.raises(SupportViolation):
        renyi_divergence(2, p, q)
    with pytest.raises(SupportViolation):
        kl_divergence(p, q)


def test_kl_examples_and_pinsker():
    p = DiscreteDist({"a": 1.0})
    q = DiscreteDist({"a": 0.5, "b": 0.5})
    assert kl_divergence(p, q) == pytest.approx(math.log(2))
    assert kl_divergence(q, q) == 0.0
    # Pinsker on the same pair: Delta <= sqrt(KL / 2)
    assert stat_distance(p, q) <= math.sqrt(kl_divergence(p, q) / 2.0)


def test_empirical_dist():
    d = empirical_dist(["a", "a", "b", "b"])
    assert d.prob("a") == Fraction(1, 2) and d.prob("b") == Fraction(1, 2)
    assert empirical_dist(["a"]).prob("a") == 1
    with pytest.raises(EmptyInput):
        empirical_dist([])


def test_empirical_concentration(rng):
    flips = rng.integers(0, 2, size=100_000)
    d = empirical_dist(flips.tolist())
    uniform = DiscreteDist({0: 0.5, 1: 0.5})
    assert stat_distance(d, uniform) < 0.01


def test_invalid_distributions():
    with pytest.raises(ValueError):
        DiscreteDist({"a": 0.7, "b": 0.2})  # does not sum to one
    with pytest.raises(ValueError):
        DiscreteDist({"a": 1.5, "b": -0.5})


@given(dists(), dists())
@settings(max_examples=60)
def test_stat_distance_symmetric(p, q):
    assert stat_distance(p, q) == pytest.approx(stat_distance(q, p))
    assert 0.0 <= stat_distance(p, q) <= 1.0 + 1e-12


@given(dists(), dists(), dists())
@settings(max_examples=60)
def test_stat_distance_triangle(p, q, r):
    assert stat_distance(p, r) <= stat_distance(p, q) + stat_distance(q, r) + 1e-12


@given(dists(), dists(), st.lists(st.integers(0, 2), min_size=5, max_size=5))
@settings(max_examples=60)
def test_data_processing(p, q, buckets):
    """Coarsening labels never increases the divergence."""
    fn = dict(zip(LABELS, buckets)).__getitem__
    for alpha in (1.5, 2, 10, INF_ORDER):
        before = renyi_divergence(alpha, p, q)
        after = renyi_divergence(alpha, map_labels(p, fn), map_labels(q, fn))
        assert float(after) <= float(before) * (1 + 1e-9)


@given(dists(), dists(), st.sets(st.sampled_from(LABELS), min_size=1))
@settings(max_examples=60)
def test_probability_preservation(p, q, event):
    pe = float(sum(p.prob(x) for x in event))
    qe = float(sum(q.prob(x) for x in event))
    for alpha in (1.5, 2.0, 10.0):
        lhs = pe ** (alpha / (alpha - 1.0))
        assert lhs <= float(renyi_divergence(alpha, p, q)) * qe * (1 + 1e-9)
    assert pe <= float(renyi_divergence(INF_ORDER, p, q)) * qe * (1 + 1e-9)


def test_multiplicativity_exact():
    """R_a(P^k || Q^k) = R_a(P||Q)^k on explicit product distributions."""
    p = DiscreteDist({"a": Fraction(3, 4), "b": Fraction(1, 4)})
    q = DiscreteDist({"a": Fraction(1, 2), "b": Fraction(1, 2)})
    base2 = renyi_divergence(2, p, q)
    for k in range(1, 5):
        prod = renyi_divergence(2, iid_power(p, k), iid_power(q, k))
        assert prod == base2**k  # exact Fractions
    base_inf = renyi_divergence(INF_ORDER, p, q)
    for k in range(1, 5):
        prod = renyi_divergence(INF_ORDER, iid_power(p, k), iid_power(q, k))
        assert abs(float(prod) - float(base_inf) ** k) <= 1e-9 * float(base_inf) ** k


@given(dists(), dists())
@settings(max_examples=60)
def test_renyi_monotone_in_order(p, q):
    orders = [1.5, 2, 10, INF_ORDER]
    values = [float(renyi_divergence(a, p, q)) for a in orders]
    for lo, hi in zip(values, values[1:]):
        assert lo <= hi * (1 + 1e-9)
    assert all(v >= 1.0 - 1e-12 for v in values)
