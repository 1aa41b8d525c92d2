import math
from fractions import Fraction

import numpy as np
import pytest

from ringforge.lattice import (
    KleinBasis,
    ParamTooSmall,
    QualityUnreachable,
    _int_negacyclic_mul,
    gaussian_tail_bound,
    gram_schmidt,
    klein_sample,
    ntru_trapdoor_gen,
    sample_z,
    sample_z_batch,
    smoothing_z,
    validate_params,
)
from ringforge.ring import RingParams, poly_from_coeffs, poly_mul


def test_sample_z_pmf_ratio():
    """p(0)/p(1) at s=1, c=0 is e^(1/2), checked over 10^6 draws."""
    rng = np.random.default_rng(101)
    zs = sample_z_batch(1.0, 0.0, 1_000_000, rng)
    vals, counts = np.unique(zs, return_counts=True)
    table = dict(zip(vals.tolist(), counts.tolist()))
    ratio = table[0] / table[1]
    assert abs(ratio - math.exp(0.5)) / math.exp(0.5) < 0.02


def test_sample_z_symmetry():
    rng = np.random.default_rng(102)
    n = 400_000
    zs = sample_z_batch(2.0, 0.0, n, rng)
    for z in (1, 2, 3):
        pos = int(np.sum(zs == z))
        neg = int(np.sum(zs == -z))
        sigma = math.sqrt(pos + neg)
        assert abs(pos - neg) <= 3.0 * sigma + 1


def test_sample_z_tail():
    rng = np.random.default_rng(103)
    zs = sample_z_batch(1.5, 0.0, 1_000_000, rng)
    assert int(np.sum(np.abs(zs) > 6 * 1.5)) == 0  # < 1e-6 of a million


def test_sample_z_center():
    rng = np.random.default_rng(104)
    zs = sample_z_batch(2.0, 7.25, 200_000, rng)
    assert abs(float(np.mean(zs)) - 7.25) < 5 * 2.0 / math.sqrt(200_000)
    z = sample_z(2.0, 7.25, rng)  # scalar path
    assert isinstance(z, int) and abs(z - 7.25) <= 2.0 * 10 + 1


def test_smoothing_formula():
    val = smoothing_z(128, 2.0**-36)
    expect = math.sqrt(math.log(2 * 128 * (1 + 2.0**36)) / math.pi) / math.sqrt(2 * math.pi)
    assert val == pytest.approx(expect)
    with pytest.raises(ValueError):
        smoothing_z(0, 0.5)


def test_gram_schmidt_orthogonality(rng):
    rows = rng.integers(-5, 6, size=(12, 12))
    while abs(np.linalg.det(rows.astype(float))) < 0.5:
        rows = rng.integers(-5, 6, size=(12, 12))
    gs, norms = gram_schmidt(rows)
    for i in range(12):
        for j in range(i):
            assert abs(gs[i] @ gs[j]) / (norms[i] * norms[j]) < 1e-8


def exact_gram_schmidt(rows):
    """Exact-rational Gram-Schmidt used as a cross-check for small bases."""
    n = len(rows)
    gs = [[Fraction(x) for x in row] for row in rows]
    for i in range(n):
        for j in range(i):
            dot = sum(a * b for a, b in zip(gs[i], gs[j]))
            nsq = sum(a * a for a in gs[j])
            gs[i] = [a - dot / nsq * b for a, b in zip(gs[i], gs[j])]
    return gs


def test_gram_schmidt_matches_exact_rational(rng):
    rows = rng.integers(-4, 5, size=(8, 8))
    while abs(np.linalg.det(rows.astype(float))) < 0.5:
        rows = rng.integers(-4, 5, size=(8, 8))
    gs_float, norms = gram_schmidt(rows)
    gs_exact = exact_gram_schmidt(rows.tolist())
    for i in range(8):
        exact_norm = math.sqrt(float(sum(a * a for a in gs_exact[i])))
        assert norms[i] == pytest.approx(exact_norm, rel=1e-9)


# ---------------------------------------------------------------------------
# Klein sampler
# ---------------------------------------------------------------------------


def test_klein_rejects_small_width():
    basis = KleinBasis.from_rows(np.eye(2, dtype=np.int64))
    rng = np.random.default_rng(0)
    with pytest.raises(ParamTooSmall):
        klein_sample(basis, 0.05, [0.0, 0.0], rng)


def test_klein_one_dimensional_scaled_lattice():
    """On cZ the sampler reduces to a scaled integer Gaussian."""
    rng = np.random.default_rng(105)
    c = 3
    basis = KleinBasis.from_rows([[c]])
    s = 6.0
    n = 100_000
    draws = np.array([klein_sample(basis, s, [0.4], rng)[0] for _ in range(n)])
    assert np.all(draws % c == 0)
    support = np.arange(-60, 61, c)
    pmf = np.exp(-((support - 0.4) ** 2) / (2 * s * s))
    pmf /= pmf.sum()
    emp = np.array([np.mean(draws == v) for v in support])
    tv = 0.5 * np.abs(emp - pmf).sum() + 0.5 * (1.0 - emp.sum())
    assert tv < 0.02


def test_klein_membership_and_mean(rng):
    rows = np.array([[3, 1, 0], [1, 4, 1], [0, 1, 5]], dtype=np.int64)
    basis = KleinBasis.from_rows(rows)
    center = np.array([1.3, -2.2, 0.7])
    pts = np.array([klein_sample(basis, 9.0, center, rng) for _ in range(2000)])
    # membership: the integer coordinate vector solves x B = v exactly
    for v in pts[:50]:
        x = np.rint(np.linalg.solve(rows.T.astype(float), v.astype(float))).astype(np.int64)
        assert np.array_equal(x @ rows, v)
    mean = pts.mean(axis=0)
    tol = 5 * 9.0 / math.sqrt(2000)
    assert np.all(np.abs(mean - center) < tol)


# ---------------------------------------------------------------------------
# NTRU trapdoors
# ---------------------------------------------------------------------------


def check_trapdoor(td, params):
    m, q = params.degree, params.modulus
    lhs = [
        a - b
        for a, b in zip(
            _int_negacyclic_mul(list(td.f), list(td.big_g)),
            _int_negacyclic_mul(list(td.g), list(td.big_f)),
        )
    ]
    assert lhs[0] == q and all(c == 0 for c in lhs[1:])
    hf = poly_mul(td.h, poly_from_coeffs(td.f, params), params)
    assert hf.coeffs == tuple(c % q for c in td.g)
    for row in td.basis.rows:
        wu = poly_from_coeffs(row[:m], params)
        hu = poly_mul(td.h, wu, params)
        assert all((c + int(v)) % q == 0 for c, v in zip(hu.coeffs, row[m:]))


def test_trapdoor_invariants_small(rng):
    for m, q in ((8, 97), (16, 257)):
        params = RingParams(m, q)
        td = ntru_trapdoor_gen(params, rng=rng)
        check_trapdoor(td, params)
        assert td.max_gs_norm <= 1.17 * math.sqrt(q)


def test_trapdoor_distinct_keys():
    params = RingParams(8, 97)
    h1 = ntru_trapdoor_gen(params, rng=np.random.default_rng(1)).h
    h2 = ntru_trapdoor_gen(params, rng=np.random.default_rng(2)).h
    assert h1 != h2


def test_trapdoor_quality_unreachable():
    params = RingParams(8, 97)
    with pytest.raises(QualityUnreachable):
        ntru_trapdoor_gen(params, alpha_quality=0.05, rng=np.random.default_rng(3), max_retries=20)


def test_klein_on_ntru_coset(rng):
    """Samples land on the coset exactly: h*(c0+w)_u + (c0+w)_v = target mod q."""
    params = RingParams(8, 769)
    td = ntru_trapdoor_gen(params, rng=rng)
    m, q = 8, 769
    s = smoothing_z(2 * m) * td.max_gs_norm * 1.05
    for trial in range(20):
        target = rng.integers(0, q, m)
        c0 = np.concatenate([np.zeros(m, dtype=np.int64), np.where(target > q // 2, target - q, target)])
        w = klein_sample(td.basis, s, -c0.astype(float), rng)
        point = c0 + w
        hu = poly_mul(td.h, poly_from_coeffs(point[:m], params), params)
        got = (np.array(hu.coeffs) + point[m:]) % q
        assert np.array_equal(got, target % q)


# ---------------------------------------------------------------------------
# parameter validation report
# ---------------------------------------------------------------------------


def test_validate_params_tail_example():
    report = validate_params(RingParams(64, 12289), s=200.0, epsilon=2.0**-36, tau=1.2)
    assert report.dimension == 128
    expect = 1.2**128 * math.exp(64 * (1 - 1.44))
    assert report.tail_bound == pytest.approx(expect, rel=1e-9)
    assert report.tail_bound == pytest.approx(8.1e-3, rel=0.01)
    assert not report.tail_vacuous


def test_validate_params_min_entropy_flags():
    params = RingParams(64, 12289)
    good = validate_params(params, s=200.0, epsilon=2.0**-36, tau=1.2)
    assert good.min_entropy_applicable and good.min_entropy_floor == 127
    bad_eps = validate_params(params, s=200.0, epsilon=0.4, tau=1.2)
    assert not bad_eps.min_entropy_applicable and bad_eps.min_entropy_floor is None
    tiny_s = validate_params(params, s=0.1, epsilon=2.0**-36, tau=1.2)
    assert not tiny_s.min_entropy_applicable


def test_validate_params_vacuous_tau():
    report = validate_params(RingParams(8, 97), s=50.0, epsilon=2.0**-36, tau=1.0)
    assert report.tail_bound == pytest.approx(1.0)
    assert report.tail_vacuous


def test_gaussian_tail_bound_log_safe():
    assert gaussian_tail_bound(10_000, 1.2) == pytest.approx(
        math.exp(10_000 * math.log(1.2) + 5_000 * (1 - 1.44))
    )
    assert gaussian_tail_bound(128, 3.0) < 1e-100
