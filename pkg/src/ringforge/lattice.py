"""Discrete Gaussian sampling and NTRU trapdoor machinery.

Gaussian convention throughout: density proportional to
``exp(-(x - c)^2 / (2 s^2))``, i.e. ``s`` is a standard-deviation-style width.

``sample_z`` rejection-samples against a two-sided geometric proposal with a
hard cutoff at ``ceil(10 s)`` from the (rounded) center; on that restricted
support the accepted distribution is exactly proportional to the Gaussian
mass, which is the tested contract.

``ntru_trapdoor_gen`` samples short (f, g), requires f invertible mod q,
publishes h = g f^-1, and completes the pair to a short basis of the lattice
{(u, v) : h u + v = 0 mod q} by solving f G - g F = q over Z[X]/(X^M+1) with
the resultant/Bezout method (exact big-integer arithmetic) followed by
Babai-style length reduction of (F, G) against (f, g).  Basis rows are the
negacyclic rotations of (f, -g) and (F, -G).

Klein's randomized-nearest-plane sampler draws lattice points close to the
discrete Gaussian D_{Lambda(B), s, c}; the output is always an exact integer
combination of the basis rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .ring import Poly, RingParams, poly_from_coeffs, poly_inverse, poly_mul, NotInvertible

__all__ = [
    "DEFAULT_SMOOTHING_EPS",
    "KleinBasis",
    "NtruTrapdoor",
    "ParamReport",
    "ParamTooSmall",
    "QualityUnreachable",
    "TAIL_CUT",
    "gaussian_tail_bound",
    "gram_schmidt",
    "klein_sample",
    "ntru_trapdoor_gen",
    "recommended_key_width",
    "sample_z",
    "sample_z_batch",
    "smoothing_z",
    "validate_params",
]

# Smoothing parameter of Z^n in our width convention; the closed form is
#   eta_eps(Z^n) ~= sqrt(ln(2 n (1 + 1/eps)) / pi) / sqrt(2 pi),
# the standard bound restated for densities exp(-x^2 / 2 s^2).
DEFAULT_SMOOTHING_EPS = 2.0**-36

# Proposal support cutoff for the one-dimensional sampler, in units of s.
TAIL_CUT = 10


class ParamTooSmall(ValueError):
    """Gaussian width below the validated smoothing floor."""


class QualityUnreachable(RuntimeError):
    """Trapdoor generation exhausted its retry budget."""


def smoothing_z(n: int, eps: float = DEFAULT_SMOOTHING_EPS) -> float:
    """Closed-form smoothing estimate for Z^n (width convention above)."""
    if n < 1 or eps <= 0:
        raise ValueError("need n >= 1 and eps > 0")
    return math.sqrt(math.log(2 * n * (1 + 1 / eps)) / math.pi) / math.sqrt(2 * math.pi)


def gaussian_tail_bound(n: int, tau: float) -> float:
    """Mass of ||z|| > tau * s * sqrt(n) for z ~ D_{Z^n,s}: tau^n e^{n(1-tau^2)/2}.

    Computed in log space to avoid overflow for large n.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    log_b = n * math.log(tau) + (n / 2.0) * (1.0 - tau * tau)
    if log_b > 700:
        return math.inf
    return math.exp(log_b)


def sample_z_batch(s: float, c: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized D_{Z,s,c} restricted to |z - floor(c)| <= ceil(10 s).

    Proposal: two-sided geometric g(j) ~ lambda^|j| with lambda = e^{-1/s};
    acceptance exp(-(j-c')^2/(2s^2) + |j|/s - 1/2 - c'/s) <= 1 yields a law
    exactly proportional to the Gaussian on the restricted support.
    """
    if s <= 0:
        raise ValueError("s must be positive")
    base = math.floor(c)
    cp = c - base  # in [0, 1)
    lam = math.exp(-1.0 / s)
    cutoff = math.ceil(TAIL_CUT * s)
    inv2s2 = 1.0 / (2.0 * s * s)
    shift = 0.5 + cp / s
    out = np.empty(size, dtype=np.int64)
    filled = 0
    while filled < size:
        m = max(16, 2 * (size - filled))
        k = rng.geometric(1.0 - lam, size=m) - 1  # P(k) ~ lam^k, k >= 0
        sign = rng.integers(0, 2, size=m)
        j = np.where(sign == 1, -k, k)
        ok = ~((k == 0) & (sign == 1)) & (np.abs(j) <= cutoff)
        log_acc = -((j - cp) ** 2) * inv2s2 + np.abs(j) / s - shift
        u = rng.random(m)
        acc = ok & (np.log(u) < log_acc)
        accepted = j[acc]
        take = min(size - filled, accepted.shape[0])
        out[filled : filled + take] = accepted[:take]
        filled += take
    return out + base


def sample_z(s: float, c: float, rng: np.random.Generator) -> int:
    """One draw from the restricted discrete Gaussian D_{Z,s,c}."""
    return int(sample_z_batch(s, c, 1, rng)[0])


def gram_schmidt(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Classical Gram-Schmidt orthogonalization; returns (gs_rows, norms)."""
    b = np.asarray(rows, dtype=np.float64)
    n = b.shape[0]
    gs = np.zeros_like(b)
    norms_sq = np.zeros(n)
    for i in range(n):
        v = b[i].copy()
        for j in range(i):
            v -= (b[i] @ gs[j] / norms_sq[j]) * gs[j]
        gs[i] = v
        norms_sq[i] = v @ v
    return gs, np.sqrt(norms_sq)


@dataclass(frozen=True)
class KleinBasis:
    """Integer basis rows plus precomputed Gram-Schmidt data."""

    rows: np.ndarray
    gs_rows: np.ndarray
    gs_norms: np.ndarray

    @classmethod
    def from_rows(cls, rows) -> "KleinBasis":
        arr = np.asarray(rows, dtype=np.int64)
        gs, norms = gram_schmidt(arr)
        return cls(rows=arr, gs_rows=gs, gs_norms=norms)

    @property
    def dimension(self) -> int:
        return self.rows.shape[0]

    def smoothing_floor(self, eps: float = DEFAULT_SMOOTHING_EPS) -> float:
        return smoothing_z(self.dimension, eps) * float(np.max(self.gs_norms))


def klein_sample(
    basis,
    s: float,
    center,
    rng: np.random.Generator,
    smoothing_eps: float = DEFAULT_SMOOTHING_EPS,
) -> np.ndarray:
    """Randomized nearest-plane draw close to D_{Lambda(B), s, center}.

    ``basis`` is a KleinBasis or an NtruTrapdoor.  The width must clear the
    smoothing floor ``eta * max ||b*_i||``; below it ParamTooSmall is raised.
    The return value is an exact integer combination of basis rows.
    """
    if isinstance(basis, NtruTrapdoor):
        basis = basis.basis
    floor = basis.smoothing_floor(smoothing_eps)
    if s < floor:
        raise ParamTooSmall(f"width {s} below validated floor {floor:.4f}")
    c = np.asarray(center, dtype=np.float64).copy()
    if c.shape != (basis.dimension,):
        raise ValueError(f"center must have length {basis.dimension}")
    v = np.zeros(basis.dimension, dtype=np.int64)
    rows, gs, norms = basis.rows, basis.gs_rows, basis.gs_norms
    for i in range(basis.dimension - 1, -1, -1):
        d = float(c @ gs[i]) / float(norms[i] ** 2)
        z = sample_z(s / float(norms[i]), d, rng)
        c -= z * rows[i]
        v += z * rows[i]
    return v


# ---------------------------------------------------------------------------
# exact integer polynomial helpers for the NTRU completion (modulus X^M + 1)
# ---------------------------------------------------------------------------


def _int_negacyclic_mul(a: list[int], b: list[int]) -> list[int]:
    m = len(a)
    out = [0] * m
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            k = i + j
            if k < m:
                out[k] += ai * bj
            else:
                out[k - m] -= ai * bj
    return out


def _poly_inverse_mod(a: list[int], m: int, p: int) -> list[int] | None:
    """Inverse of a modulo (X^M + 1, p) by extended Euclid, or None."""

    def trim(poly):
        while poly and poly[-1] == 0:
            poly.pop()
        return poly

    def divmod_p(num, den):
        num = num[:]
        inv_lead = pow(den[-1], p - 2, p)
        quot = [0] * max(len(num) - len(den) + 1, 0)
        for i in range(len(num) - len(den), -1, -1):
            coef = (num[i + len(den) - 1] * inv_lead) % p
            quot[i] = coef
            if coef:
                for j, d in enumerate(den):
                    num[i + j] = (num[i + j] - coef * d) % p
        return quot, trim(num)

    r0 = [1] + [0] * (m - 1) + [1]
    r1 = trim([c % p for c in a])
    if not r1:
        return None
    s0, s1 = [0], [1]
    while r1:
        quot, rem = divmod_p(r0, r1)
        r0, r1 = r1, rem
        prod = [0] * max(len(quot) + len(s1) - 1, 1)
        for i, qc in enumerate(quot):
            if qc:
                for j, sc in enumerate(s1):
                    prod[i + j] = (prod[i + j] + qc * sc) % p
        new_s = [
            ((s0[i] if i < len(s0) else 0) - (prod[i] if i < len(prod) else 0)) % p
            for i in range(max(len(s0), len(prod), 1))
        ]
        s0, s1 = s1, trim(new_s) or [0]
    if len(r0) != 1:
        return None
    scale = pow(r0[0], p - 2, p)
    inv = [(c * scale) % p for c in s0]
    return inv[:m] + [0] * max(0, m - len(inv))


@lru_cache(maxsize=None)
def _crt_prime_pool(m: int) -> tuple[int, ...]:
    """Primes p = 1 mod 2M near 2^30 (roots of X^M + 1 exist mod p)."""
    from .ring import _is_prime

    out = []
    step = 2 * m
    p = ((1 << 30) // step) * step + 1
    while len(out) < 80:
        if _is_prime(p):
            out.append(p)
        p += step
    return tuple(out)


@lru_cache(maxsize=None)
def _neg_roots_mod(m: int, p: int) -> tuple[int, ...]:
    """The M roots of X^M + 1 mod p: odd powers of an order-2M element."""
    exp = (p - 1) // (2 * m)
    a = 2
    while True:
        w = pow(a, exp, p)
        if pow(w, m, p) == p - 1:
            break
        a += 1
    return tuple(pow(w, 2 * j + 1, p) for j in range(m))


def _crt_signed(residues: list[int], primes: list[int]) -> int:
    total, modulus = 0, 1
    for r, p in zip(residues, primes):
        # incremental CRT
        diff = (r - total) % p
        diff = (diff * pow(modulus, p - 2, p)) % p
        total += diff * modulus
        modulus *= p
    if total > modulus // 2:
        total -= modulus
    return total


def _bezout_scale(f: list[int], m: int) -> tuple[list[int], int] | None:
    """Integer rho and positive R with rho * f = R mod (X^M + 1), or None.

    R is the resultant Res(f, X^M + 1) and rho the matching Bezout cofactor,
    assembled by CRT over word-size primes and then verified exactly; extra
    primes are added if the size estimate was short.
    """
    norm_sq = sum(c * c for c in f)
    if norm_sq == 0:
        return None
    # Hadamard-style size estimate, then a verify-and-extend loop
    bits_needed = int(m * (0.5 * math.log2(norm_sq) + 0.5) + m + 64)
    pool = _crt_prime_pool(m)
    count = max(2, bits_needed // 30 + 1)
    while count <= len(pool):
        primes, res_residues, rho_residues = [], [], []
        for p in pool:
            if len(primes) == count:
                break
            roots = _neg_roots_mod(m, p)
            res_p = 1
            for r in roots:
                val = 0
                for c in reversed(f):
                    val = (val * r + c) % p
                res_p = (res_p * val) % p
            if res_p == 0:
                continue  # bad prime: divides the resultant
            inv_p = _poly_inverse_mod(f, m, p)
            if inv_p is None:
                continue
            primes.append(p)
            res_residues.append(res_p)
            rho_residues.append([(res_p * c) % p for c in inv_p])
        if len(primes) < count:
            return None  # resultant vanishes mod every prime tried
        res = _crt_signed(res_residues, primes)
        rho = [
            _crt_signed([rr[i] for rr in rho_residues], primes) for i in range(m)
        ]
        if res < 0:
            res, rho = -res, [-c for c in rho]
        if res == 0:
            return None
        check = _int_negacyclic_mul(rho, f)
        if check[0] == res and all(c == 0 for c in check[1:]):
            return rho, res
        count += 4  # size estimate was short; widen the CRT basis
    return None


@lru_cache(maxsize=None)
def _embed_points(m: int) -> np.ndarray:
    # odd 2M-th roots of unity: X^M = -1 holds at each
    j = np.arange(m)
    return np.exp(1j * math.pi * (2 * j + 1) / m)


def _embed(coeffs: list[float], m: int) -> np.ndarray:
    pts = _embed_points(m)
    vals = np.zeros(m, dtype=np.complex128)
    power = np.ones(m, dtype=np.complex128)
    for c in coeffs:
        vals += c * power
        power *= pts
    return vals


def _unembed(vals: np.ndarray, m: int) -> np.ndarray:
    pts = _embed_points(m)
    coeffs = np.zeros(m, dtype=np.complex128)
    power = np.ones(m, dtype=np.complex128)
    for k in range(m):
        coeffs[k] = np.mean(vals * np.conj(power))
        power *= pts
    return coeffs.real


def _bitsize(x: int) -> int:
    return abs(x).bit_length()


def _max_bitsize(polys: list[list[int]]) -> int:
    return max((_bitsize(c) for p in polys for c in p), default=0)


def _babai_reduce(
    f: list[int], g: list[int], big_f: list[int], big_g: list[int]
) -> tuple[list[int], list[int]]:
    """Length-reduce (F, G) against (f, g) in Z[X]/(X^M + 1).

    Repeatedly subtracts k * (f, g) with k = round((F f* + G g*)/(f f* + g g*)),
    evaluated in the complex embedding at 53-bit working scale; large
    coefficients are handled by shifting the top 53 bits per round.
    """
    m = len(f)
    size = max(53, _max_bitsize([f, g]))
    f_adj = [float(c >> (size - 53)) for c in f]
    g_adj = [float(c >> (size - 53)) for c in g]
    fe = _embed(f_adj, m)
    ge = _embed(g_adj, m)
    den = fe * np.conj(fe) + ge * np.conj(ge)
    for _ in range(1000):
        big_size = max(53, _max_bitsize([big_f, big_g]))
        if big_size < size:
            break
        fa = [float(c >> (big_size - 53)) for c in big_f]
        ga = [float(c >> (big_size - 53)) for c in big_g]
        num = _embed(fa, m) * np.conj(fe) + _embed(ga, m) * np.conj(ge)
        k_int = [int(x) for x in np.rint(_unembed(num / den, m))]
        if all(x == 0 for x in k_int):
            break
        fk = _int_negacyclic_mul(f, k_int)
        gk = _int_negacyclic_mul(g, k_int)
        shift = big_size - size
        for i in range(m):
            big_f[i] -= fk[i] << shift
            big_g[i] -= gk[i] << shift
    return big_f, big_g


def ntru_complete(f: list[int], g: list[int], q: int) -> tuple[list[int], list[int]]:
    """Solve f G - g F = q over Z[X]/(X^M + 1) and length-reduce (F, G).

    Raises NotInvertible when the resultant route fails (f or g shares a
    factor with X^M + 1 over Q, or the Bezout constants do not divide q);
    callers treat this as a resample trigger.
    """
    m = len(f)
    rf = _bezout_scale(f, m)
    rg = _bezout_scale(g, m)
    if rf is None or rg is None:
        raise NotInvertible("no Bezout inverse against X^M + 1 over Q")
    rho_f, res_f = rf
    rho_g, res_g = rg
    d, u, v = _xgcd_int(res_f, res_g)
    if q % d != 0:
        raise NotInvertible(f"gcd of Bezout constants {d} does not divide q")
    scale = q // d
    big_g = [scale * u * c for c in rho_f]
    big_f = [-scale * v * c for c in rho_g]
    big_f, big_g = _babai_reduce(f, g, big_f, big_g)
    # exact check of the completion identity
    lhs = _int_negacyclic_mul(f, big_g)
    rhs = _int_negacyclic_mul(g, big_f)
    diff = [a - b for a, b in zip(lhs, rhs)]
    if diff[0] != q or any(c != 0 for c in diff[1:]):
        raise NotInvertible("completion identity failed after reduction")
    return big_f, big_g


def _xgcd_int(b: int, n: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while n != 0:
        quot, b, n = b // n, n, b % n
        x0, x1 = x1, x0 - quot * x1
        y0, y1 = y1, y0 - quot * y1
    return b, x0, y0


@dataclass(frozen=True)
class NtruTrapdoor:
    """Short basis data for the lattice {(u, v) : h u + v = 0 mod q}.

    f, g, F, G are signed integer coefficient vectors (the completion
    identity f G - g F = q only makes sense over Z); h is the mod-q public
    key.  ``basis`` holds the 2M rotation rows with Gram-Schmidt data.
    """

    params: RingParams
    f: tuple[int, ...]
    g: tuple[int, ...]
    big_f: tuple[int, ...]
    big_g: tuple[int, ...]
    h: Poly
    basis: KleinBasis = field(repr=False)

    @property
    def max_gs_norm(self) -> float:
        return float(np.max(self.basis.gs_norms))


def _build_basis(params: RingParams, f, g, big_f, big_g) -> KleinBasis:
    from .ring import negacyclic_matrix

    neg = lambda p: negacyclic_matrix(list(p), params)
    top = np.hstack([neg(f), -neg(g)])
    bot = np.hstack([neg(big_f), -neg(big_g)])
    return KleinBasis.from_rows(np.vstack([top, bot]))


def recommended_key_width(params: RingParams) -> float:
    """Per-coefficient width for (f, g) targeting ||(f,g)|| ~ sqrt(q)."""
    return math.sqrt(params.modulus / (2.0 * params.degree))


def ntru_trapdoor_gen(
    params: RingParams,
    s_key: float | None = None,
    alpha_quality: float = 1.17,
    rng: np.random.Generator | None = None,
    max_retries: int = 1000,
) -> NtruTrapdoor:
    """Sample a trapdoor with ||B_{f,g}||_GS <= alpha_quality * sqrt(q).

    Resamples (f, g) until f is invertible mod q, h = g f^-1 is non-zero,
    the completion succeeds, and the Gram-Schmidt quality bound is met.
    """
    if params.degree > 64:
        raise ValueError("trapdoor generation is desk-scale: M <= 64")
    if rng is None:
        rng = np.random.default_rng()
    if s_key is None:
        s_key = recommended_key_width(params)
    m, q = params.degree, params.modulus
    bound = alpha_quality * math.sqrt(q)
    for _ in range(max_retries):
        f = [int(x) for x in sample_z_batch(s_key, 0.0, m, rng)]
        g = [int(x) for x in sample_z_batch(s_key, 0.0, m, rng)]
        sq_fg = sum(c * c for c in f) + sum(c * c for c in g)
        if sq_fg == 0 or sq_fg > bound * bound:
            continue
        # cheap quality pre-filter: the projected second-block row norm is
        # q^2/M * sum_j 1/(|f(x_j)|^2 + |g(x_j)|^2) in the embedding
        denom = np.abs(_embed([float(c) for c in f], m)) ** 2 + np.abs(
            _embed([float(c) for c in g], m)
        ) ** 2
        if np.min(denom) < 1e-9:
            continue
        sq_proj = q * q / m * float(np.sum(1.0 / denom))
        if max(sq_fg, sq_proj) > bound * bound:
            continue
        try:
            f_poly = poly_from_coeffs(f, params)
            f_inv = poly_inverse(f_poly, params)
        except NotInvertible:
            continue
        g_poly = poly_from_coeffs(g, params)
        h = poly_mul(g_poly, f_inv, params)
        if all(c == 0 for c in h.coeffs):
            continue
        try:
            big_f, big_g = ntru_complete(f, g, q)
        except NotInvertible:
            continue
        basis = _build_basis(params, f, g, big_f, big_g)
        if float(np.max(basis.gs_norms)) > bound:
            continue
        return NtruTrapdoor(
            params=params,
            f=tuple(f),
            g=tuple(g),
            big_f=tuple(big_f),
            big_g=tuple(big_g),
            h=h,
            basis=basis,
        )
    raise QualityUnreachable(f"no trapdoor met quality {alpha_quality} in {max_retries} tries")


@dataclass(frozen=True)
class ParamReport:
    """Validation summary for a Gaussian width over Z^{2M}."""

    dimension: int
    smoothing: float
    min_entropy_floor: int | None
    min_entropy_applicable: bool
    tail_bound: float
    tail_vacuous: bool

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "smoothing": self.smoothing,
            "min_entropy_floor": self.min_entropy_floor,
            "min_entropy_applicable": self.min_entropy_applicable,
            "tail_bound": self.tail_bound,
            "tail_vacuous": self.tail_vacuous,
        }


def validate_params(params: RingParams, s: float, epsilon: float, tau: float) -> ParamReport:
    """Report the min-entropy floor and Gaussian tail bound for width s.

    The conditional min-entropy floor 2M - 1 applies only when epsilon < 1/3
    and s >= 2 * eta_epsilon(Z^{2M}); outside that regime the clause is
    flagged inapplicable rather than raising.  A tail bound >= 1 (tau <= 1)
    is reported verbatim and flagged vacuous.
    """
    n = 2 * params.degree
    eta = smoothing_z(n, epsilon)
    applicable = 0 < epsilon < 1.0 / 3.0 and s >= 2 * eta
    tail = gaussian_tail_bound(n, tau) if tau > 0 else math.inf
    return ParamReport(
        dimension=n,
        smoothing=eta,
        min_entropy_floor=n - 1 if applicable else None,
        min_entropy_applicable=applicable,
        tail_bound=tail,
        tail_vacuous=tail >= 1.0,
    )
