"""Arithmetic in R_q = Z_q[X]/(X^M + 1) for power-of-two M and small prime q.

Multiplication is exact schoolbook negacyclic convolution (int64 is safe for
q < 2^16 and M <= 2^16).  Inversion runs the extended Euclidean algorithm in
Z_q[X] against X^M + 1.  Norms are Euclidean norms of the centered coefficient
lift into (-q/2, q/2].  ``hash_to_ring`` maps byte strings to ring elements
through SHAKE256 with per-coefficient rejection sampling, so every coefficient
is exactly uniform mod q (no modulo bias).
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "NotInvertible",
    "ParamMismatch",
    "Poly",
    "RingParams",
    "centered",
    "centered_coeffs",
    "coeff_norm",
    "hash_to_ring",
    "negacyclic_matrix",
    "poly_add",
    "poly_from_bytes",
    "poly_from_coeffs",
    "poly_inverse",
    "poly_mul",
    "poly_neg",
    "poly_one",
    "poly_sub",
    "poly_to_bytes",
    "poly_zero",
]


class ParamMismatch(ValueError):
    """A polynomial does not fit the given ring parameters."""


class NotInvertible(ValueError):
    """gcd(a(X), X^M + 1) != 1 in Z_q[X]."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class RingParams:
    """Ring degree M (power of two, >= 2) and odd prime modulus q < 2^16."""

    degree: int
    modulus: int

    def __post_init__(self):
        m, q = self.degree, self.modulus
        if m < 2 or m & (m - 1) != 0:
            raise ValueError(f"degree must be a power of two >= 2, got {m}")
        if q < 3 or q % 2 == 0 or not _is_prime(q):
            raise ValueError(f"modulus must be an odd prime >= 3, got {q}")
        if q >= 1 << 16:
            raise ValueError(f"modulus must fit in 16 bits, got {q}")


@dataclass(frozen=True)
class Poly:
    """Element of R_q as a length-M tuple of coefficients in [0, q)."""

    coeffs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.coeffs)


def _check(a: Poly, params: RingParams) -> None:
    if len(a.coeffs) != params.degree:
        raise ParamMismatch(
            f"expected {params.degree} coefficients, got {len(a.coeffs)}"
        )
    q = params.modulus
    for c in a.coeffs:
        if not 0 <= c < q:
            raise ParamMismatch(f"coefficient {c} not reduced mod {q}")


def poly_from_coeffs(coeffs: Iterable[int], params: RingParams) -> Poly:
    """Build a Poly, reducing arbitrary integers mod q."""
    q = params.modulus
    cs = tuple(int(c) % q for c in coeffs)
    if len(cs) != params.degree:
        raise ParamMismatch(f"expected {params.degree} coefficients, got {len(cs)}")
    return Poly(cs)


def poly_zero(params: RingParams) -> Poly:
    return Poly((0,) * params.degree)


def poly_one(params: RingParams) -> Poly:
    return Poly((1,) + (0,) * (params.degree - 1))


def poly_add(a: Poly, b: Poly, params: RingParams) -> Poly:
    _check(a, params)
    _check(b, params)
    q = params.modulus
    return Poly(tuple((x + y) % q for x, y in zip(a.coeffs, b.coeffs)))


def poly_sub(a: Poly, b: Poly, params: RingParams) -> Poly:
    _check(a, params)
    _check(b, params)
    q = params.modulus
    return Poly(tuple((x - y) % q for x, y in zip(a.coeffs, b.coeffs)))


def poly_neg(a: Poly, params: RingParams) -> Poly:
    _check(a, params)
    q = params.modulus
    return Poly(tuple((-x) % q for x in a.coeffs))


def poly_mul(a: Poly, b: Poly, params: RingParams) -> Poly:
    """Negacyclic product: convolution folded with X^M = -1."""
    _check(a, params)
    _check(b, params)
    m, q = params.degree, params.modulus
    conv = np.convolve(
        np.asarray(a.coeffs, dtype=np.int64), np.asarray(b.coeffs, dtype=np.int64)
    )
    full = np.zeros(2 * m, dtype=np.int64)
    full[: conv.shape[0]] = conv
    folded = (full[:m] - full[m:]) % q
    return Poly(tuple(int(c) for c in folded))


def poly_inverse(a: Poly, params: RingParams) -> Poly:
    """Multiplicative inverse in R_q, or NotInvertible."""
    _check(a, params)
    m, q = params.degree, params.modulus
    if all(c == 0 for c in a.coeffs):
        raise NotInvertible("zero polynomial")

    def trim(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    def polymod_divmod(num, den):
        num = num[:]
        inv_lead = pow(den[-1], q - 2, q)
        quot = [0] * (len(num) - len(den) + 1)
        for i in range(len(num) - len(den), -1, -1):
            coef = (num[i + len(den) - 1] * inv_lead) % q
            quot[i] = coef
            for j, d in enumerate(den):
                num[i + j] = (num[i + j] - coef * d) % q
        return quot, trim(num)

    # extended Euclid on (a, X^M + 1) over Z_q
    r0 = [1] + [0] * (m - 1) + [1]  # X^M + 1
    r1 = trim(list(a.coeffs))
    s0, s1 = [0], [1]
    while r1:
        quot, rem = polymod_divmod(r0, r1)
        r0, r1 = r1, rem
        # s_(k+1) = s_(k-1) - quot * s_k
        prod = [0] * (len(quot) + len(s1) - 1)
        for i, qc in enumerate(quot):
            if qc:
                for j, sc in enumerate(s1):
                    prod[i + j] = (prod[i + j] + qc * sc) % q
        new_s = [
            ((s0[i] if i < len(s0) else 0) - (prod[i] if i < len(prod) else 0)) % q
            for i in range(max(len(s0), len(prod), 1))
        ]
        s0, s1 = s1, trim(new_s) or [0]
    if len(r0) != 1:
        raise NotInvertible("gcd with X^M + 1 has positive degree")
    scale = pow(r0[0], q - 2, q)
    inv = [(c * scale) % q for c in s0]
    inv = inv[:m] + [0] * max(0, m - len(inv))
    # reduce any overflow degree terms negacyclically (cannot occur: deg(s) < M)
    return Poly(tuple(inv[:m]))


def centered(x: int, q: int) -> int:
    """Representative of x mod q in (-q/2, q/2]."""
    x %= q
    return x - q if x > q // 2 else x


def centered_coeffs(a: Poly, params: RingParams) -> tuple[int, ...]:
    _check(a, params)
    q = params.modulus
    return tuple(centered(c, q) for c in a.coeffs)


def coeff_norm(polys: Sequence[Poly], params: RingParams) -> float:
    """Euclidean norm of the concatenated centered coefficient embedding."""
    total = 0
    for p in polys:
        for c in centered_coeffs(p, params):
            total += c * c
    return math.sqrt(total)


def negacyclic_matrix(a: Poly | Sequence[int], params: RingParams) -> np.ndarray:
    """M x M integer matrix whose row i holds the coefficients of X^i * a."""
    coeffs = list(a.coeffs) if isinstance(a, Poly) else [int(c) for c in a]
    m = params.degree
    if len(coeffs) != m:
        raise ParamMismatch(f"expected {m} coefficients, got {len(coeffs)}")
    mat = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            k = i + j
            if k < m:
                mat[i, k] += coeffs[j]
            else:
                mat[i, k - m] -= coeffs[j]
    return mat


class XofStream:
    """Deterministic byte stream from SHAKE256 over a framed seed.

    ``digest(n)`` of SHAKE is prefix-stable, so re-digesting a longer output
    continues the same stream.
    """

    def __init__(self, seed: bytes):
        self._seed = seed
        self._buf = b""
        self._pos = 0

    def read(self, n: int) -> bytes:
        while self._pos + n > len(self._buf):
            size = max(64, 2 * len(self._buf), self._pos + n)
            self._buf = hashlib.shake_256(self._seed).digest(size)
        out = self._buf[self._pos : self._pos + n]
        self._pos += n
        return out


def xof(domain_tag: bytes, data: bytes) -> XofStream:
    """Stream keyed by a length-prefixed domain tag followed by the data."""
    return XofStream(struct.pack("<H", len(domain_tag)) + domain_tag + data)


def hash_to_ring(domain_tag: bytes, data: bytes, params: RingParams) -> Poly:
    """Deterministically hash bytes to a uniform element of R_q.

    Each coefficient is drawn by rejection sampling on ceil(log2 q)-bit
    chunks of SHAKE256 output; values >= q are discarded, so accepted values
    are exactly uniform.
    """
    q = params.modulus
    bits = max(1, (q - 1).bit_length())
    nbytes = (bits + 7) // 8
    mask = (1 << bits) - 1
    stream = xof(domain_tag, data)
    out = []
    while len(out) < params.degree:
        val = int.from_bytes(stream.read(nbytes), "little") & mask
        if val < q:
            out.append(val)
    return Poly(tuple(out))


def poly_to_bytes(a: Poly, params: RingParams) -> bytes:
    """Little-endian 16-bit coefficient encoding (q < 2^16)."""
    _check(a, params)
    return struct.pack(f"<{params.degree}H", *a.coeffs)


def poly_from_bytes(data: bytes, params: RingParams) -> Poly:
    m = params.degree
    if len(data) != 2 * m:
        raise ParamMismatch(f"expected {2 * m} bytes, got {len(data)}")
    coeffs = struct.unpack(f"<{m}H", data)
    p = Poly(tuple(int(c) for c in coeffs))
    _check(p, params)
    return p
