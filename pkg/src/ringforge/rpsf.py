"""Ring preimage-sampleable trapdoor functions over NTRU public keys.

A ring of N public keys (h_1, ..., h_N) defines the linear map

    f_ring(u_1, ..., u_N, v) = v + sum_i h_i * u_i   in R_q.

Domain sampling draws all N+1 coordinates from the coefficient-wise discrete
Gaussian of width s.  Preimage sampling fixes the target exactly: the
non-signer coordinates are fresh Gaussian draws, their images are subtracted
from the target, and the signer's (u_j, v) pair is drawn from the NTRU-lattice
coset that evaluates to the remainder.  Evaluation of a sampled preimage
therefore reproduces the target with no error; the norm gate (membership in
the ball of radius beta) is applied by the signature layer, which is where
the correctness loss delta(kappa) re-enters.

Ring order everywhere is the canonical sorted order of public-key encodings,
so verification can reconstruct coordinate positions deterministically.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .lattice import (
    DEFAULT_SMOOTHING_EPS,
    NtruTrapdoor,
    ParamReport,
    klein_sample,
    ntru_trapdoor_gen,
    sample_z_batch,
    smoothing_z,
    validate_params,
)
from .ring import (
    Poly,
    RingParams,
    centered_coeffs,
    coeff_norm,
    poly_add,
    poly_from_coeffs,
    poly_mul,
    poly_sub,
    poly_to_bytes,
    poly_zero,
)

__all__ = [
    "DomainElement",
    "InvalidConfig",
    "RingTooLarge",
    "RpsfParams",
    "RpsfPublicKey",
    "RpsfSecretKey",
    "ShapeMismatch",
    "SignerNotInRing",
    "canonical_ring",
    "in_domain",
    "recommended_width",
    "rpsf_eval",
    "rpsf_keygen",
    "rpsf_sample_dom",
    "rpsf_sample_pre",
    "rpsf_setup",
]


class InvalidConfig(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class SignerNotInRing(ValueError):
    pass


class RingTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class RpsfParams:
    """Setup output: ring parameters, Gaussian width, ring cap, norm bound.

    beta = tau * s * sqrt((kappa + 1) * M) exactly as configured.
    """

    ring: RingParams
    s: float
    kappa: int
    tau: float
    beta: float
    s_key: float
    alpha_quality: float
    smoothing_eps: float
    report: ParamReport


@dataclass(frozen=True)
class RpsfPublicKey:
    h: Poly

    def encode(self, ring_params: RingParams) -> bytes:
        return poly_to_bytes(self.h, ring_params)


@dataclass(frozen=True)
class RpsfSecretKey:
    trapdoor: NtruTrapdoor
    public: RpsfPublicKey


@dataclass(frozen=True)
class DomainElement:
    """Preimage candidate (u_1, ..., u_N, v): N+1 ring elements."""

    polys: tuple[Poly, ...]

    def __len__(self) -> int:
        return len(self.polys)

    def encode(self, ring_params: RingParams) -> bytes:
        parts = [struct.pack("<B", len(self.polys))]
        parts += [poly_to_bytes(p, ring_params) for p in self.polys]
        return b"".join(parts)


def recommended_width(ring: RingParams, alpha_quality: float = 1.17,
                      eps: float = DEFAULT_SMOOTHING_EPS) -> float:
    """Smallest width valid for every trapdoor of the given quality.

    Any generated basis has max Gram-Schmidt norm <= alpha_quality * sqrt(q),
    so eta_eps(Z^{2M}) times that bound clears each key's sampling floor.
    """
    return smoothing_z(2 * ring.degree, eps) * alpha_quality * math.sqrt(ring.modulus)


def rpsf_setup(
    degree: int,
    modulus: int,
    kappa: int,
    tau: float,
    s: float | None = None,
    s_key: float | None = None,
    alpha_quality: float = 1.17,
    smoothing_eps: float = DEFAULT_SMOOTHING_EPS,
) -> RpsfParams:
    """Derive parameters; beta = tau * s * sqrt((kappa+1) * M)."""
    try:
        ring = RingParams(degree=degree, modulus=modulus)
    except ValueError as exc:
        raise InvalidConfig(str(exc)) from exc
    if kappa < 1:
        raise InvalidConfig(f"ring size cap must be >= 1, got {kappa}")
    if tau <= 1:
        raise InvalidConfig(f"tail slack must exceed 1, got {tau}")
    if s is None:
        s = recommended_width(ring, alpha_quality, smoothing_eps)
    if s <= 0:
        raise InvalidConfig(f"width must be positive, got {s}")
    if s_key is None:
        from .lattice import recommended_key_width

        s_key = recommended_key_width(ring)
    beta = tau * s * math.sqrt((kappa + 1) * degree)
    report = validate_params(ring, s, smoothing_eps, tau)
    return RpsfParams(
        ring=ring,
        s=float(s),
        kappa=kappa,
        tau=float(tau),
        beta=beta,
        s_key=float(s_key),
        alpha_quality=alpha_quality,
        smoothing_eps=smoothing_eps,
        report=report,
    )


def rpsf_keygen(params: RpsfParams, rng: np.random.Generator) -> tuple[RpsfPublicKey, RpsfSecretKey]:
    trapdoor = ntru_trapdoor_gen(
        params.ring, s_key=params.s_key, alpha_quality=params.alpha_quality, rng=rng
    )
    pk = RpsfPublicKey(h=trapdoor.h)
    return pk, RpsfSecretKey(trapdoor=trapdoor, public=pk)


def canonical_ring(pks: list[RpsfPublicKey], ring_params: RingParams) -> tuple[RpsfPublicKey, ...]:
    """Sorted, deduplicated ring; coordinate order follows this encoding order."""
    seen: dict[bytes, RpsfPublicKey] = {}
    for pk in pks:
        seen.setdefault(pk.encode(ring_params), pk)
    return tuple(seen[k] for k in sorted(seen))


def _gaussian_poly(params: RpsfParams, rng: np.random.Generator) -> Poly:
    return poly_from_coeffs(
        sample_z_batch(params.s, 0.0, params.ring.degree, rng), params.ring
    )


def rpsf_eval(ring: list[RpsfPublicKey], d: DomainElement, params: RpsfParams) -> Poly:
    """The linear map v + sum_i h_i u_i over the canonical ring order."""
    keys = canonical_ring(ring, params.ring)
    if len(d.polys) != len(keys) + 1:
        raise ShapeMismatch(
            f"domain element has {len(d.polys)} parts, ring of {len(keys)} needs {len(keys) + 1}"
        )
    acc = d.polys[-1]
    for pk, u in zip(keys, d.polys[:-1]):
        acc = poly_add(acc, poly_mul(pk.h, u, params.ring), params.ring)
    return acc


def rpsf_sample_dom(
    ring: list[RpsfPublicKey], params: RpsfParams, rng: np.random.Generator
) -> DomainElement:
    """N+1 independent Gaussian ring elements; not guaranteed in-domain."""
    keys = canonical_ring(ring, params.ring)
    if len(keys) > params.kappa:
        raise RingTooLarge(f"ring of {len(keys)} exceeds cap {params.kappa}")
    return DomainElement(tuple(_gaussian_poly(params, rng) for _ in range(len(keys) + 1)))


def rpsf_sample_pre(
    ring: list[RpsfPublicKey],
    sk: RpsfSecretKey,
    target: Poly,
    params: RpsfParams,
    rng: np.random.Generator,
) -> DomainElement:
    """Exact preimage of ``target`` under f_ring.

    Coset sampling: with c0 = (0, remainder) the signer pair is c0 + w for a
    lattice point w ~ D_{Lambda, s, -c0}, so h_j u_j + v = remainder exactly
    and evaluation reproduces the target with no error.
    """
    keys = canonical_ring(ring, params.ring)
    if len(keys) > params.kappa:
        raise RingTooLarge(f"ring of {len(keys)} exceeds cap {params.kappa}")
    my = sk.public.encode(params.ring)
    positions = [i for i, pk in enumerate(keys) if pk.encode(params.ring) == my]
    if not positions:
        raise SignerNotInRing("secret key's public value is not in the ring")
    j = positions[0]
    ring_p = params.ring
    m = ring_p.degree

    others: dict[int, Poly] = {}
    remainder = target
    for i, pk in enumerate(keys):
        if i == j:
            continue
        u = _gaussian_poly(params, rng)
        others[i] = u
        remainder = poly_sub(remainder, poly_mul(pk.h, u, ring_p), ring_p)

    c_cent = np.array(centered_coeffs(remainder, ring_p), dtype=np.int64)
    c0 = np.concatenate([np.zeros(m, dtype=np.int64), c_cent])
    w = klein_sample(
        sk.trapdoor.basis, params.s, -c0.astype(np.float64), rng,
        smoothing_eps=params.smoothing_eps,
    )
    pair = c0 + w
    u_j = poly_from_coeffs(pair[:m], ring_p)
    v = poly_from_coeffs(pair[m:], ring_p)

    parts = [others[i] if i != j else u_j for i in range(len(keys))]
    parts.append(v)
    return DomainElement(tuple(parts))


def in_domain(d: DomainElement, params: RpsfParams) -> bool:
    """Membership in the domain ball: ||centered(d)|| <= beta."""
    return coeff_norm(list(d.polys), params.ring) <= params.beta
