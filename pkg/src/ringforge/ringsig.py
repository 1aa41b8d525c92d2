"""The two ring-signature constructions.

Trapdoor route ("rpsf" scheme): a fresh salt is hashed with the canonical
ring and the message into R_q; the signature is (salt, preimage).  The
verifier recomputes the target, applies the norm gate, and evaluates the
preimage.  Signing retries with a fresh salt when the sampled preimage falls
outside the norm ball, trading the analytic correctness loss for a practical
API; the bound calculator still reports the loss.

Circular Fiat-Shamir route ("aos" scheme): the signer commits honestly at
their own slot, then walks the ring simulating every other slot against the
chained challenge ch_j = H(j, ring, com_{j-1}, m); the loop closes with the
signer's real response.  Verification recomputes the challenge chain and
checks each slot.  All hash inputs are domain-separated by construction tag
and, for the chain, by slot index and canonical ring bytes.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .ring import Poly, RingParams, hash_to_ring, poly_from_bytes, poly_to_bytes, xof
from .rpsf import (
    DomainElement,
    RpsfParams,
    RpsfPublicKey,
    RpsfSecretKey,
    SignerNotInRing,
    RingTooLarge,
    canonical_ring,
    in_domain,
    rpsf_eval,
    rpsf_sample_pre,
)
from .sigma import (
    Challenge,
    CnoCommitment,
    CnoResponse,
    SigmaInstance,
    SigmaWitness,
    sigma_commit,
    sigma_respond,
    sigma_simulate,
    sigma_verify,
)

__all__ = [
    "AosSecretKey",
    "AosSignature",
    "RetriesExhausted",
    "RpsfRingSignature",
    "RpsfSigParams",
    "TAG_AOS_CHAIN",
    "TAG_RPSF_TARGET",
    "aos_ring_bytes",
    "aos_sign",
    "aos_verify",
    "canonical_instances",
    "challenge_map",
    "gamma_cl",
    "rpsf_ring_bytes",
    "rpsf_ring_sign",
    "rpsf_ring_verify",
]

TAG_RPSF_TARGET = b"RPSF-RS"
TAG_AOS_CHAIN = b"AOS-RS"
CHAIN_DIGEST_LEN = 32


class RetriesExhausted(RuntimeError):
    """Signing kept sampling out-of-ball preimages; width/beta mismatch."""


@dataclass(frozen=True)
class RpsfSigParams:
    """Trapdoor-scheme signing parameters: RPSF setup plus salt length."""

    rpsf: RpsfParams
    salt_bits: int = 128
    max_retries: int = 64

    def __post_init__(self):
        if self.salt_bits < 0 or self.salt_bits % 8 != 0:
            raise ValueError("salt_bits must be a non-negative multiple of 8")


@dataclass(frozen=True)
class RpsfRingSignature:
    salt: bytes
    d: DomainElement


@dataclass(frozen=True)
class AosSignature:
    parts: tuple[tuple[CnoCommitment, CnoResponse], ...]


@dataclass(frozen=True)
class AosSecretKey:
    instance: SigmaInstance
    witness: SigmaWitness


def rpsf_ring_bytes(ring: list[RpsfPublicKey], ring_params: RingParams) -> bytes:
    """Canonical ring encoding: count, then length-prefixed sorted keys."""
    keys = canonical_ring(ring, ring_params)
    parts = [struct.pack("<H", len(keys))]
    for pk in keys:
        enc = pk.encode(ring_params)
        parts.append(struct.pack("<H", len(enc)) + enc)
    return b"".join(parts)


def _rpsf_target(
    ring: list[RpsfPublicKey], salt: bytes, message: bytes, params: RpsfParams
) -> Poly:
    data = (
        rpsf_ring_bytes(ring, params.ring)
        + struct.pack("<H", len(salt))
        + salt
        + message
    )
    return hash_to_ring(TAG_RPSF_TARGET, data, params.ring)


def rpsf_ring_sign(
    sk: RpsfSecretKey,
    ring: list[RpsfPublicKey],
    message: bytes,
    params: RpsfSigParams,
    rng: np.random.Generator,
) -> RpsfRingSignature:
    """Fresh-salt signing with bounded retries on the norm gate."""
    for _ in range(params.max_retries):
        salt = rng.bytes(params.salt_bits // 8) if params.salt_bits else b""
        target = _rpsf_target(ring, salt, message, params.rpsf)
        d = rpsf_sample_pre(ring, sk, target, params.rpsf, rng)
        if in_domain(d, params.rpsf):
            return RpsfRingSignature(salt=salt, d=d)
    raise RetriesExhausted(f"no in-ball preimage in {params.max_retries} attempts")


def rpsf_ring_verify(
    ring: list[RpsfPublicKey],
    message: bytes,
    sig: RpsfRingSignature,
    params: RpsfSigParams,
) -> bool:
    """Norm gate plus exact target equality; malformed input verifies false."""
    try:
        if len(sig.salt) != params.salt_bits // 8:
            return False
        if not in_domain(sig.d, params.rpsf):
            return False
        target = _rpsf_target(ring, sig.salt, message, params.rpsf)
        return rpsf_eval(ring, sig.d, params.rpsf) == target
    except (ValueError, KeyError, struct.error):
        return False


# ---------------------------------------------------------------------------
# circular Fiat-Shamir over the sigma protocol
# ---------------------------------------------------------------------------


def canonical_instances(ring: list[SigmaInstance]) -> tuple[SigmaInstance, ...]:
    seen: dict[bytes, SigmaInstance] = {}
    for inst in ring:
        seen.setdefault(inst.encode(), inst)
    return tuple(seen[k] for k in sorted(seen))


def aos_ring_bytes(ring: list[SigmaInstance]) -> bytes:
    insts = canonical_instances(ring)
    parts = [struct.pack("<H", len(insts))]
    for inst in insts:
        enc = inst.encode()
        parts.append(struct.pack("<H", len(enc)) + enc)
    return b"".join(parts)


def gamma_cl(inst: SigmaInstance) -> int:
    """Max fiber size of the digest-to-challenge map: ceil(2^256 / |E|)."""
    return -((1 << (8 * CHAIN_DIGEST_LEN)) // -len(inst.edges))


def challenge_map(y: bytes, inst: SigmaInstance) -> tuple[Challenge, int]:
    """Map a chain digest to an edge index; also return the fiber bound."""
    if len(inst.edges) < 1:
        raise ValueError("instance has no edges")
    idx = int.from_bytes(y, "big") % len(inst.edges)
    return Challenge(edge_index=idx), gamma_cl(inst)


def _commitment_bytes(com: CnoCommitment) -> bytes:
    return b"".join(com.hashes)


def _chain_digest(
    slot_1based: int, ring_bytes: bytes, prev_com: CnoCommitment, message: bytes, hasher
) -> bytes:
    data = (
        struct.pack("<H", slot_1based)
        + ring_bytes
        + _commitment_bytes(prev_com)
        + message
    )
    if hasher is not None:
        return hasher.digest(TAG_AOS_CHAIN, data, CHAIN_DIGEST_LEN)
    return xof(TAG_AOS_CHAIN, data).read(CHAIN_DIGEST_LEN)


def aos_sign(
    sk: AosSecretKey,
    ring: list[SigmaInstance],
    message: bytes,
    rng: np.random.Generator,
    kappa: int = 64,
    hasher=None,
) -> AosSignature:
    """Walk the ring from the signer's slot, simulating every other slot."""
    insts = canonical_instances(ring)
    n = len(insts)
    if n > kappa:
        raise RingTooLarge(f"ring of {n} exceeds cap {kappa}")
    my = sk.instance.encode()
    positions = [k for k, inst in enumerate(insts) if inst.encode() == my]
    if not positions:
        raise SignerNotInRing("witness instance is not in the ring")
    i = positions[0]
    rb = aos_ring_bytes(ring)

    coms: list[CnoCommitment | None] = [None] * n
    rsps: list[CnoResponse | None] = [None] * n
    com_i, state = sigma_commit(insts[i], sk.witness, rng, hasher=hasher)
    coms[i] = com_i
    for step in range(1, n):
        j = (i + step) % n
        digest = _chain_digest(j + 1, rb, coms[(j - 1) % n], message, hasher)
        ch_j, _ = challenge_map(digest, insts[j])
        coms[j], rsps[j] = sigma_simulate(insts[j], ch_j, rng, hasher=hasher)
    digest = _chain_digest(i + 1, rb, coms[(i - 1) % n], message, hasher)
    ch_i, _ = challenge_map(digest, insts[i])
    rsps[i] = sigma_respond(state, sk.witness, ch_i)
    return AosSignature(parts=tuple(zip(coms, rsps)))


def aos_verify(
    ring: list[SigmaInstance],
    message: bytes,
    sig: AosSignature,
    hasher=None,
) -> bool:
    """Recompute the challenge chain and check every slot."""
    try:
        insts = canonical_instances(ring)
        n = len(insts)
        if len(sig.parts) != n:
            return False
        rb = aos_ring_bytes(ring)
        for j in range(n):
            digest = _chain_digest(j + 1, rb, sig.parts[(j - 1) % n][0], message, hasher)
            ch_j, _ = challenge_map(digest, insts[j])
            if not sigma_verify(insts[j], sig.parts[j][0], ch_j, sig.parts[j][1], hasher=hasher):
                return False
        return True
    except (ValueError, KeyError, IndexError, struct.error):
        return False


# ---------------------------------------------------------------------------
# binary signature encodings ("RFS1" trapdoor route, "RFA1" AOS route)
# ---------------------------------------------------------------------------

MAGIC_RPSF_SIG = b"RFS1"
MAGIC_AOS_SIG = b"RFA1"
FORMAT_VERSION = 1


def encode_rpsf_signature(sig: RpsfRingSignature, params: RpsfSigParams) -> bytes:
    rp = params.rpsf.ring
    parts = [
        MAGIC_RPSF_SIG,
        struct.pack("<BHH", FORMAT_VERSION, rp.degree, rp.modulus),
        struct.pack("<H", len(sig.salt)),
        sig.salt,
        struct.pack("<B", len(sig.d.polys)),
    ]
    parts += [poly_to_bytes(p, rp) for p in sig.d.polys]
    return b"".join(parts)


def decode_rpsf_signature(data: bytes, params: RpsfSigParams) -> RpsfRingSignature:
    rp = params.rpsf.ring
    if data[:4] != MAGIC_RPSF_SIG:
        raise ValueError("bad signature magic")
    ver, m, q = struct.unpack_from("<BHH", data, 4)
    if ver != FORMAT_VERSION or m != rp.degree or q != rp.modulus:
        raise ValueError("signature header does not match parameters")
    off = 9
    (salt_len,) = struct.unpack_from("<H", data, off)
    off += 2
    salt = data[off : off + salt_len]
    off += salt_len
    (count,) = struct.unpack_from("<B", data, off)
    off += 1
    polys = []
    for _ in range(count):
        polys.append(poly_from_bytes(data[off : off + 2 * m], rp))
        off += 2 * m
    if off != len(data):
        raise ValueError("trailing bytes in signature")
    return RpsfRingSignature(salt=salt, d=DomainElement(tuple(polys)))


def encode_aos_signature(sig: AosSignature) -> bytes:
    parts = [MAGIC_AOS_SIG, struct.pack("<BH", FORMAT_VERSION, len(sig.parts))]
    for com, rsp in sig.parts:
        parts.append(struct.pack("<H", len(com.hashes)))
        parts.extend(com.hashes)
        parts.append(struct.pack("<B", len(rsp.opened)))
        for vertex in sorted(rsp.opened):
            color, rand = rsp.opened[vertex]
            parts.append(struct.pack("<HBH", vertex, color, len(rand)) + rand)
    return b"".join(parts)


def decode_aos_signature(data: bytes) -> AosSignature:
    if data[:4] != MAGIC_AOS_SIG:
        raise ValueError("bad signature magic")
    ver, n = struct.unpack_from("<BH", data, 4)
    if ver != FORMAT_VERSION:
        raise ValueError("unknown signature version")
    off = 7
    out = []
    for _ in range(n):
        (nv,) = struct.unpack_from("<H", data, off)
        off += 2
        hashes = []
        for _ in range(nv):
            hashes.append(data[off : off + CHAIN_DIGEST_LEN])
            off += CHAIN_DIGEST_LEN
        (nopen,) = struct.unpack_from("<B", data, off)
        off += 1
        opened = {}
        for _ in range(nopen):
            vertex, color, rlen = struct.unpack_from("<HBH", data, off)
            off += 5
            opened[vertex] = (color, data[off : off + rlen])
            off += rlen
        out.append((CnoCommitment(tuple(hashes)), CnoResponse(opened)))
    if off != len(data):
        raise ValueError("trailing bytes in signature")
    return AosSignature(parts=tuple(out))
