import dataclasses

import numpy as np
import pytest

from ringforge.games import RecordingHasher, sigma_gen_retry
from ringforge.ring import centered, poly_from_coeffs
from ringforge.ringsig import (
    AosSecretKey,
    RetriesExhausted,
    RpsfRingSignature,
    RpsfSigParams,
    TAG_AOS_CHAIN,
    aos_sign,
    aos_verify,
    canonical_instances,
    challenge_map,
    decode_aos_signature,
    decode_rpsf_signature,
    encode_aos_signature,
    encode_rpsf_signature,
    gamma_cl,
    rpsf_ring_sign,
    rpsf_ring_verify,
)
from ringforge.rpsf import DomainElement, SignerNotInRing
from ringforge.sigma import Challenge, CnoResponse, SigmaInstance, sigma_verify


@pytest.fixture(scope="module")
def aos_keys():
    rng = np.random.default_rng(808)
    return [sigma_gen_retry(5, 0.9, rng) for _ in range(3)]


def test_rpsf_sign_verify_ring_sizes(small_sig_params, small_keys, rng):
    for n in (1, 2, 3, 4):
        ring = [pk for pk, _ in small_keys[:n]]
        sk = small_keys[n - 1][1]
        for trial in range(10):
            msg = b"size %d trial %d" % (n, trial)
            sig = rpsf_ring_sign(sk, ring, msg, small_sig_params, rng)
            assert rpsf_ring_verify(ring, msg, sig, small_sig_params)


def test_rpsf_salt_freshness(small_sig_params, small_keys, rng):
    ring = [pk for pk, _ in small_keys[:2]]
    sk = small_keys[0][1]
    s1 = rpsf_ring_sign(sk, ring, b"same message", small_sig_params, rng)
    s2 = rpsf_ring_sign(sk, ring, b"same message", small_sig_params, rng)
    assert s1.salt != s2.salt  # signing is randomized


def test_rpsf_salt_uniqueness(small_sig_params, small_keys, rng):
    ring = [pk for pk, _ in small_keys[:2]]
    sk = small_keys[0][1]
    salts = {
        rpsf_ring_sign(sk, ring, b"m", small_sig_params, rng).salt for _ in range(10_000)
    }
    assert len(salts) == 10_000


def test_rpsf_verify_rejects_salt_flip(small_sig_params, small_keys, rng):
    ring = [pk for pk, _ in small_keys[:2]]
    sig = rpsf_ring_sign(small_keys[0][1], ring, b"msg", small_sig_params, rng)
    bad = dataclasses.replace(sig, salt=bytes([sig.salt[0] ^ 1]) + sig.salt[1:])
    assert not rpsf_ring_verify(ring, b"msg", bad, small_sig_params)


def test_rpsf_verify_norm_gate(small_sig_params, small_keys, rng):
    """A preimage with matching hash but norm past beta must be rejected."""
    params = small_sig_params
    ring_params = params.rpsf.ring
    ring = [pk for pk, _ in small_keys[:2]]
    sig = rpsf_ring_sign(small_keys[0][1], ring, b"gate", params, rng)
    # shift mass along the kernel of the map: u_1 += x, v -= h_1 x keeps the
    # image but inflates the norm
    from ringforge.ring import poly_add, poly_mul, poly_sub
    from ringforge.rpsf import canonical_ring, rpsf_eval

    keys = canonical_ring(ring, ring_params)
    big = poly_from_coeffs([ring_params.modulus // 2] * ring_params.degree, ring_params)
    polys = list(sig.d.polys)
    polys[0] = poly_add(polys[0], big, ring_params)
    polys[-1] = poly_sub(polys[-1], poly_mul(keys[0].h, big, ring_params), ring_params)
    inflated = dataclasses.replace(sig, d=DomainElement(tuple(polys)))
    assert rpsf_eval(ring, inflated.d, params.rpsf) == rpsf_eval(ring, sig.d, params.rpsf)
    assert not rpsf_ring_verify(ring, b"gate", inflated, params)


def test_rpsf_ring_permutation_invariance(small_sig_params, small_keys, rng):
    ring = [pk for pk, _ in small_keys[:3]]
    sig = rpsf_ring_sign(small_keys[2][1], ring, b"perm", small_sig_params, rng)
    assert rpsf_ring_verify(ring[::-1], b"perm", sig, small_sig_params)
    assert rpsf_ring_verify([ring[1], ring[0], ring[2]], b"perm", sig, small_sig_params)


def test_rpsf_signer_not_in_ring(small_sig_params, small_keys, rng):
    from ringforge.rpsf import rpsf_keygen

    outsider = rpsf_keygen(small_sig_params.rpsf, np.random.default_rng(31))[1]
    ring = [pk for pk, _ in small_keys[:2]]
    with pytest.raises(SignerNotInRing):
        rpsf_ring_sign(outsider, ring, b"no", small_sig_params, rng)


def test_rpsf_retries_exhausted(small_params, small_keys, rng):
    # a beta far below typical norms forces the retry budget to run out
    starved = dataclasses.replace(small_params, beta=1.0)
    params = RpsfSigParams(rpsf=starved, salt_bits=128, max_retries=4)
    ring = [pk for pk, _ in small_keys[:2]]
    with pytest.raises(RetriesExhausted):
        rpsf_ring_sign(small_keys[0][1], ring, b"starved", params, rng)


def test_rpsf_zero_salt_mode(small_params, small_keys, rng):
    params = RpsfSigParams(rpsf=small_params, salt_bits=0)
    ring = [pk for pk, _ in small_keys[:2]]
    sig = rpsf_ring_sign(small_keys[0][1], ring, b"saltless", params, rng)
    assert sig.salt == b""
    assert rpsf_ring_verify(ring, b"saltless", sig, params)


def test_rpsf_signature_encoding_roundtrip(small_sig_params, small_keys, rng):
    ring = [pk for pk, _ in small_keys[:2]]
    sig = rpsf_ring_sign(small_keys[0][1], ring, b"enc", small_sig_params, rng)
    blob = encode_rpsf_signature(sig, small_sig_params)
    assert encode_rpsf_signature(decode_rpsf_signature(blob, small_sig_params), small_sig_params) == blob


# ---------------------------------------------------------------------------
# circular construction
# ---------------------------------------------------------------------------


def test_aos_sign_verify_sizes(aos_keys, rng):
    for n in (1, 2, 3):
        ring = [inst for inst, _ in aos_keys[:n]]
        sk = AosSecretKey(instance=aos_keys[0][0], witness=aos_keys[0][1])
        for trial in range(20):
            msg = b"aos %d %d" % (n, trial)
            sig = aos_sign(sk, ring, msg, rng)
            assert aos_verify(ring, msg, sig)


def test_aos_each_slot_verifies_against_recomputed_challenge(aos_keys, rng):
    from ringforge.ringsig import _chain_digest, aos_ring_bytes

    ring = [inst for inst, _ in aos_keys]
    sk = AosSecretKey(instance=aos_keys[1][0], witness=aos_keys[1][1])
    msg = b"slots"
    sig = aos_sign(sk, ring, msg, rng)
    insts = canonical_instances(ring)
    rb = aos_ring_bytes(ring)
    for j, inst in enumerate(insts):
        digest = _chain_digest(j + 1, rb, sig.parts[(j - 1) % len(insts)][0], msg, None)
        ch, _ = challenge_map(digest, inst)
        assert sigma_verify(inst, sig.parts[j][0], ch, sig.parts[j][1])


def test_aos_challenge_chain_matches_signing_transcript(aos_keys, rng):
    """Verification recomputes exactly the chain digests used while signing."""
    ring = [inst for inst, _ in aos_keys]
    sk = AosSecretKey(instance=aos_keys[0][0], witness=aos_keys[0][1])
    signer_hash = RecordingHasher()
    msg = b"chain"
    sig = aos_sign(sk, ring, msg, rng, hasher=signer_hash)
    verifier_hash = RecordingHasher()
    assert aos_verify(ring, msg, sig, hasher=verifier_hash)
    sign_chain = {
        r.data: r.output for r in signer_hash.transcript.records if r.tag == TAG_AOS_CHAIN
    }
    verify_chain = {
        r.data: r.output for r in verifier_hash.transcript.records if r.tag == TAG_AOS_CHAIN
    }
    assert set(verify_chain) == set(sign_chain)
    for data, out in verify_chain.items():
        assert sign_chain[data] == out


def test_aos_swap_commitments_fails(aos_keys, rng):
    ring = [inst for inst, _ in aos_keys[:2]]
    sk = AosSecretKey(instance=aos_keys[0][0], witness=aos_keys[0][1])
    sig = aos_sign(sk, ring, b"swap", rng)
    parts = list(sig.parts)
    swapped = dataclasses.replace(
        sig,
        parts=(
            (parts[1][0], parts[0][1]),
            (parts[0][0], parts[1][1]),
        ),
    )
    assert not aos_verify(ring, b"swap", swapped)


def test_aos_tampered_color_fails(aos_keys, rng):
    ring = [inst for inst, _ in aos_keys[:2]]
    sk = AosSecretKey(instance=aos_keys[0][0], witness=aos_keys[0][1])
    sig = aos_sign(sk, ring, b"tamper", rng)
    parts = list(sig.parts)
    com0, rsp0 = parts[0]
    vertex = next(iter(rsp0.opened))
    color, rand = rsp0.opened[vertex]
    parts[0] = (com0, CnoResponse({**rsp0.opened, vertex: ((color + 1) % 3, rand)}))
    assert not aos_verify(ring, b"tamper", dataclasses.replace(sig, parts=tuple(parts)))


def test_aos_ring_permutation_invariance(aos_keys, rng):
    ring = [inst for inst, _ in aos_keys]
    sk = AosSecretKey(instance=aos_keys[2][0], witness=aos_keys[2][1])
    sig = aos_sign(sk, ring, b"perm", rng)
    assert aos_verify(ring[::-1], b"perm", sig)


def test_aos_signer_not_in_ring(aos_keys, rng):
    outsider_inst, outsider_wit = sigma_gen_retry(5, 0.9, np.random.default_rng(99))
    ring = [inst for inst, _ in aos_keys[:2]]
    with pytest.raises(SignerNotInRing):
        aos_sign(AosSecretKey(outsider_inst, outsider_wit), ring, b"no", rng)


def test_challenge_map_values():
    single = SigmaInstance(vertices=3, edges=((0, 1),))
    ch, fiber = challenge_map(b"\xff" * 32, single)
    assert ch.edge_index == 0 and fiber == 1 << 256
    triangle = SigmaInstance(vertices=3, edges=((0, 1), (0, 2), (1, 2)))
    ch, fiber = challenge_map(b"\x00" * 32, triangle)
    assert ch.edge_index == 0
    assert fiber == -((1 << 256) // -3)
    assert gamma_cl(triangle) == fiber


def test_aos_signature_encoding_roundtrip(aos_keys, rng):
    ring = [inst for inst, _ in aos_keys[:2]]
    sk = AosSecretKey(instance=aos_keys[0][0], witness=aos_keys[0][1])
    sig = aos_sign(sk, ring, b"enc", rng)
    blob = encode_aos_signature(sig)
    assert encode_aos_signature(decode_aos_signature(blob)) == blob
    assert aos_verify(ring, b"enc", decode_aos_signature(blob))
