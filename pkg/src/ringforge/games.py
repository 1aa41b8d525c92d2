"""Executable security games with pluggable classical adversaries.

The forgery games enforce the oracle budget, the ring-subset condition, and
the freshness list exactly as defined: the strong game records full
(ring, message, signature) triples, the one-per-message variant records
(ring, message) pairs and refuses duplicate signing queries.  The anonymity
game hands the adversary every secret key and answers challenge queries
with the hidden bit's signer.  A sign query for a public key outside the
honest ring returns None; exceeding the oracle budget is a protocol
violation and raises.

The extraction demonstration runs the AOS scheme with all classical hash
queries routed through a recording oracle; on a valid forgery the recorded
transcript is inverted (earliest preimage per commitment, lexicographic
tie-break across distinct preimages) and the per-slot extractor is applied.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .ring import RingParams, xof
from .rpsf import RpsfParams, rpsf_setup, rpsf_keygen
from .ringsig import (
    AosSecretKey,
    RpsfSigParams,
    aos_ring_bytes,
    aos_sign,
    aos_verify,
    canonical_instances,
    rpsf_ring_bytes,
    rpsf_ring_sign,
    rpsf_ring_verify,
    encode_aos_signature,
    encode_rpsf_signature,
)
from .sigma import (
    COMMIT_TAG,
    Challenge,
    CnoCommitment,
    CnoResponse,
    DegenerateGraph,
    ExtractFail,
    SigmaInstance,
    SigmaWitness,
    commit_message_bytes,
    is_proper,
    parse_commit_message,
    sigma_commit,
    sigma_extract,
    sigma_gen,
    sigma_respond,
    sigma_simulate,
)


def sigma_gen_retry(vertices, edge_density, rng, rand_bits=128, attempts=100):
    """sigma_gen, resampling when the planted graph comes out edgeless."""
    for _ in range(attempts):
        try:
            return sigma_gen(vertices, edge_density, rng, rand_bits)
        except DegenerateGraph:
            continue
    raise DegenerateGraph(f"no usable instance in {attempts} attempts")

__all__ = [
    "AdversaryProtocolViolation",
    "BUILTIN_ADVERSARIES",
    "GameConfig",
    "GameResult",
    "RecordingHasher",
    "RoTranscript",
    "biased_simulator",
    "hvzk_distance_estimate",
    "make_scheme",
    "run_anon",
    "run_sufcra",
    "run_ufcra1",
    "run_ufnra_with_extraction",
]


class AdversaryProtocolViolation(RuntimeError):
    """The adversary exceeded its oracle budget."""


@dataclass(frozen=True)
class GameResult:
    won: bool
    queries_used: int
    freshness_violation: bool = False


@dataclass
class GameConfig:
    scheme: str = "rpsf"
    n_ring: int = 2
    q_s: int = 4
    q_c: int = 1
    seed: int | None = None
    # trapdoor-scheme knobs (desk-scale defaults keep key generation fast)
    degree: int = 8
    modulus: int = 769
    kappa: int = 4
    tau: float = 1.2
    salt_bits: int = 128
    # circular-scheme knobs
    vertices: int = 5
    edge_density: float = 0.9
    rand_bits: int = 128


# ---------------------------------------------------------------------------
# classical random-oracle transcript
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RoRecord:
    tag: bytes
    data: bytes
    output: bytes


class RoTranscript:
    """Append-only record of classical oracle queries made during a game."""

    def __init__(self):
        self.records: list[RoRecord] = []

    def append(self, record: RoRecord) -> None:
        self.records.append(record)

    def earliest_preimage(self, tag: bytes, output: bytes) -> bytes | None:
        """Earliest recorded preimage of ``output`` under ``tag``.

        When several distinct inputs map to the same output (an actual
        collision in the record) the lexicographically smallest input wins.
        """
        seen: list[bytes] = []
        for rec in self.records:
            if rec.tag == tag and rec.output == output and rec.data not in seen:
                seen.append(rec.data)
        if not seen:
            return None
        return seen[0] if len(seen) == 1 else min(seen)


class RecordingHasher:
    """Hash oracle wrapper appending every classical query to a transcript."""

    def __init__(self):
        self.transcript = RoTranscript()

    def digest(self, tag: bytes, data: bytes, n: int = 32) -> bytes:
        out = xof(tag, data).read(n)
        self.transcript.append(RoRecord(tag=tag, data=data, output=out))
        return out


# ---------------------------------------------------------------------------
# scheme adapters
# ---------------------------------------------------------------------------


class RpsfScheme:
    name = "rpsf"

    def __init__(self, cfg: GameConfig):
        base = rpsf_setup(
            degree=cfg.degree, modulus=cfg.modulus, kappa=cfg.kappa, tau=cfg.tau
        )
        self.params = RpsfSigParams(rpsf=base, salt_bits=cfg.salt_bits)

    def keygen(self, rng):
        return rpsf_keygen(self.params.rpsf, rng)

    def sign(self, sk, ring, message, rng):
        return rpsf_ring_sign(sk, list(ring), message, self.params, rng)

    def verify(self, ring, message, sig):
        return rpsf_ring_verify(list(ring), message, sig, self.params)

    def pk_bytes(self, pk) -> bytes:
        return pk.encode(self.params.rpsf.ring)

    def ring_bytes(self, ring) -> bytes:
        return rpsf_ring_bytes(list(ring), self.params.rpsf.ring)

    def sig_bytes(self, sig) -> bytes:
        return encode_rpsf_signature(sig, self.params)


class AosScheme:
    name = "aos"

    def __init__(self, cfg: GameConfig, hasher=None):
        self.vertices = cfg.vertices
        self.edge_density = cfg.edge_density
        self.rand_bits = cfg.rand_bits
        self.kappa = cfg.kappa
        self.hasher = hasher

    def keygen(self, rng):
        inst, wit = sigma_gen_retry(self.vertices, self.edge_density, rng, self.rand_bits)
        return inst, AosSecretKey(instance=inst, witness=wit)

    def sign(self, sk, ring, message, rng):
        return aos_sign(sk, list(ring), message, rng, kappa=self.kappa, hasher=self.hasher)

    def verify(self, ring, message, sig):
        return aos_verify(list(ring), message, sig, hasher=None)

    def pk_bytes(self, pk) -> bytes:
        return pk.encode()

    def ring_bytes(self, ring) -> bytes:
        return aos_ring_bytes(list(ring))

    def sig_bytes(self, sig) -> bytes:
        return encode_aos_signature(sig)


def make_scheme(cfg: GameConfig, hasher=None):
    if cfg.scheme == "rpsf":
        return RpsfScheme(cfg)
    if cfg.scheme == "aos":
        return AosScheme(cfg, hasher=hasher)
    raise ValueError(f"unknown scheme {cfg.scheme!r}")


# ---------------------------------------------------------------------------
# game views handed to adversaries
# ---------------------------------------------------------------------------


@dataclass
class GameView:
    ring: list
    rng: np.random.Generator
    scheme: object
    sign: object = None  # callable (i, ring_prime, message) -> signature | None
    chal: object = None  # callable (i0, i1, ring_prime, message) -> signature | None
    secret_keys: list | None = None  # anonymity game only
    stolen_sk: object = None  # plumbing-validation adversaries only
    true_bit: int | None = None  # bug-canary control only
    hasher: object = None  # extraction demo only
    witness_key: object = None  # extraction demo only


class _SignOracle:
    def __init__(self, scheme, ring, sks, budget: int, rng, one_per_message: bool):
        self.scheme = scheme
        self.ring = list(ring)
        self.by_bytes = {scheme.pk_bytes(pk): sk for pk, sk in zip(ring, sks)}
        self.budget = budget
        self.rng = rng
        self.one_per_message = one_per_message
        self.queries = 0
        self.seen: set = set()

    def key(self, ring_prime, message, sig):
        if self.one_per_message:
            return (self.scheme.ring_bytes(ring_prime), message)
        return (self.scheme.ring_bytes(ring_prime), message, self.scheme.sig_bytes(sig))

    def __call__(self, i: int, ring_prime, message: bytes):
        if self.queries == self.budget:
            raise AdversaryProtocolViolation("signing budget exhausted")
        if not 0 <= i < len(ring_prime):
            return None
        pkb = self.scheme.pk_bytes(ring_prime[i])
        sk = self.by_bytes.get(pkb)
        if sk is None:
            return None
        if self.one_per_message:
            pair = (self.scheme.ring_bytes(ring_prime), message)
            if pair in self.seen:
                return None
        self.queries += 1
        sig = self.scheme.sign(sk, ring_prime, message, self.rng)
        self.seen.add(self.key(ring_prime, message, sig))
        return sig


def _ring_subset(scheme, ring_star, ring) -> bool:
    have = {scheme.pk_bytes(pk) for pk in ring}
    return all(scheme.pk_bytes(pk) in have for pk in ring_star)


def _run_forgery_game(cfg: GameConfig, adversary, one_per_message: bool) -> GameResult:
    rng = np.random.default_rng(cfg.seed)
    scheme = make_scheme(cfg)
    keys = [scheme.keygen(rng) for _ in range(cfg.n_ring)]
    ring = [pk for pk, _ in keys]
    sks = [sk for _, sk in keys]
    oracle = _SignOracle(scheme, ring, sks, cfg.q_s, rng, one_per_message)
    view = GameView(ring=ring, rng=rng, scheme=scheme, sign=oracle, stolen_sk=sks[0])
    forgery = adversary.run(view)
    if forgery is None:
        return GameResult(won=False, queries_used=oracle.queries)
    ring_star, m_star, sig_star = forgery
    try:
        fresh_key = oracle.key(ring_star, m_star, sig_star)
    except Exception:
        return GameResult(won=False, queries_used=oracle.queries)
    if fresh_key in oracle.seen:
        return GameResult(won=False, queries_used=oracle.queries, freshness_violation=True)
    if not _ring_subset(scheme, ring_star, ring):
        return GameResult(won=False, queries_used=oracle.queries)
    try:
        won = scheme.verify(ring_star, m_star, sig_star)
    except Exception:
        won = False
    return GameResult(won=bool(won), queries_used=oracle.queries)


def run_sufcra(cfg: GameConfig, adversary) -> GameResult:
    """Strong unforgeability under chosen-ring attacks (full-triple freshness)."""
    return _run_forgery_game(cfg, adversary, one_per_message=False)


def run_ufcra1(cfg: GameConfig, adversary) -> GameResult:
    """One-per-message unforgeability: pair freshness, duplicate queries refused."""
    return _run_forgery_game(cfg, adversary, one_per_message=True)


@dataclass(frozen=True)
class AnonResult:
    advantage_estimate: float
    stderr: float
    wins: int
    trials: int


def run_anon(cfg: GameConfig, adversary, trials: int) -> AnonResult:
    """Full-key-exposure anonymity game, Monte Carlo over fresh key sets."""
    if trials < 1:
        raise ValueError("need at least one trial")
    seeds = np.random.SeedSequence(cfg.seed).spawn(trials)
    scheme = make_scheme(cfg)
    wins = 0
    for child in seeds:
        rng = np.random.default_rng(child)
        keys = [scheme.keygen(rng) for _ in range(cfg.n_ring)]
        ring = [pk for pk, _ in keys]
        sks = [sk for _, sk in keys]
        by_bytes = {scheme.pk_bytes(pk): sk for pk, sk in zip(ring, sks)}
        ring_bytes = {scheme.pk_bytes(pk) for pk in ring}
        b = int(rng.integers(0, 2))
        state = {"q": 0}

        def chal(i0, i1, ring_prime, message):
            if state["q"] == cfg.q_c:
                raise AdversaryProtocolViolation("challenge budget exhausted")
            if not (0 <= i0 < len(ring_prime) and 0 <= i1 < len(ring_prime)):
                return None
            b0 = scheme.pk_bytes(ring_prime[i0])
            b1 = scheme.pk_bytes(ring_prime[i1])
            if b0 not in ring_bytes or b1 not in ring_bytes:
                return None
            state["q"] += 1
            signer = by_bytes[b1 if b else b0]
            return scheme.sign(signer, ring_prime, message, rng)

        view = GameView(
            ring=ring,
            rng=rng,
            scheme=scheme,
            chal=chal,
            secret_keys=sks,
            true_bit=b if getattr(adversary, "needs_true_bit", False) else None,
        )
        guess = adversary.run(view)
        wins += int(guess == b)
    p_hat = wins / trials
    stderr = math.sqrt(max(p_hat * (1.0 - p_hat), 1e-12) / trials)
    return AnonResult(
        advantage_estimate=abs(p_hat - 0.5), stderr=stderr, wins=wins, trials=trials
    )


def run_ufnra_with_extraction(cfg: GameConfig, adversary) -> dict:
    """No-ring-attack forgery plus classical transcript extraction (AOS only)."""
    if cfg.scheme != "aos":
        raise ValueError("extraction demonstration runs on the aos scheme")
    rng = np.random.default_rng(cfg.seed)
    recorder = RecordingHasher()
    scheme = AosScheme(cfg, hasher=recorder)
    keys = [scheme.keygen(rng) for _ in range(cfg.n_ring)]
    ring = [pk for pk, _ in keys]
    view = GameView(
        ring=ring,
        rng=rng,
        scheme=scheme,
        hasher=recorder,
        witness_key=keys[0][1],
    )
    forgery = adversary.run(view)
    if forgery is None:
        return {"forgery_valid": False, "witness_extracted": False}
    ring_star, m_star, sig_star = forgery
    try:
        valid = aos_verify(list(ring_star), m_star, sig_star)
    except Exception:
        valid = False
    extracted = False
    insts = canonical_instances(list(ring_star))
    if valid and len(sig_star.parts) == len(insts):
        for slot, inst in enumerate(insts):
            com = sig_star.parts[slot][0]
            messages = []
            for y in com.hashes:
                pre = recorder.transcript.earliest_preimage(COMMIT_TAG, y)
                if pre is None:
                    messages.append(None)
                else:
                    _, color, rand = parse_commit_message(pre)
                    messages.append((color, rand))
            try:
                witness = sigma_extract(inst, messages)
            except ExtractFail:
                continue
            if is_proper(inst, witness.coloring):
                extracted = True
                break
    return {"forgery_valid": bool(valid), "witness_extracted": extracted}


# ---------------------------------------------------------------------------
# transcript-closeness estimate for the zero-knowledge simulator
# ---------------------------------------------------------------------------


def biased_simulator(inst: SigmaInstance, ch: Challenge, rng: np.random.Generator, hasher=None):
    """Deliberately skewed simulator fixture: the first opened color is pinned.

    Produces verifying transcripts whose opened-color law is visibly far from
    the honest marginal; used as a control for the closeness estimator.
    """
    u, v = inst.edges[ch.edge_index]
    cu = 0
    cv = 1 + int(rng.integers(0, 2))
    nbytes = inst.rand_bits // 8
    colors = [int(c) for c in rng.integers(0, 3, size=inst.vertices)]
    colors[u], colors[v] = cu, cv
    randomness = [rng.bytes(nbytes) for _ in range(inst.vertices)]
    from .sigma import _commit_hash

    hashes = tuple(
        _commit_hash(commit_message_bytes(i, colors[i], randomness[i]), hasher)
        for i in range(inst.vertices)
    )
    rsp = CnoResponse(opened={u: (cu, randomness[u]), v: (cv, randomness[v])})
    return CnoCommitment(hashes=hashes), rsp


def hvzk_distance_estimate(
    inst: SigmaInstance,
    w: SigmaWitness,
    samples: int,
    rng: np.random.Generator,
    simulator=None,
    challenge_index: int = 0,
) -> float:
    """Empirical TV between honest and simulated opened-color-pair laws.

    Both transcript families are conditioned on one fixed challenge; the
    compared feature is the ordered pair of opened colors.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    sim = simulator or sigma_simulate
    ch = Challenge(edge_index=challenge_index)
    u, v = inst.edges[ch.edge_index]
    honest: Counter = Counter()
    simulated: Counter = Counter()
    for _ in range(samples):
        com, state = sigma_commit(inst, w, rng)
        rsp = sigma_respond(state, w, ch)
        honest[(rsp.opened[u][0], rsp.opened[v][0])] += 1
        _, rsp_s = sim(inst, ch, rng)
        simulated[(rsp_s.opened[u][0], rsp_s.opened[v][0])] += 1
    feats = set(honest) | set(simulated)
    return 0.5 * sum(
        abs(honest.get(f, 0) / samples - simulated.get(f, 0) / samples) for f in feats
    )


# ---------------------------------------------------------------------------
# built-in adversaries
# ---------------------------------------------------------------------------


class ReplayAdversary:
    """Returns an oracle-issued triple verbatim; must lose via freshness."""

    def run(self, view: GameView):
        message = b"replayed message"
        sig = view.sign(0, view.ring, message)
        if sig is None:
            return None
        return (view.ring, message, sig)


class StolenKeyAdversary:
    """Signs locally with a harness-leaked key; validates game plumbing."""

    def __init__(self, message: bytes = b"stolen-key forgery"):
        self.message = message

    def run(self, view: GameView):
        sig = view.scheme.sign(view.stolen_sk, view.ring, self.message, view.rng)
        return (view.ring, self.message, sig)


class RerandomizingAdversary:
    """Asks the oracle for (ring, m), then re-signs the same pair itself.

    Fresh as a triple, stale as a pair: wins the strong game's plumbing test
    but must lose the one-per-message game.
    """

    def run(self, view: GameView):
        message = b"rerandomized"
        view.sign(0, view.ring, message)
        sig = view.scheme.sign(view.stolen_sk, view.ring, message, view.rng)
        return (view.ring, message, sig)


class BudgetExceedingAdversary:
    def run(self, view: GameView):
        i = 0
        while True:  # the harness raises once the budget is exhausted
            view.sign(0, view.ring, b"query %d" % i)
            i += 1


class DuplicateQueryAdversary:
    """Issues the same (ring, m) twice; reports whether the second returned None."""

    def __init__(self):
        self.second_was_none = None

    def run(self, view: GameView):
        first = view.sign(0, view.ring, b"dup")
        second = view.sign(0, view.ring, b"dup")
        self.second_was_none = first is not None and second is None
        return None


class RandomGuessAdversary:
    def run(self, view: GameView) -> int:
        view.chal(0, 1, view.ring, b"guess probe")
        return int(view.rng.integers(0, 2))


class NormStatAdversary:
    """Guesses the signer from per-coordinate norms of the preimage vector."""

    def run(self, view: GameView) -> int:
        from .ring import coeff_norm
        from .rpsf import canonical_ring

        message = b"norm probe"
        sig = view.chal(0, 1, view.ring, message)
        if sig is None:
            return 0
        ring_params = view.scheme.params.rpsf.ring
        keys = canonical_ring(view.ring, ring_params)
        enc = [pk.encode(ring_params) for pk in keys]
        pos0 = enc.index(view.ring[0].encode(ring_params))
        pos1 = enc.index(view.ring[1].encode(ring_params))
        n0 = coeff_norm([sig.d.polys[pos0]], ring_params)
        n1 = coeff_norm([sig.d.polys[pos1]], ring_params)
        if n0 == n1:
            return int(view.rng.integers(0, 2))
        return 0 if n0 < n1 else 1


class PeekingAdversary:
    """Bug canary: reads the hidden bit the harness wires through.

    Only useful for validating that the game can detect a broken oracle; a
    sound harness never exposes the bit to real adversaries.
    """

    needs_true_bit = True

    def run(self, view: GameView) -> int:
        view.chal(0, 1, view.ring, b"peek probe")
        return int(view.true_bit)


class HonestProverAdversary:
    """Signs with a known witness and no sign oracle; the extraction target."""

    def run(self, view: GameView):
        message = bytes(view.rng.bytes(16))
        sig = aos_sign(
            view.witness_key, view.ring, message, view.rng, hasher=view.hasher
        )
        return (view.ring, message, sig)


class GarbageAdversary:
    def run(self, view: GameView):
        return (view.ring, b"garbage", None)


class FabricatedCommitAdversary:
    """Builds a signature shape with random commitments never queried to H."""

    def run(self, view: GameView):
        insts = canonical_instances(view.ring)
        parts = []
        for inst in insts:
            hashes = tuple(bytes(view.rng.bytes(32)) for _ in range(inst.vertices))
            u, v = inst.edges[0]
            nbytes = inst.rand_bits // 8
            opened = {
                u: (0, bytes(view.rng.bytes(nbytes))),
                v: (1, bytes(view.rng.bytes(nbytes))),
            }
            parts.append((CnoCommitment(hashes), CnoResponse(opened)))
        from .ringsig import AosSignature

        return (view.ring, b"fabricated", AosSignature(parts=tuple(parts)))


BUILTIN_ADVERSARIES = {
    "replay": ReplayAdversary,
    "stolen-key": StolenKeyAdversary,
    "rerandomize": RerandomizingAdversary,
    "budget-exceeder": BudgetExceedingAdversary,
    "duplicate-query": DuplicateQueryAdversary,
    "random-guess": RandomGuessAdversary,
    "norm-stat": NormStatAdversary,
    "peek-canary": PeekingAdversary,
    "honest-prover": HonestProverAdversary,
    "garbage": GarbageAdversary,
    "fabricated-commit": FabricatedCommitAdversary,
}
