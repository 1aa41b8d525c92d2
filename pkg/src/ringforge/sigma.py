"""Commit-and-open sigma protocol for graph 3-coloring.

The prover commits to a freshly permuted coloring, one hash commitment per
vertex; the challenge names an edge and the prover opens its two endpoints.
The verifier checks both openings against the commitments and that the two
revealed colors differ.  The honest-verifier simulator plants a uniformly
random ordered pair of distinct colors at the challenged edge, which matches
the honest marginal exactly (a uniform permutation of a proper pair is a
uniform distinct pair).

Extraction reads one color per commitment slot and succeeds only when the
openings are total and form a proper coloring, i.e. the accepted challenge
set is the full edge set; consequently the largest challenge set an attacker
can cover without enabling extraction has size |E| - 1 (``sz_triv``).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .ring import xof

__all__ = [
    "Challenge",
    "CnoCommitment",
    "CnoResponse",
    "DegenerateGraph",
    "ExtractFail",
    "SigmaInstance",
    "SigmaWitness",
    "COMMIT_TAG",
    "commit_message_bytes",
    "parse_commit_message",
    "sigma_commit",
    "sigma_extract",
    "sigma_gen",
    "sigma_respond",
    "sigma_simulate",
    "sigma_verify",
    "sz_triv",
]

COMMIT_TAG = b"RF-COM1"
COMMIT_LEN = 32


class DegenerateGraph(ValueError):
    """Instance generation produced a graph without edges."""


class ExtractFail(ValueError):
    """Openings are not a total proper coloring."""


@dataclass(frozen=True)
class SigmaInstance:
    vertices: int
    edges: tuple[tuple[int, int], ...]  # ordered pairs u < v
    rand_bits: int = 128

    def __post_init__(self):
        if self.vertices < 3:
            raise ValueError("need at least 3 vertices")
        if len(self.edges) < 1:
            raise DegenerateGraph("instance has no edges")
        if self.rand_bits % 8 != 0 or self.rand_bits < 8:
            raise ValueError("commitment randomness must be a positive byte count")
        seen = set()
        for (u, v) in self.edges:
            if not (0 <= u < v < self.vertices):
                raise ValueError(f"bad edge ({u}, {v})")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))

    def encode(self) -> bytes:
        parts = [struct.pack("<HHH", self.vertices, len(self.edges), self.rand_bits)]
        parts += [struct.pack("<HH", u, v) for (u, v) in self.edges]
        return b"".join(parts)

    @classmethod
    def decode(cls, data: bytes) -> "SigmaInstance":
        v, ne, rb = struct.unpack_from("<HHH", data, 0)
        edges = []
        off = 6
        for _ in range(ne):
            a, b = struct.unpack_from("<HH", data, off)
            edges.append((a, b))
            off += 4
        return cls(vertices=v, edges=tuple(edges), rand_bits=rb)


@dataclass(frozen=True)
class SigmaWitness:
    coloring: tuple[int, ...]  # values in {0, 1, 2}


@dataclass(frozen=True)
class CnoCommitment:
    hashes: tuple[bytes, ...]  # one 32-byte commitment per vertex


@dataclass(frozen=True)
class CnoResponse:
    opened: dict[int, tuple[int, bytes]]  # vertex -> (color, randomness)

    def __hash__(self):  # responses live inside signatures compared by encoding
        return hash(tuple(sorted((k, c, r) for k, (c, r) in self.opened.items())))


@dataclass(frozen=True)
class Challenge:
    edge_index: int


@dataclass
class ProverState:
    instance: SigmaInstance
    permuted: tuple[int, ...]
    randomness: tuple[bytes, ...]
    commitment: CnoCommitment


def is_proper(inst: SigmaInstance, coloring) -> bool:
    return len(coloring) == inst.vertices and all(
        coloring[u] != coloring[v] for (u, v) in inst.edges
    ) and all(c in (0, 1, 2) for c in coloring)


def sigma_gen(
    vertices: int, edge_density: float, rng: np.random.Generator, rand_bits: int = 128
) -> tuple[SigmaInstance, SigmaWitness]:
    """Plant a random coloring; draw edges only between unlike-colored vertices."""
    if vertices < 3:
        raise ValueError("need at least 3 vertices")
    coloring = tuple(int(c) for c in rng.integers(0, 3, size=vertices))
    edges = [
        (u, v)
        for u in range(vertices)
        for v in range(u + 1, vertices)
        if coloring[u] != coloring[v] and rng.random() < edge_density
    ]
    if not edges:
        raise DegenerateGraph("no edges generated; raise density or vertex count")
    inst = SigmaInstance(vertices=vertices, edges=tuple(edges), rand_bits=rand_bits)
    return inst, SigmaWitness(coloring=coloring)


def commit_message_bytes(index: int, color: int, randomness: bytes) -> bytes:
    """Committed message encoding: slot index, color byte, blinding randomness.

    The slot index is part of the message to prevent cross-position replay.
    """
    return struct.pack("<HB", index, color) + randomness


def parse_commit_message(data: bytes) -> tuple[int, int, bytes]:
    index, color = struct.unpack_from("<HB", data, 0)
    return index, color, data[3:]


def _commit_hash(msg: bytes, hasher=None) -> bytes:
    if hasher is not None:
        return hasher.digest(COMMIT_TAG, msg, COMMIT_LEN)
    return xof(COMMIT_TAG, msg).read(COMMIT_LEN)


def sigma_commit(
    inst: SigmaInstance,
    w: SigmaWitness,
    rng: np.random.Generator,
    hasher=None,
) -> tuple[CnoCommitment, ProverState]:
    """Commit to a fresh uniformly permuted copy of the coloring."""
    perm = [0, 1, 2]
    rng.shuffle(perm)
    permuted = tuple(perm[c] for c in w.coloring)
    nbytes = inst.rand_bits // 8
    randomness = tuple(rng.bytes(nbytes) for _ in range(inst.vertices))
    hashes = tuple(
        _commit_hash(commit_message_bytes(i, permuted[i], randomness[i]), hasher)
        for i in range(inst.vertices)
    )
    com = CnoCommitment(hashes=hashes)
    return com, ProverState(inst, permuted, randomness, com)


def sigma_respond(state: ProverState, w: SigmaWitness, ch: Challenge) -> CnoResponse:
    u, v = state.instance.edges[ch.edge_index]
    return CnoResponse(
        opened={
            u: (state.permuted[u], state.randomness[u]),
            v: (state.permuted[v], state.randomness[v]),
        }
    )


def sigma_verify(
    inst: SigmaInstance,
    com: CnoCommitment,
    ch: Challenge,
    rsp: CnoResponse,
    hasher=None,
) -> bool:
    """Openings re-hash to the commitments and the two colors differ."""
    if not (0 <= ch.edge_index < len(inst.edges)):
        return False
    if len(com.hashes) != inst.vertices:
        return False
    u, v = inst.edges[ch.edge_index]
    if set(rsp.opened) != {u, v}:
        return False
    colors = []
    for i in (u, v):
        color, rand = rsp.opened[i]
        if color not in (0, 1, 2) or len(rand) != inst.rand_bits // 8:
            return False
        if _commit_hash(commit_message_bytes(i, color, rand), hasher) != com.hashes[i]:
            return False
        colors.append(color)
    return colors[0] != colors[1]


def sigma_simulate(
    inst: SigmaInstance,
    ch: Challenge,
    rng: np.random.Generator,
    hasher=None,
) -> tuple[CnoCommitment, CnoResponse]:
    """Simulated transcript for a known challenge.

    The challenged endpoints get a uniform ordered pair of distinct colors;
    every other slot commits to an independent random color.
    """
    u, v = inst.edges[ch.edge_index]
    cu = int(rng.integers(0, 3))
    cv = int((cu + 1 + rng.integers(0, 2)) % 3)
    nbytes = inst.rand_bits // 8
    colors = [int(c) for c in rng.integers(0, 3, size=inst.vertices)]
    colors[u], colors[v] = cu, cv
    randomness = [rng.bytes(nbytes) for _ in range(inst.vertices)]
    hashes = tuple(
        _commit_hash(commit_message_bytes(i, colors[i], randomness[i]), hasher)
        for i in range(inst.vertices)
    )
    rsp = CnoResponse(opened={u: (cu, randomness[u]), v: (cv, randomness[v])})
    return CnoCommitment(hashes=hashes), rsp


def sigma_extract(inst: SigmaInstance, messages) -> SigmaWitness:
    """Recover a witness from per-slot openings (None marks a missing slot).

    Succeeds only when every slot is opened and the colors form a proper
    coloring, i.e. openings verify for the full edge set; otherwise raises
    ExtractFail.
    """
    if len(messages) != inst.vertices:
        raise ExtractFail(f"need {inst.vertices} slots, got {len(messages)}")
    coloring = []
    for i, msg in enumerate(messages):
        if msg is None:
            raise ExtractFail(f"slot {i} has no opening")
        color = msg[0] if isinstance(msg, tuple) else msg
        if color not in (0, 1, 2):
            raise ExtractFail(f"slot {i} opens a non-color {color!r}")
        coloring.append(color)
    witness = SigmaWitness(coloring=tuple(coloring))
    if not is_proper(inst, witness.coloring):
        raise ExtractFail("opened colors are not a proper coloring")
    return witness


def sz_triv(inst: SigmaInstance) -> int:
    """Largest challenge-set size not enabling extraction: |E| - 1 here."""
    return len(inst.edges) - 1
