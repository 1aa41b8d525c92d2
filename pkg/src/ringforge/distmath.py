"""Distances and divergences over labelled finite distributions.

Statistical distance, Renyi divergence of any order in (1, inf], and
Kullback-Leibler divergence, plus the relative-frequency constructor used by
the Monte Carlo experiments.  Probabilities may be floats or exact
``fractions.Fraction`` values; the exact mode exists so product-distribution
identities can be tested without floating-point drift.

Order infinity is passed as the module-level tag ``INF_ORDER`` rather than a
float sentinel, so arithmetic on the order never produces NaN.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from itertools import product
from typing import Callable, Hashable, Iterable, Mapping, Sequence

__all__ = [
    "DiscreteDist",
    "EmptyInput",
    "INF_ORDER",
    "SupportViolation",
    "empirical_dist",
    "iid_power",
    "kl_divergence",
    "map_labels",
    "renyi_divergence",
    "stat_distance",
]

_SUM_TOL = 1e-12


class SupportViolation(ValueError):
    """supp(P) is not contained in supp(Q) where containment is required."""


class EmptyInput(ValueError):
    """An empirical distribution was requested from zero samples."""


class _InfOrder:
    """Tag selecting the order-infinity (sup-ratio) Renyi divergence."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return "INF_ORDER"


INF_ORDER = _InfOrder()


class DiscreteDist:
    """A probability distribution over a finite set of hashable labels.

    Immutable after construction.  Labels absent from ``outcomes`` carry
    probability zero.
    """

    __slots__ = ("outcomes",)

    def __init__(self, outcomes: Mapping[Hashable, float | Fraction]):
        probs = dict(outcomes)
        for label, p in probs.items():
            if p < 0:
                raise ValueError(f"negative probability {p!r} for label {label!r}")
        total = sum(probs.values())
        if abs(float(total) - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {float(total)!r}, expected 1")
        object.__setattr__(self, "outcomes", probs)

    def __setattr__(self, name, value):  # noqa: D105
        raise AttributeError("DiscreteDist is immutable")

    def prob(self, label: Hashable) -> float | Fraction:
        return self.outcomes.get(label, 0)

    def support(self) -> list:
        return [x for x, p in self.outcomes.items() if p > 0]

    def labels(self) -> list:
        return list(self.outcomes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiscreteDist):
            return NotImplemented
        keys = set(self.outcomes) | set(other.outcomes)
        return all(self.prob(k) == other.prob(k) for k in keys)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"DiscreteDist({self.outcomes!r})"


def stat_distance(p: DiscreteDist, q: DiscreteDist) -> float:
    """Half-L1 distance over the union of both supports."""
    labels = set(p.outcomes) | set(q.outcomes)
    total = sum(abs(p.prob(x) - q.prob(x)) for x in labels)
    return float(total) / 2.0


def _require_support(p: DiscreteDist, q: DiscreteDist) -> None:
    for x in p.outcomes:
        if p.prob(x) > 0 and q.prob(x) == 0:
            raise SupportViolation(f"label {x!r} has P > 0 but Q = 0")


def renyi_divergence(alpha, p: DiscreteDist, q: DiscreteDist):
    """Renyi divergence of order ``alpha`` in (1, inf]; inf is ``INF_ORDER``.

    Returns an exact Fraction when ``alpha == 2`` and all inputs are exact,
    since the outer exponent 1/(alpha-1) is then 1.
    """
    _require_support(p, q)
    if isinstance(alpha, _InfOrder):
        return max(
            (p.prob(x) / q.prob(x) for x in p.outcomes if p.prob(x) > 0),
            default=1,
        )
    if not alpha > 1:
        raise ValueError(f"order must satisfy alpha > 1, got {alpha!r}")
    exact = all(isinstance(v, (Fraction, int)) for v in p.outcomes.values()) and all(
        isinstance(v, (Fraction, int)) for v in q.outcomes.values()
    )
    if exact and alpha == int(alpha):
        a = int(alpha)
        total = sum(
            Fraction(p.prob(x)) ** a / Fraction(q.prob(x)) ** (a - 1)
            for x in p.outcomes
            if p.prob(x) > 0
        )
        if a == 2:
            return total
        return float(total) ** (1.0 / (a - 1))
    total = sum(
        float(p.prob(x)) ** alpha * float(q.prob(x)) ** (1.0 - alpha)
        for x in p.outcomes
        if p.prob(x) > 0
    )
    return total ** (1.0 / (alpha - 1.0))


def kl_divergence(p: DiscreteDist, q: DiscreteDist) -> float:
    """Natural-log Kullback-Leibler divergence; requires supp(P) <= supp(Q)."""
    _require_support(p, q)
    total = 0.0
    for x in p.outcomes:
        px = float(p.prob(x))
        if px > 0:
            total += px * math.log(px / float(q.prob(x)))
    return total


def empirical_dist(samples: Sequence[Hashable] | Iterable[Hashable]) -> DiscreteDist:
    """Relative-frequency distribution of a non-empty sample sequence."""
    counts = Counter(samples)
    n = sum(counts.values())
    if n == 0:
        raise EmptyInput("no samples")
    return DiscreteDist({x: Fraction(c, n) for x, c in counts.items()})


def iid_power(dist: DiscreteDist, times: int) -> DiscreteDist:
    """Explicit product distribution of ``times`` independent copies.

    Labels of the result are tuples.  Exact when the input is exact.
    """
    if times < 1:
        raise ValueError("times must be >= 1")
    items = list(dist.outcomes.items())
    out = {}
    for combo in product(items, repeat=times):
        label = tuple(x for x, _ in combo)
        prob = math.prod(p for _, p in combo) if not _any_fraction(combo) else None
        if prob is None:
            prob = Fraction(1)
            for _, p in combo:
                prob *= Fraction(p)
        out[label] = prob
    return DiscreteDist(out)


def _any_fraction(combo) -> bool:
    return any(isinstance(p, Fraction) for _, p in combo)


def map_labels(dist: DiscreteDist, fn: Callable[[Hashable], Hashable]) -> DiscreteDist:
    """Pushforward of the distribution under a deterministic label map."""
    out: dict = {}
    for x, p in dist.outcomes.items():
        y = fn(x)
        out[y] = out.get(y, 0) + p
    return DiscreteDist(out)


def dist_to_json(dist: DiscreteDist) -> dict:
    """JSON object {label: probability} with stringified labels."""
    return {str(x): float(p) for x, p in dist.outcomes.items()}


def dist_from_json(obj: Mapping[str, float]) -> DiscreteDist:
    return DiscreteDist(dict(obj))
