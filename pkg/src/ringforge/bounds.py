"""Concrete-security bound calculator.

Every quantitative bound of the analyzed constructions as a pure formula
over named parameters, reproduced exactly as displayed (including the +1
query accounting), with sub-terms reported alongside totals so the
dominating term is visible.  Raw values are never clamped; display clamping
is a CLI concern.

Renyi orders live in (1, inf]; infinity is the ``INF_ORDER`` tag from
``distmath`` and the exponent (alpha - 1)/alpha is treated symbolically as 1
in that case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .distmath import INF_ORDER

__all__ = [
    "BoundParams",
    "BoundReport",
    "MissingParam",
    "adaptive_repro_delta",
    "adaptive_repro_switch_renyi",
    "adaptive_repro_switch_stat",
    "alpha_exponent",
    "anon_bounds",
    "aos_sufcra_bounds",
    "aos_ufnra_extract_bound",
    "aos_ufnra_imp_bound",
    "aos_ufnra_merkle_bound",
    "correctness_loss",
    "ell_small_range",
    "mandr_factor",
    "ntru_dom_renyi",
    "ntru_pre_kl",
    "ntru_pre_renyi",
    "ntru_sufcra_bound",
    "osw_statistical_bound",
    "qrom_collision_bound",
    "rpsf_anon_bounds",
    "rpsf_sufcra_bounds",
    "rpsf_ufcra1_bounds",
    "small_range_bound",
]


class MissingParam(ValueError):
    """A formula needs a parameter that was not supplied."""


def alpha_exponent(alpha) -> float:
    """(alpha - 1) / alpha, symbolically 1 at order infinity."""
    if alpha is INF_ORDER or isinstance(alpha, type(INF_ORDER)):
        return 1.0
    if not alpha > 1:
        raise ValueError(f"order must exceed 1, got {alpha!r}")
    return (alpha - 1.0) / alpha


def _exp_or_zero(log_value: float) -> float:
    """exp() that underflows gracefully to 0.0 for very negative exponents."""
    if log_value < -745.0:
        return 0.0
    return math.exp(log_value)


@dataclass
class BoundParams:
    """Named inputs shared across the bound formulas; unused fields stay None."""

    q_s: float | None = None  # signing-query budget
    q_h: float | None = None  # hash-query budget
    q_c: float | None = None  # challenge-query budget
    n_ring: int | None = None  # ring size N
    kappa: int | None = None  # maximal ring size
    k_salt: float | None = None  # salt bits
    y_size: float | None = None  # |Y|, commitment/digest space size
    c_size: float | None = None  # |C|, challenge space size
    ell: float | None = None  # commitments per transcript
    omega: float | None = None  # max challenge weight
    gamma_cl: float | None = None  # max digest->challenge fiber size
    sz_triv: float | None = None  # largest non-extracting challenge-set size
    c_range: float | None = None  # minimal range size of the trapdoor map
    alpha1: object = None
    alpha2: object = None
    eps_dom: float | None = None  # domain-sampling statistical distance
    delta_dom_alpha: float | None = None  # domain-sampling Renyi divergence
    eps_pre: float | None = None  # preimage-sampling statistical distance
    delta_pre_alpha: float | None = None  # preimage-sampling Renyi divergence
    eps_kl_pre: float | None = None  # preimage-sampling KL divergence
    eps_hvzk: float | None = None
    delta_hvzk_alpha: float | None = None
    eps_kl_hvzk: float | None = None
    eps_ufnra: float | None = None
    adv_col: float | None = None
    adv_ow: float | None = None
    adv_cur: float | None = None
    adv_wrec: float | None = None
    adv_imp: float | None = None
    adv_sis: float | None = None
    adv_isis: float | None = None
    beta_entropy: float | None = None  # commitment / preimage min-entropy bits
    delta_kappa: float | None = None  # correctness loss
    degree: int | None = None  # M
    modulus: int | None = None  # q
    s: float | None = None
    tau: float | None = None
    eps_smooth: float | None = None  # smoothing epsilon feeding divergences

    def need(self, *names):
        vals = []
        for name in names:
            v = getattr(self, name)
            if v is None:
                raise MissingParam(f"parameter {name!r} is required here")
            vals.append(v)
        return vals[0] if len(vals) == 1 else vals

    @classmethod
    def from_json(cls, obj: dict) -> "BoundParams":
        known = {f.name for f in fields(cls)}
        kwargs = {}
        for key, val in obj.items():
            if key not in known:
                raise ValueError(f"unknown bound parameter {key!r}")
            if key in ("alpha1", "alpha2") and val == "inf":
                val = INF_ORDER
            kwargs[key] = val
        return cls(**kwargs)


@dataclass
class BoundReport:
    """Named totals plus the sub-terms composing them; pure data."""

    name: str
    bounds: dict = field(default_factory=dict)
    subterms: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "bounds": self.bounds, "subterms": self.subterms}


# ---------------------------------------------------------------------------
# oracle distribution switching, small-range, reprogramming, collisions
# ---------------------------------------------------------------------------


def osw_statistical_bound(q: float, eps: float) -> float:
    """Distinguishing bound 8 q sqrt(2 eps) for switching an i.i.d. oracle."""
    if q < 0 or eps < 0:
        raise ValueError("q and eps must be non-negative")
    return 8.0 * q * math.sqrt(2.0 * eps)


def ell_small_range(q: float) -> float:
    """pi^2 (2q)^3 / 6, the small-range simulation loss (< 14 q^3)."""
    return math.pi**2 * (2.0 * q) ** 3 / 6.0


def small_range_bound(q: float, r: float, alpha, delta: float, p_win_q: float) -> float:
    """(delta^r (p + l(q)/r))^((a-1)/a) + l(q)/r."""
    if r <= 0:
        raise ValueError("range size r must be positive")
    ell = ell_small_range(q)
    e = alpha_exponent(alpha)
    return (delta**r * (p_win_q + ell / r)) ** e + ell / r


def adaptive_repro_delta(big_r: float, q: float, p_max: float) -> float:
    """Reprogramming detection bound (3R/2) sqrt(q * p_max)."""
    if big_r < 0 or q < 0 or p_max < 0:
        raise ValueError("inputs must be non-negative")
    return 1.5 * big_r * math.sqrt(q * p_max)


def adaptive_repro_switch_stat(big_r: float, q: float, p_max: float, delta_qu: float) -> float:
    """Statistical form: R * Delta(Q, U(Y)) + delta_repr."""
    return big_r * delta_qu + adaptive_repro_delta(big_r, q, p_max)


def adaptive_repro_switch_renyi(
    big_r: float, q: float, p_max: float, renyi_uq: float, alpha, p_repro1q: float
) -> float:
    """Divergence form: (R_a(U||Q)^R * p)^((a-1)/a) + delta_repr."""
    e = alpha_exponent(alpha)
    return (renyi_uq**big_r * p_repro1q) ** e + adaptive_repro_delta(big_r, q, p_max)


def mandr_factor(q: float, n: int) -> float:
    """Multiplicative loss (2q + 1)^(2n) of ordering n quantum queries."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (2.0 * q + 1.0) ** (2 * n)


def qrom_collision_bound(q: float, gamma: float, y_size: float) -> float:
    """Pr[database collision] <= 10 q^2 (q - 1) gamma_cl / |Y|."""
    if q < 1:
        return 0.0
    return 10.0 * q * q * (q - 1.0) * gamma / y_size


def correctness_loss(kappa: int, degree: int, tau: float) -> float:
    """delta(kappa) = tau^((kappa+1)M) e^(((kappa+1)M/2)(1 - tau^2)), log-safe."""
    n = (kappa + 1) * degree
    return _exp_or_zero(n * math.log(tau) + (n / 2.0) * (1.0 - tau * tau))


# ---------------------------------------------------------------------------
# divergence constants of the NTRU instantiation (inputs, not measurements)
# ---------------------------------------------------------------------------


def ntru_dom_renyi(alpha, eps: float) -> float:
    """Domain-uniformity divergence 1 + 2 a eps^2 / (1 - eps)^2; inf -> limit a."""
    if alpha is INF_ORDER:
        raise ValueError("domain divergence constant needs a finite order")
    return 1.0 + 2.0 * alpha * eps * eps / (1.0 - eps) ** 2


def ntru_pre_renyi(alpha, eps: float) -> float:
    """Preimage-sampler divergence 1 + 2 a eps^2 (finite order)."""
    if alpha is INF_ORDER:
        raise ValueError("preimage divergence constant needs a finite order")
    return 1.0 + 2.0 * alpha * eps * eps


def ntru_pre_kl(eps: float) -> float:
    """Preimage-sampler KL divergence 2 eps^2."""
    return 2.0 * eps * eps


# ---------------------------------------------------------------------------
# trapdoor-route ring signature (salted, SUF-CRA)
# ---------------------------------------------------------------------------


def rpsf_sufcra_bounds(p: BoundParams) -> BoundReport:
    """All four displayed SUF-CRA bounds for the salted trapdoor construction.

    eps' = (3 q_s / 2) sqrt((q_s + q_H + 1) / 2^k) + q_s delta(kappa)
    eps  = Adv_col + 20 (q_s + q_H + 1)^3 / C + (q_s + q_H + 1)^2 Adv_ow

    The third display's bare order is read as alpha2, and the report labels
    it that way.
    """
    q_s, q_h = p.need("q_s", "q_h")
    k, dk = p.need("k_salt", "delta_kappa")
    adv_col, adv_ow, c_range = p.need("adv_col", "adv_ow", "c_range")
    eps_dom, eps_pre = p.need("eps_dom", "eps_pre")
    d_dom, d_pre = p.need("delta_dom_alpha", "delta_pre_alpha")
    a1, a2 = p.need("alpha1", "alpha2")
    e1, e2 = alpha_exponent(a1), alpha_exponent(a2)

    queries = q_s + q_h + 1.0
    eps_prime = 1.5 * q_s * math.sqrt(queries * 0.5**k) + q_s * dk
    collision_term = adv_col
    qrom_term = 20.0 * queries**3 / c_range
    ow_term = queries**2 * adv_ow
    eps = collision_term + qrom_term + ow_term

    full_renyi = (d_dom**q_s * (d_pre**q_s * eps) ** e2) ** e1 + eps_prime
    mixed_pre_renyi = q_s * (d_pre**q_s * eps) ** e2 + q_s * eps_dom + eps_prime
    mixed_dom_renyi = (d_dom**q_s * (eps + q_s * eps_pre) ** e2) ** e1 + eps_prime
    full_statistical = q_s * (eps_dom + eps_pre) + eps + eps_prime
    return BoundReport(
        name="rpsf-sufcra",
        bounds={
            "full_renyi": full_renyi,
            "mixed_pre_renyi": mixed_pre_renyi,
            "mixed_dom_renyi_alpha2": mixed_dom_renyi,
            "full_statistical": full_statistical,
        },
        subterms={
            "eps": eps,
            "eps_prime": eps_prime,
            "qrom_collision_term": qrom_term,
            "one_wayness_term": ow_term,
            "collision_advantage": collision_term,
        },
    )


def rpsf_ufcra1_bounds(p: BoundParams) -> BoundReport:
    """Both saltless UF-CRA1 bounds; eps = 8 (q_s + q_H) sqrt(2 eps_dom)."""
    q_s, q_h = p.need("q_s", "q_h")
    eps_dom, eps_pre = p.need("eps_dom", "eps_pre")
    d_pre, alpha = p.need("delta_pre_alpha", "alpha2")
    beta, adv_col = p.need("beta_entropy", "adv_col")
    eps = osw_statistical_bound(q_s + q_h, eps_dom)
    extractor_fail = 2.0**-beta
    statistical = eps + q_s * eps_pre + extractor_fail + adv_col
    renyi = eps + (d_pre**q_s * (extractor_fail + adv_col)) ** alpha_exponent(alpha)
    return BoundReport(
        name="rpsf-ufcra1",
        bounds={"statistical": statistical, "renyi": renyi},
        subterms={"eps_oracle_switch": eps, "extractor_fail": extractor_fail},
    )


def rpsf_anon_bounds(q_c: float, eps_pre: float, eps_kl_pre: float) -> tuple[float, float]:
    """Anonymity bounds: (q_c * eps_pre, sqrt(q_c * eps_kl_pre / 2))."""
    return q_c * eps_pre, math.sqrt(q_c * eps_kl_pre / 2.0)


def anon_bounds(p: BoundParams) -> BoundReport:
    q_c, eps_pre, eps_kl = p.need("q_c", "eps_pre", "eps_kl_pre")
    tv, kl = rpsf_anon_bounds(q_c, eps_pre, eps_kl)
    return BoundReport(name="rpsf-anon", bounds={"statistical": tv, "kl": kl}, subterms={})


# ---------------------------------------------------------------------------
# AOS route
# ---------------------------------------------------------------------------


def aos_sufcra_bounds(p: BoundParams) -> BoundReport:
    """SUF-CRA -> UF-NRA and anonymity bounds for the circular construction.

    eps_repr   = (3 q_s / 2) sqrt((q_H + kappa q_s + N) 2^-beta)
    eps_repr'  = N (Adv_cur + Adv_wrec) + 20 (q_H + N q_s + N)^3 / |C|
    eps_repr'' = (3 q_c / 2) sqrt((q_H + kappa q_c) 2^-beta)
    """
    q_s, q_c, q_h = p.need("q_s", "q_c", "q_h")
    n, kappa, beta = p.need("n_ring", "kappa", "beta_entropy")
    adv_cur, adv_wrec, c_size = p.need("adv_cur", "adv_wrec", "c_size")
    eps_hvzk, d_hvzk, alpha = p.need("eps_hvzk", "delta_hvzk_alpha", "alpha2")
    eps_kl, eps_ufnra = p.need("eps_kl_hvzk", "eps_ufnra")

    eps_repr = 1.5 * q_s * math.sqrt((q_h + kappa * q_s + n) * 2.0**-beta)
    eps_repr_p = n * (adv_cur + adv_wrec) + 20.0 * (q_h + n * q_s + n) ** 3 / c_size
    eps_repr_pp = 1.5 * q_c * math.sqrt((q_h + kappa * q_c) * 2.0**-beta)

    unf_tv = eps_ufnra + q_s * eps_hvzk + eps_repr + eps_repr_p
    unf_renyi = (d_hvzk**q_s * eps_ufnra) ** alpha_exponent(alpha) + eps_repr + eps_repr_p
    den_tv = q_c * eps_hvzk + eps_repr_pp
    den_kl = math.sqrt(q_c * eps_kl / 2.0) + eps_repr_pp
    return BoundReport(
        name="aos-sufcra",
        bounds={
            "unf_statistical": unf_tv,
            "unf_renyi": unf_renyi,
            "anon_statistical": den_tv,
            "anon_kl": den_kl,
        },
        subterms={
            "eps_repr": eps_repr,
            "eps_repr_prime": eps_repr_p,
            "eps_repr_doubleprime": eps_repr_pp,
        },
    )


def aos_ufnra_imp_bound(q_h: float, n: int, adv_imp: float) -> float:
    """UF-NRA via query reordering: (1/2) (2(q_H + N) + 1)^(2N) Adv_imp."""
    return 0.5 * mandr_factor(q_h + n, n) * adv_imp


def _extract_core(q_h, n, adv_wrec, consistency, y_size, gamma, sz, alt_branch):
    inner = math.sqrt((q_h - 1.0) * gamma) + math.sqrt(max(alt_branch, gamma * sz**n))
    exact = n * adv_wrec + consistency + q_h**2 * 10.0 / y_size * inner**2
    return exact, inner


def aos_ufnra_extract_bound(p: BoundParams) -> BoundReport:
    """UF-NRA bound via straightline extraction for commit-and-open protocols.

    Exact form plus the expanded (weaker but simpler) upper form.
    """
    q_h, n, adv_wrec = p.need("q_h", "n_ring", "adv_wrec")
    omega, y_size = p.need("omega", "y_size")
    gamma, sz, ell = p.need("gamma_cl", "sz_triv", "ell")
    consistency = 2.0 * n * (omega + 1.0) / y_size
    exact, inner = _extract_core(
        q_h, n, adv_wrec, consistency, y_size, gamma, sz, (q_h - 1.0) * ell
    )
    expanded = (
        n * adv_wrec
        + consistency
        + q_h**2 * (q_h - 1.0) * ell * 10.0 * gamma / y_size * (1.0 + 2.0 * sz ** (n / 2.0) + sz**n)
    )
    return BoundReport(
        name="aos-ufnra-extract",
        bounds={"exact": exact, "expanded": expanded},
        subterms={"consistency_term": consistency, "transition_inner": inner},
    )


def aos_ufnra_merkle_bound(p: BoundParams) -> BoundReport:
    """Merkle-tree commit-and-open variant: 2(q_H - 1) branch, log-height checks."""
    q_h, n, adv_wrec = p.need("q_h", "n_ring", "adv_wrec")
    omega, y_size = p.need("omega", "y_size")
    gamma, sz, ell = p.need("gamma_cl", "sz_triv", "ell")
    consistency = 2.0 * n * (omega * math.log2(ell) + 1.0) / y_size
    exact, inner = _extract_core(
        q_h, n, adv_wrec, consistency, y_size, gamma, sz, 2.0 * (q_h - 1.0)
    )
    expanded = (
        n * adv_wrec
        + consistency
        + q_h**2 * (q_h - 1.0) * 20.0 * gamma / y_size * (1.0 + 2.0 * sz ** (n / 2.0) + sz**n)
    )
    return BoundReport(
        name="aos-ufnra-merkle",
        bounds={"exact": exact, "expanded": expanded},
        subterms={"consistency_term": consistency, "transition_inner": inner},
    )


# ---------------------------------------------------------------------------
# NTRU instantiation, fully composed
# ---------------------------------------------------------------------------


def ntru_sufcra_bound(p: BoundParams) -> BoundReport:
    """Composed SUF-CRA bound for the NTRU trapdoor instantiation.

    eps' = Adv_sis(2 beta) + 20 (q_s + q_H + 1)^3 / q^M
         + (q_s + q_H + 1)^2 Adv_isis(beta) + q_s delta(kappa)

    and the total wraps eps' in the two divergence layers plus the salt
    reprogramming term (3 q_s / 2) sqrt((q_s + q_H + 1) / 2^k).
    """
    q_s, q_h, k = p.need("q_s", "q_h", "k_salt")
    m, q = p.need("degree", "modulus")
    kappa, tau = p.need("kappa", "tau")
    adv_sis, adv_isis = p.need("adv_sis", "adv_isis")
    a1, a2 = p.need("alpha1", "alpha2")
    d_dom = p.delta_dom_alpha
    d_pre = p.delta_pre_alpha
    if d_dom is None or d_pre is None:
        eps_s = p.need("eps_smooth")
        d_dom = ntru_dom_renyi(a1, eps_s) if d_dom is None else d_dom
        d_pre = ntru_pre_renyi(a2, eps_s) if d_pre is None else d_pre

    queries = q_s + q_h + 1.0
    delta_kappa = correctness_loss(kappa, m, tau)
    log_qrom = math.log(20.0) + 3.0 * math.log(queries) - m * math.log(q)
    qrom_term = _exp_or_zero(log_qrom) if log_qrom < 700 else math.inf
    eps_prime = adv_sis + qrom_term + queries**2 * adv_isis + q_s * delta_kappa
    repro_term = 1.5 * q_s * math.sqrt(queries / 2.0**k)
    e1, e2 = alpha_exponent(a1), alpha_exponent(a2)
    total = (d_dom**q_s * (d_pre**q_s * eps_prime) ** e2) ** e1 + repro_term
    return BoundReport(
        name="ntru-sufcra",
        bounds={"total": total},
        subterms={
            "delta_kappa": delta_kappa,
            "eps_prime": eps_prime,
            "qrom_collision_term": qrom_term,
            "isis_term": queries**2 * adv_isis,
            "sis_term": adv_sis,
            "repro_term": repro_term,
            "delta_dom_alpha": d_dom,
            "delta_pre_alpha": d_pre,
        },
    )
