"""Classical and GL(3) Kloosterman sums, their factorization identities, and bound audits.

Sums are enumerated exactly as integer phase histograms (see ``_fallback``)
and only then turned into a complex number, so no rounding accumulates
over the enumeration.

Convention for the modified sum P^(N)(m1, m2, n1, n2; D1, D2): tuples
(B1, C1) mod D1 and (B2, C2) mod D2 with gcd(Bi, Ci, Di) = 1, N | B1 and
B1*B2 + D1*C2 + D2*C1 = 0 mod D1*D2, weighted by

    e((m2*B1 + n1*(Y1*D2 - Z1*B2)) / D1 + (m1*B2 + n2*(Y2*D1 - Z2*B1)) / D2)

where Yi*Bi + Zi*Ci = 1 mod Di.  This is the reading under which the
d-and-gamma factorization into classical sums holds exactly; the literal
typeset variant (Yi*Di + Zi*Ci, Z1 in both numerators, m1 paired with B1)
is available through ``SumConvention.literal()``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import _backend
from .arith import divisors, inv_mod

__all__ = [
    "DivisibilityViolation",
    "LevelViolation",
    "HypothesisViolation",
    "GL3SumSpec",
    "SumConvention",
    "BoundReport",
    "hist_value",
    "kloosterman_classical",
    "gl3_tilde_sum",
    "gl3_modified_sum",
    "modified_sums_batch",
    "factorization_lemma_rhs",
    "prime_twist_identity_check",
    "prime_twist_product_form",
    "weil_bound",
    "weil_margin",
]


class DivisibilityViolation(ValueError):
    pass


class LevelViolation(ValueError):
    pass


class HypothesisViolation(ValueError):
    pass


@dataclass(frozen=True)
class GL3SumSpec:
    m1: int
    m2: int
    n1: int
    n2: int
    D1: int
    D2: int
    N: int = 1

    def __post_init__(self):
        if self.D1 < 1 or self.D2 < 1 or self.N < 1:
            raise ValueError("moduli and level must be positive")

    @property
    def freqs(self) -> tuple[int, int, int, int]:
        return (self.m1, self.m2, self.n1, self.n2)


@dataclass(frozen=True)
class SumConvention:
    """Which reading of the modified sum to enumerate.

    yz_bc: solve Y*B + Z*C = 1 (True) or Y*D + Z*C = 1 (False).
    second_z2: use Z2 in the second numerator (True) or Z1 (False).
    swap_m: pair m2 with B1 and m1 with B2 (True) or m1 with B1 (False).
    """

    yz_bc: bool = True
    second_z2: bool = True
    swap_m: bool = True

    @classmethod
    def literal(cls) -> "SumConvention":
        return cls(yz_bc=False, second_z2=False, swap_m=False)


DEFAULT_CONVENTION = SumConvention()


@dataclass(frozen=True)
class BoundReport:
    sum_modulus: float
    bound_value: float
    margin: float


@lru_cache(maxsize=256)
def _units(M: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(M) / M)


def hist_value(h: np.ndarray, M: int) -> np.ndarray:
    """Complex values from phase histograms over e(k/M) (last axis)."""
    u = _units(M)
    h = np.asarray(h, dtype=np.float64)
    return h @ u.real + 1j * (h @ u.imag)


@lru_cache(maxsize=1 << 16)
def _kl(a: int, b: int, c: int) -> complex:
    if c == 1:
        return 1.0 + 0j
    v = complex(hist_value(_backend.kloosterman_hist([a], [b], c), c)[0])
    # S(a, b; c) is real for integer a, b
    return complex(v.real, 0.0)


def kloosterman_classical(a: int, b: int, c: int) -> complex:
    """S(a, b; c) = sum over units x mod c of e((a*x + b*inv(x)) / c)."""
    if c < 1:
        raise ValueError("c must be positive")
    return _kl(a % c, b % c, c)


def gl3_tilde_sum(m1: int, n1: int, n2: int, D1: int, D2: int) -> complex:
    """The tilde sum over C1 mod D1 (units) and C2 mod D2 with gcd(C2, D2/D1) = 1."""
    if D1 < 1 or D2 < 1:
        raise ValueError("moduli must be positive")
    if D2 % D1:
        raise DivisibilityViolation(f"{D1} does not divide {D2}")
    h = _backend.tilde_hist(D1, D2, [[m1, n1, n2]])
    return complex(hist_value(h, D2)[0])


def _check_level(D1: int, D2: int, N: int) -> None:
    if D1 % N or D2 % N:
        raise LevelViolation(f"level {N} must divide both moduli ({D1}, {D2})")


def modified_sums_batch(
    D1: int,
    D2: int,
    N: int,
    freqs,
    convention: SumConvention = DEFAULT_CONVENTION,
    yz_shift: int = 0,
) -> np.ndarray:
    """Modified sums for many (m1, m2, n1, n2) rows sharing the moduli."""
    _check_level(D1, D2, N)
    f = np.asarray(freqs, dtype=np.int64).reshape(-1, 4)
    if not convention.swap_m:
        f = f[:, [1, 0, 2, 3]]
    h = _backend.gl3_hist(D1, D2, N, f, convention.yz_bc, convention.second_z2, yz_shift)
    return hist_value(h, D1 * D2)


def gl3_modified_sum(
    spec: GL3SumSpec, convention: SumConvention = DEFAULT_CONVENTION, yz_shift: int = 0
) -> complex:
    return complex(modified_sums_batch(spec.D1, spec.D2, spec.N, [spec.freqs], convention, yz_shift)[0])


def factorization_lemma_rhs(spec: GL3SumSpec) -> complex:
    """Sum over d | (D1, D2) and units gamma mod d of d * S(...; D1/d) * S(...; D2/d)."""
    if spec.N != 1:
        raise LevelViolation("the factorization applies to the level-1 sum")
    m1, m2, n1, n2, D1, D2 = spec.m1, spec.m2, spec.n1, spec.n2, spec.D1, spec.D2
    total = 0.0 + 0j
    for d in divisors(math.gcd(D1, D2)):
        dd = d * d
        for g in range(d):
            if math.gcd(g, d) != 1:
                continue
            a = n1 * D2 + m1 * D1 * g
            if a % dd:
                continue
            gb = inv_mod(g, d).value
            b = n1 * D2 * gb + m1 * D1
            # b = a*gb - m1*D1*k*d for g*gb = 1 + k*d, hence d^2 | b too
            total += d * kloosterman_classical(m2, a // dd, D1 // d) * kloosterman_classical(
                n2, b // dd, D2 // d
            )
    return total


def _twist_hypotheses(freqs, q: int, D1: int, D2: int) -> None:
    if math.gcd(D1 * D2, q) != 1:
        raise HypothesisViolation(f"moduli ({D1}, {D2}) must be coprime to q={q}")
    if math.gcd(math.prod(freqs), q) != 1:
        # (m2*n2, q) = 1 alone is not enough: (1,1,3,1) at q=3, D=(1,1) fails
        raise HypothesisViolation(f"all frequencies must be coprime to q={q}")


def prime_twist_identity_check(
    m1: int, m2: int, n1: int, n2: int, q: int, D1: int, D2: int
) -> tuple[complex, complex]:
    """Level-q sum at (q*D1, q*D2) against q * P(inv(q)*m1, inv(q)*m2, n1, n2; D1, D2).

    The right side is evaluated through the classical-sum factorization,
    independently of the enumeration on the left.
    """
    _twist_hypotheses((m1, m2, n1, n2), q, D1, D2)
    lhs = gl3_modified_sum(GL3SumSpec(m1, m2, n1, n2, q * D1, q * D2, N=q))
    qb = inv_mod(q, D1 * D2).value
    rhs = q * factorization_lemma_rhs(GL3SumSpec(qb * m1, qb * m2, n1, n2, D1, D2))
    return lhs, rhs


def prime_twist_product_form(m1: int, m2: int, n1: int, n2: int, q: int, D1: int, D2: int) -> complex:
    """q * S(n1, inv(q)*m2*D2; D1) * S(m1, inv(q)*n2*D1; D2), valid when gcd(D1, D2) = 1."""
    _twist_hypotheses((m1, m2, n1, n2), q, D1, D2)
    if math.gcd(D1, D2) != 1:
        raise HypothesisViolation("the two-factor form needs coprime moduli")
    return (
        q
        * kloosterman_classical(n1, inv_mod(q, D1).value * m2 * D2, D1)
        * kloosterman_classical(m1, inv_mod(q, D2).value * n2 * D1, D2)
    )


def weil_bound(spec: GL3SumSpec) -> float:
    """(D1*D2)^(1/2) * ((D1,D2) * (m1*n1, L) * (m2*n2, L))^(1/2), L = lcm(D1, D2), at eps = 0."""
    L = math.lcm(spec.D1, spec.D2)
    g = math.gcd(spec.D1, spec.D2) * math.gcd(spec.m1 * spec.n1, L) * math.gcd(spec.m2 * spec.n2, L)
    return math.sqrt(spec.D1 * spec.D2 * g)


def weil_margin(spec: GL3SumSpec, value: complex | None = None) -> BoundReport:
    if value is None:
        value = gl3_modified_sum(spec)
    s = abs(value)
    b = weil_bound(spec)
    # exact zeros come out at rounding level
    margin = math.inf if s < 1e-9 else b / s
    return BoundReport(sum_modulus=s, bound_value=b, margin=margin)


def with_level(spec: GL3SumSpec, N: int) -> GL3SumSpec:
    return replace(spec, N=N)
