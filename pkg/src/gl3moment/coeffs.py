"""Hecke eigenvalues of level-one forms, their symmetric-square lifts and Rankin-Selberg coefficients.

Eigenvalues are arithmetically normalized: lambda(n) = a(n) / n^{(k-1)/2},
so lambda(1) = 1 and |lambda(p)| <= 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _backend
from .analytic import LanglandsParams
from .arith import divisors, factorize, mobius

__all__ = [
    "InsufficientTable",
    "GL2Form",
    "GL3Coeffs",
    "delta_eigenvalues",
    "weight16_eigenvalues",
    "sym_square_gl3",
    "sym_square_multiplicative",
    "hecke_relation_audit",
    "gl3_multiplicativity_audit",
    "divisor_count",
    "rankin_selberg_coeffs",
    "rankin_selberg_coeffs_satake",
    "smallest_prime_factor",
]


class InsufficientTable(ValueError):
    pass


@dataclass(frozen=True)
class GL2Form:
    weight: int
    lam: np.ndarray  # lam[n] for 0 <= n <= n_max; lam[0] unused
    coeffs: tuple[int, ...] | None = None  # exact a(n), when known
    name: str = ""

    @property
    def n_max(self) -> int:
        return len(self.lam) - 1

    def __call__(self, n: int) -> float:
        if not 1 <= n <= self.n_max:
            raise InsufficientTable(f"lambda({n}) outside table of length {self.n_max}")
        return float(self.lam[n])

    def with_lam(self, lam: np.ndarray) -> "GL2Form":
        return GL2Form(self.weight, np.asarray(lam, dtype=float), None, self.name + "*")


@dataclass
class GL3Coeffs:
    """Coefficients A(m, n) of a level-one GL(3) form from the rows A(n, 1) and A(1, n)."""

    row: np.ndarray  # A(n, 1), index 0 unused
    col: np.ndarray  # A(1, n)
    langlands: LanglandsParams = field(default_factory=LanglandsParams)
    name: str = ""

    @property
    def n_max(self) -> int:
        return len(self.row) - 1

    def A(self, m: int, n: int) -> float:
        if m > self.n_max or n > self.n_max:
            raise InsufficientTable(f"A({m}, {n}) outside table of length {self.n_max}")
        g = math.gcd(m, n)
        if g == 1:
            return float(self.row[m] * self.col[n])
        return float(
            sum(mobius(d) * self.row[m // d] * self.col[n // d] for d in divisors(g) if mobius(d))
        )

    def table(self, m_max: int, n_max: int) -> np.ndarray:
        out = np.zeros((m_max + 1, n_max + 1))
        for m in range(1, m_max + 1):
            for n in range(1, n_max + 1):
                out[m, n] = self.A(m, n)
        return out

    def is_self_dual(self, tol: float = 1e-12) -> bool:
        return bool(np.allclose(self.row, self.col, rtol=0, atol=tol))


# --------------------------------------------------------------------------
# level-one GL(2) eigenforms


@lru_cache(maxsize=8)
def _tau(n_max: int) -> tuple[int, ...]:
    return tuple(_backend.tau_residues(n_max))


def _normalize(a: list[int], k: int) -> np.ndarray:
    lam = np.zeros(len(a))
    half = (k - 1) / 2
    for n in range(1, len(a)):
        # exact integer to float, then the analytic normalization in log space
        lam[n] = math.copysign(math.exp(math.log(abs(a[n])) - half * math.log(n)), a[n]) if a[n] else 0.0
    return lam


@lru_cache(maxsize=8)
def delta_eigenvalues(n_max: int) -> GL2Form:
    """Ramanujan Delta: tau(n) exactly from the q-expansion, lambda(n) = tau(n) / n^{11/2}."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    tau = _tau(n_max)
    return GL2Form(12, _normalize(list(tau), 12), tau, "Delta")


_SMALL_PRIMES = (1048573, 1048571, 1048559, 1048549, 1048517, 1048507, 1048447, 1048433)


def _crt_signed(res: list[np.ndarray], primes) -> list[int]:
    P = math.prod(primes)
    coef = [(P // p) * pow(P // p, -1, p) for p in primes]
    rows = [r.tolist() for r in res]
    out = []
    for i in range(len(rows[0])):
        v = sum(r[i] * c for r, c in zip(rows, coef)) % P
        out.append(v - P if v > P // 2 else v)
    return out


@lru_cache(maxsize=4)
def weight16_eigenvalues(n_max: int) -> GL2Form:
    """The weight-16 level-one eigenform Delta * E4, exact coefficients by multimodular convolution.

    Cost is quadratic in n_max; intended for n_max up to about 1e4.
    """
    tau = np.array(_tau(n_max), dtype=object)
    e4 = [0] * (n_max + 1)
    e4[0] = 1
    for d in range(1, n_max + 1):
        for m in range(d, n_max + 1, d):
            e4[m] += 240 * d**3
    primes = _SMALL_PRIMES
    res = []
    for p in primes:
        a = np.array([int(t) % p for t in tau], dtype=np.int64)
        b = np.array([x % p for x in e4], dtype=np.int64)
        # products < 2^40 and at most 1e4 terms: exact in int64
        res.append(np.convolve(a, b)[: n_max + 1] % p)
    c = _crt_signed(res, primes)
    c[0] = 0
    return GL2Form(16, _normalize(c, 16), tuple(c), "Delta*E4")


def divisor_count(n_max: int) -> np.ndarray:
    d = np.zeros(n_max + 1, dtype=np.int64)
    for k in range(1, n_max + 1):
        d[k::k] += 1
    return d


def hecke_relation_audit(f: GL2Form, limit: int, tol: float = 1e-9) -> int:
    """Count pairs m, n <= limit violating lambda(m) lambda(n) = sum_{d | (m,n)} lambda(mn/d^2)."""
    if limit * limit > f.n_max:
        raise InsufficientTable(f"need lambda up to {limit * limit}, have {f.n_max}")
    bad = 0
    for m in range(1, limit + 1):
        for n in range(1, limit + 1):
            rhs = sum(f.lam[m * n // (d * d)] for d in divisors(math.gcd(m, n)))
            if abs(f.lam[m] * f.lam[n] - rhs) > tol:
                bad += 1
    return bad


# --------------------------------------------------------------------------
# symmetric-square lift


def sym2_langlands(k: int, T: float = 1.0) -> LanglandsParams:
    """Spherical proxy parameters i(k-1)/2 (1, 0, -1) for the lift of a weight-k form."""
    h = 0.5j * (k - 1)
    return LanglandsParams(lam=(h, 0j, -h), alpha=(h, 0j, -h), T=T)


def sym_square_gl3(f: GL2Form, m_max: int, n_max: int) -> GL3Coeffs:
    """Lift via sum A(n,1) n^{-s} = zeta(2s) sum lambda(n^2) n^{-s}: A(n,1) = sum_{d^2 | n} lambda(n^2/d^4)."""
    top = max(m_max, n_max)
    if top * top > f.n_max:
        raise InsufficientTable(f"need lambda up to {top * top}, have {f.n_max}")
    row = np.zeros(top + 1)
    for n in range(1, top + 1):
        d = 1
        while d * d <= n:
            if n % (d * d) == 0:
                row[n] += f.lam[(n // (d * d)) ** 2]
            d += 1
    return GL3Coeffs(row, row.copy(), sym2_langlands(f.weight), f"sym2({f.name})")


@lru_cache(maxsize=8)
def smallest_prime_factor(n_max: int) -> np.ndarray:
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, n_max + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    return spf


def _multiplicative(n_max: int, local) -> np.ndarray:
    """Multiplicative function from local(p, kmax) -> [f(1), f(p), ..., f(p^kmax)]."""
    spf = smallest_prime_factor(max(n_max, 2))
    out = np.zeros(n_max + 1)
    if n_max >= 1:
        out[1] = 1.0
    cache: dict[int, list[float]] = {}
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        if p not in cache:
            cache[p] = local(p, int(math.log(n_max) / math.log(p)) + 1)
        out[n] = cache[p][k] * out[m]
    return out


def _sym2_local(lam_p: float, kmax: int) -> list[float]:
    # Satake {a^2, 1, a^-2}: e1 = e2 = lam_p^2 - 1, e3 = 1
    e = lam_p * lam_p - 1.0
    h = [1.0, e, 0.0, 0.0]
    h[2] = e * h[1] - e * h[0]
    h[3] = e * h[2] - e * h[1] + h[0]
    while len(h) <= kmax:
        h.append(e * h[-1] - e * h[-2] + h[-3])
    return h[: kmax + 1]


def sym_square_multiplicative(f: GL2Form, n_max: int) -> GL3Coeffs:
    """Lift from lambda(p) only, through the local Satake recursion; needs lambda up to n_max."""
    if n_max > f.n_max:
        raise InsufficientTable(f"need lambda up to {n_max}, have {f.n_max}")
    row = _multiplicative(n_max, lambda p, km: _sym2_local(f.lam[p], km))
    return GL3Coeffs(row, row.copy(), sym2_langlands(f.weight), f"sym2({f.name})")


def gl3_multiplicativity_audit(Pi: GL3Coeffs, limit: int, tol: float = 1e-9) -> int:
    """Count coprime pairs (m1 n1, m2 n2) with A(m1 m2, n1 n2) != A(m1, n1) A(m2, n2)."""
    bad = 0
    for m1 in range(1, limit + 1):
        for n1 in range(1, limit + 1):
            for m2 in range(1, limit + 1):
                if math.gcd(m1 * n1, m2) != 1 or m1 * m2 > Pi.n_max:
                    continue
                for n2 in range(1, limit + 1):
                    if math.gcd(m1 * n1, m2 * n2) != 1 or n1 * n2 > Pi.n_max:
                        continue
                    if abs(Pi.A(m1 * m2, n1 * n2) - Pi.A(m1, n1) * Pi.A(m2, n2)) > tol:
                        bad += 1
    return bad


# --------------------------------------------------------------------------
# Rankin-Selberg coefficients of L(s, g x Pi)


def rankin_selberg_coeffs(g: GL2Form, Pi: GL3Coeffs, n_max: int) -> np.ndarray:
    """b(N) = sum_{m^2 n = N} lambda_g(n) A(m, n), directly from the tables."""
    if n_max > g.n_max or n_max > Pi.n_max:
        raise InsufficientTable("tables too short for the requested range")
    b = np.zeros(n_max + 1)
    m = 1
    while m * m <= n_max:
        for n in range(1, n_max // (m * m) + 1):
            b[m * m * n] += g.lam[n] * (Pi.row[m] * Pi.col[n] if m == 1 else Pi.A(m, n))
        m += 1
    return b


def _power_sums_gl2(lam_p: float, kmax: int) -> list[float]:
    t = [2.0, lam_p]
    while len(t) <= kmax:
        t.append(lam_p * t[-1] - t[-2])
    return t


def _power_sums_gl3(e1: float, e2: float, kmax: int) -> list[float]:
    s = [3.0, e1, e1 * e1 - 2 * e2]
    while len(s) <= kmax:
        s.append(e1 * s[-1] - e2 * s[-2] + s[-3])
    return s


def _rs_local(lam_p: float, e1: float, e2: float, kmax: int) -> list[float]:
    # complete homogeneous sums of the six products a_i b_j via Newton's identities
    pa = _power_sums_gl2(lam_p, kmax)
    pb = _power_sums_gl3(e1, e2, kmax)
    pk = [pa[k] * pb[k] for k in range(kmax + 1)]
    h = [1.0]
    for k in range(1, kmax + 1):
        h.append(sum(pk[j] * h[k - j] for j in range(1, k + 1)) / k)
    return h


def rankin_selberg_coeffs_satake(g: GL2Form, Pi: GL3Coeffs, n_max: int) -> np.ndarray:
    """b(N) from the local factors prod_{i,j} (1 - a_i b_j p^{-s})^{-1}; needs only prime data."""
    if n_max > g.n_max or n_max > Pi.n_max:
        raise InsufficientTable("tables too short for the requested range")
    return _multiplicative(n_max, lambda p, km: _rs_local(g.lam[p], Pi.row[p], Pi.col[p], km))


def is_trivially_coprime(a: int, b: int) -> bool:
    return math.gcd(a, b) == 1


def prime_powers(n: int) -> tuple[tuple[int, int], ...]:
    return factorize(n)
