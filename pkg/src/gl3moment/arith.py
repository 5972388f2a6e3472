"""Exact residue and rational-phase arithmetic.

Python integers are unbounded, so every product below is exact; no
fixed-width overflow handling is needed on this side.  The compiled
kernels use 64/128-bit arithmetic with explicit range checks.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "NotInvertible",
    "NotCoprime",
    "Residue",
    "RationalPhase",
    "inv_mod",
    "unit_phase",
    "e",
    "crt_split",
    "crt_combine",
    "divisors",
    "mobius",
    "euler_phi",
    "factorize",
    "is_prime",
    "primes_upto",
]


class NotInvertible(ArithmeticError):
    """Raised when an inverse modulo m is requested for a non-unit."""


class NotCoprime(ArithmeticError):
    """Raised when a CRT split is requested for non-coprime moduli."""


@dataclass(frozen=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class RationalPhase:
    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator < 1:
            raise ValueError("denominator must be positive")

    def reduced(self) -> "RationalPhase":
        g = math.gcd(self.numerator, self.denominator)
        return RationalPhase((self.numerator // g) % (self.denominator // g), self.denominator // g)


def inv_mod(a: int, m: int) -> Residue:
    """Least non-negative x with a*x = 1 (mod m)."""
    if m < 1:
        raise ValueError("modulus must be positive")
    if m == 1:
        return Residue(0, 1)
    if math.gcd(a, m) != 1:
        raise NotInvertible(f"{a} is not invertible modulo {m}")
    return Residue(pow(a, -1, m), m)


def unit_phase(p: RationalPhase) -> complex:
    """e(num/den), reducing the numerator into [0, den) first."""
    r = p.numerator % p.denominator
    if r == 0:
        return 1 + 0j
    if 2 * r == p.denominator:
        return -1 + 0j
    return cmath.exp(2j * math.pi * r / p.denominator)


def e(num: int, den: int = 1) -> complex:
    return unit_phase(RationalPhase(num, den))


def crt_split(alpha: Residue, m1: int, m2: int) -> tuple[Residue, Residue]:
    if alpha.modulus != m1 * m2:
        raise ValueError("alpha must live modulo m1*m2")
    if math.gcd(m1, m2) != 1:
        raise NotCoprime(f"gcd({m1}, {m2}) > 1")
    return Residue(alpha.value % m1, m1), Residue(alpha.value % m2, m2)


def crt_combine(r1: Residue, r2: Residue) -> Residue:
    m1, m2 = r1.modulus, r2.modulus
    if math.gcd(m1, m2) != 1:
        raise NotCoprime(f"gcd({m1}, {m2}) > 1")
    # x = r1 + m1 * t with t = (r2 - r1) / m1 mod m2
    t = ((r2.value - r1.value) * inv_mod(m1, m2).value) % m2
    return Residue(r1.value + m1 * t, m1 * m2)


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division, as ((p, e), ...)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@lru_cache(maxsize=4096)
def _divisors(n: int) -> tuple[int, ...]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return tuple(small + large[::-1])


def divisors(n: int) -> list[int]:
    if n < 1:
        raise ValueError("n must be positive")
    return list(_divisors(n))


def mobius(n: int) -> int:
    f = factorize(n)
    if any(k > 1 for _, k in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    out = n
    for p, _ in factorize(n):
        out = out // p * (p - 1)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == ((n, 1),)


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i in range(n + 1) if sieve[i]]
