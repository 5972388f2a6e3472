"""Slow, independent reference implementations used only by the tests."""
from __future__ import annotations

import cmath
import math


def e(x: float) -> complex:
    return cmath.exp(2j * math.pi * x)


def brute_kloosterman(a: int, b: int, c: int) -> complex:
    if c == 1:
        return 1 + 0j
    return sum(e((a * x + b * pow(x, -1, c)) / c) for x in range(c) if math.gcd(x, c) == 1)


def _solve_yz(B: int, C: int, D: int) -> tuple[int, int]:
    for y in range(D):
        for z in range(D):
            if (y * B + z * C - 1) % D == 0:
                return y, z
    raise ValueError("no solution")


def brute_gl3(m1: int, m2: int, n1: int, n2: int, D1: int, D2: int, N: int = 1) -> complex:
    """Direct quadruple loop; (Y, Z) solve Y*B + Z*C = 1, Z2 in the second numerator, m2 with B1."""
    total = 0j
    for B1 in range(0, D1):
        if B1 % N:
            continue
        for C1 in range(D1):
            if math.gcd(math.gcd(B1, C1), D1) != 1:
                continue
            Y1, Z1 = _solve_yz(B1, C1, D1)
            for B2 in range(D2):
                for C2 in range(D2):
                    if math.gcd(math.gcd(B2, C2), D2) != 1:
                        continue
                    if (B1 * B2 + D1 * C2 + D2 * C1) % (D1 * D2):
                        continue
                    Y2, Z2 = _solve_yz(B2, C2, D2)
                    ph = (m2 * B1 + n1 * (Y1 * D2 - Z1 * B2)) / D1 + (m1 * B2 + n2 * (Y2 * D1 - Z2 * B1)) / D2
                    total += e(ph)
    return total


def tau_by_product(n_max: int) -> list[int]:
    """tau(n) from q * prod (1 - q^n)^24 by integer polynomial multiplication."""
    poly = [0] * (n_max + 1)
    poly[0] = 1
    for n in range(1, n_max + 1):
        for _ in range(24):
            for k in range(n_max, n - 1, -1):
                poly[k] -= poly[k - n]
    return [0] + poly[:n_max]


def trial_divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]
