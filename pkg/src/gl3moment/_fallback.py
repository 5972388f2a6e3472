"""Pure numpy implementations of the hot kernels.

Each function mirrors one in ``_ext.pyx`` and returns identical integer
data.  Exponential sums are returned as phase histograms: ``h[k]`` counts
the terms whose phase is ``e(k / M)``.  The complex value is formed once,
from exact integer counts, by the caller.
"""
from __future__ import annotations

import math

import numpy as np

# three primes below 2**40; product exceeds 2**119
_TAU_PRIMES = (1099511627689, 1099511627563, 1099511627491)


def yz_tables(D: int, bfg: bool = True):
    """Solutions (Y, Z) of Y*B + Z*C = 1 mod D (or Y*D + Z*C = 1 when not bfg).

    Returns int64 arrays Y, Z of shape (D, D) and a boolean mask of pairs
    (B, C) with gcd(B, C, D) = 1 for which a solution exists.
    """
    Y = np.zeros((D, D), dtype=np.int64)
    Z = np.zeros((D, D), dtype=np.int64)
    ok = np.zeros((D, D), dtype=bool)
    if D == 1:
        ok[0, 0] = True
        return Y, Z, ok
    for B in range(D):
        for C in range(D):
            if math.gcd(math.gcd(B, C), D) != 1:
                continue
            if not bfg:
                if math.gcd(C, D) == 1:
                    Z[B, C] = pow(C, -1, D)
                    ok[B, C] = True
                continue
            g = math.gcd(C, D)
            for y in range(D):
                r = (1 - y * B) % D
                if r % g == 0:
                    Dg = D // g
                    z = (r // g) * (pow(C // g, -1, Dg) if Dg > 1 else 0) % Dg
                    Y[B, C], Z[B, C] = y, z
                    ok[B, C] = True
                    break
    return Y, Z, ok


def gl3_tuples(D1: int, D2: int, N: int, bfg: bool = True, z2: bool = True, shift: int = 0):
    """Admissible (B1, B2, X1, X2) for the modified sum.

    X1 = Y1*D2 - Z1*B2 and X2 = Y2*D1 - Z2'*B1, where Z2' is Z2 (or Z1 when
    ``z2`` is False).  ``shift`` replaces (Y, Z) by (Y + t*C, Z - t*B) in the
    Y*B + Z*C convention, which leaves the sum unchanged.
    """
    Y1, Z1, ok1 = yz_tables(D1, bfg)
    Y2, Z2, ok2 = yz_tables(D2, bfg)
    M = D1 * D2
    B1 = np.arange(0, D1, N, dtype=np.int64)
    C1 = np.arange(D1, dtype=np.int64)
    B2 = np.arange(D2, dtype=np.int64)
    b1, c1, b2 = np.meshgrid(B1, C1, B2, indexing="ij")
    b1, c1, b2 = b1.ravel(), c1.ravel(), b2.ravel()
    keep = ok1[b1, c1] & ((b1 * b2 + D2 * c1) % D1 == 0)
    b1, c1, b2 = b1[keep], c1[keep], b2[keep]
    c2 = (-((b1 * b2 + D2 * c1) // D1)) % D2
    keep = ok2[b2, c2]
    b1, c1, b2, c2 = b1[keep], c1[keep], b2[keep], c2[keep]
    y1, z1 = Y1[b1, c1], Z1[b1, c1]
    y2, z2v = Y2[b2, c2], Z2[b2, c2]
    if shift and bfg:
        y1, z1 = y1 + shift * c1, z1 - shift * b1
        y2, z2v = y2 + shift * c2, z2v - shift * b2
    zz = z2v if z2 else z1
    x1 = (y1 * D2 - z1 * b2) % M
    x2 = (y2 * D1 - zz * b1) % M
    return b1, b2, x1, x2


def gl3_hist(D1: int, D2: int, N: int, freqs, bfg: bool = True, z2: bool = True, shift: int = 0):
    """Phase histograms of the modified sum for a batch of frequency tuples.

    ``freqs`` has rows (m1, m2, n1, n2).  The phase numerator over D1*D2 is
    (m2*B1 + n1*X1)*D2 + (m1*B2 + n2*X2)*D1.
    """
    freqs = np.asarray(freqs, dtype=np.int64).reshape(-1, 4)
    M = D1 * D2
    b1, b2, x1, x2 = gl3_tuples(D1, D2, N, bfg, z2, shift)
    out = np.zeros((len(freqs), M), dtype=np.int64)
    for i, (m1, m2, n1, n2) in enumerate(freqs):
        k = ((m2 * b1 + n1 * x1) % M * D2 + (m1 * b2 + n2 * x2) % M * D1) % M
        out[i] = np.bincount(k, minlength=M)
    return out


def tilde_hist(D1: int, D2: int, freqs):
    """Histograms for the tilde sum over C1 mod D1 (unit), C2 mod D2 with (C2, D2/D1) = 1.

    Phase numerator over D2: n1*inv(C1)*C2*(D2/D1) + n2*inv(C1)*D1 + m1*C1*(D2/D1).
    """
    freqs = np.asarray(freqs, dtype=np.int64).reshape(-1, 3)
    r = D2 // D1
    C1 = np.array([c for c in range(D1) if math.gcd(c, D1) == 1], dtype=np.int64)
    C1b = np.array([pow(int(c), -1, D1) if D1 > 1 else 0 for c in C1], dtype=np.int64)
    C2 = np.array([c for c in range(D2) if math.gcd(c, r) == 1], dtype=np.int64)
    c1, c2 = np.meshgrid(np.arange(len(C1)), C2, indexing="ij")
    c1, c2 = c1.ravel(), c2.ravel()
    cb = C1b[c1]
    cc = C1[c1]
    out = np.zeros((len(freqs), D2), dtype=np.int64)
    for i, (m1, n1, n2) in enumerate(freqs):
        k = (n1 * cb % D2 * c2 % D2 * r + n2 * cb % D2 * D1 + m1 * cc * r) % D2
        out[i] = np.bincount(k, minlength=D2)
    return out


def kloosterman_hist(a, b, c: int):
    """Histograms of classical Kloosterman sums S(a_i, b_i; c) over phases k/c."""
    a = np.atleast_1d(np.asarray(a, dtype=np.int64)) % c
    b = np.atleast_1d(np.asarray(b, dtype=np.int64)) % c
    x = np.array([t for t in range(c) if math.gcd(t, c) == 1], dtype=np.int64)
    xb = np.array([pow(int(t), -1, c) if c > 1 else 0 for t in x], dtype=np.int64)
    out = np.zeros((len(a), c), dtype=np.int64)
    for i in range(len(a)):
        k = (a[i] * x + b[i] * xb) % c
        out[i] = np.bincount(k, minlength=c)
    return out


def _jacobi_terms(n_max: int):
    ks, cs = [], []
    k = 0
    while k * (k + 1) // 2 <= n_max:
        ks.append(k * (k + 1) // 2)
        cs.append((-1) ** k * (2 * k + 1))
        k += 1
    return np.array(ks, dtype=np.int64), np.array(cs, dtype=np.int64)


def tau_residues(n_max: int) -> list[int]:
    """tau(n) for 0 <= n <= n_max as Python ints, via eta(q)^24 = q * (sum (-1)^k (2k+1) q^{k(k+1)/2})^8.

    Works modulo three 40-bit primes and recombines by CRT.
    """
    L = n_max  # need A^8 up to degree n_max - 1
    ks, cs = _jacobi_terms(L)
    residues = []
    for p in _TAU_PRIMES:
        base = np.zeros(L + 1, dtype=np.int64)
        base[ks] = cs % p
        cur = base.copy()
        for _ in range(7):
            nxt = np.zeros(L + 1, dtype=np.int64)
            for t, c in zip(ks, cs):
                if t > L:
                    break
                # |sum c_k| <= 632**2 for n <= 2e5, so int64 holds the sum
                nxt[t:] += c * cur[: L + 1 - t]
            cur = nxt % p
        residues.append(cur)
    return _crt_tau(residues, n_max)


def _crt_tau(residues, n_max: int) -> list[int]:
    P = 1
    for p in _TAU_PRIMES:
        P *= p
    coef = []
    for p in _TAU_PRIMES:
        Mi = P // p
        coef.append(Mi * pow(Mi, -1, p))
    out = [0] * (n_max + 1)
    r0, r1, r2 = (r.tolist() for r in residues)
    half = P // 2
    for n in range(1, n_max + 1):
        v = (r0[n - 1] * coef[0] + r1[n - 1] * coef[1] + r2[n - 1] * coef[2]) % P
        out[n] = v - P if v > half else v
    return out
