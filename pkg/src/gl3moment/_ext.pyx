# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels in ``_fallback``.

Signatures and outputs match the numpy versions exactly; see that module
for the phase-histogram convention.
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef long long i64

cdef extern from *:
    ctypedef long long i128 "__int128"


cdef inline i64 pmod(i64 a, i64 m) nogil:
    cdef i64 r = a % m
    return r + m if r < 0 else r


cdef i64 gcd(i64 a, i64 b) nogil:
    cdef i64 t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


cdef i64 invmod(i64 a, i64 m) nogil:
    # assumes gcd(a, m) == 1; returns 0 when m == 1
    cdef i64 t = 0, newt = 1, r = m, newr = pmod(a, m), q, tmp
    if m == 1:
        return 0
    while newr:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    return pmod(t, m)


cdef int fill_yz(i64 D, bint bfg, i64[:, ::1] Y, i64[:, ::1] Z, char[:, ::1] ok) noexcept nogil:
    cdef i64 B, C, y, r, g, Dg, z
    if D == 1:
        ok[0, 0] = 1
        Y[0, 0] = 0
        Z[0, 0] = 0
        return 0
    for B in range(D):
        for C in range(D):
            ok[B, C] = 0
            Y[B, C] = 0
            Z[B, C] = 0
            if gcd(gcd(B, C), D) != 1:
                continue
            if not bfg:
                if gcd(C, D) == 1:
                    Z[B, C] = invmod(C, D)
                    ok[B, C] = 1
                continue
            g = gcd(C, D)
            for y in range(D):
                r = pmod(1 - y * B, D)
                if r % g == 0:
                    Dg = D // g
                    z = pmod((r // g) * invmod(C // g, Dg), Dg) if Dg > 1 else 0
                    Y[B, C] = y
                    Z[B, C] = z
                    ok[B, C] = 1
                    break
    return 0


def yz_tables(i64 D, bint bfg=True):
    Y = np.zeros((D, D), dtype=np.int64)
    Z = np.zeros((D, D), dtype=np.int64)
    ok = np.zeros((D, D), dtype=np.int8)
    fill_yz(D, bfg, Y, Z, ok)
    return Y, Z, ok.astype(bool)


def gl3_hist(i64 D1, i64 D2, i64 N, freqs, bint bfg=True, bint z2=True, i64 shift=0):
    cdef i64[:, ::1] F = np.ascontiguousarray(np.asarray(freqs, dtype=np.int64).reshape(-1, 4))
    cdef i64 nf = F.shape[0]
    cdef i64 M = D1 * D2
    out_arr = np.zeros((nf, M), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    Y1a = np.zeros((D1, D1), dtype=np.int64); Z1a = np.zeros((D1, D1), dtype=np.int64)
    Y2a = np.zeros((D2, D2), dtype=np.int64); Z2a = np.zeros((D2, D2), dtype=np.int64)
    ok1a = np.zeros((D1, D1), dtype=np.int8); ok2a = np.zeros((D2, D2), dtype=np.int8)
    cdef i64[:, ::1] Y1 = Y1a, Z1 = Z1a, Y2 = Y2a, Z2 = Z2a
    cdef char[:, ::1] ok1 = ok1a, ok2 = ok2a
    cdef i64 ib, b1, c1, b2, c2, s, y1, z1, y2, zz, x1, x2, f, k
    fill_yz(D1, bfg, Y1, Z1, ok1)
    fill_yz(D2, bfg, Y2, Z2, ok2)
    with nogil:
        for ib in range(D1 // N):
            b1 = ib * N
            for c1 in range(D1):
                if not ok1[b1, c1]:
                    continue
                for b2 in range(D2):
                    s = b1 * b2 + D2 * c1
                    if s % D1:
                        continue
                    c2 = pmod(-(s // D1), D2)
                    if not ok2[b2, c2]:
                        continue
                    y1 = Y1[b1, c1]; z1 = Z1[b1, c1]
                    y2 = Y2[b2, c2]; zz = Z2[b2, c2]
                    if shift and bfg:
                        y1 = y1 + shift * c1; z1 = z1 - shift * b1
                        y2 = y2 + shift * c2; zz = zz - shift * b2
                    if not z2:
                        zz = z1
                    x1 = pmod(y1 * D2 - z1 * b2, M)
                    x2 = pmod(y2 * D1 - zz * b1, M)
                    for f in range(nf):
                        k = (pmod(F[f, 1] * b1 + F[f, 2] * x1, M) * D2
                             + pmod(F[f, 0] * b2 + F[f, 3] * x2, M) * D1) % M
                        out[f, k] += 1
    return out_arr


def tilde_hist(i64 D1, i64 D2, freqs):
    cdef i64[:, ::1] F = np.ascontiguousarray(np.asarray(freqs, dtype=np.int64).reshape(-1, 3))
    cdef i64 nf = F.shape[0]
    cdef i64 r = D2 // D1
    out_arr = np.zeros((nf, D2), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef i64 c1, cb, c2, f, k
    with nogil:
        for c1 in range(D1):
            if gcd(c1, D1) != 1:
                continue
            cb = invmod(c1, D1)
            for c2 in range(D2):
                if gcd(c2, r) != 1:
                    continue
                for f in range(nf):
                    k = pmod(pmod(F[f, 1] * cb, D2) * c2 % D2 * r
                             + pmod(F[f, 2] * cb, D2) * D1 + pmod(F[f, 0] * c1, D2) * r, D2)
                    out[f, k] += 1
    return out_arr


def kloosterman_hist(a, b, i64 c):
    cdef i64[::1] A = np.ascontiguousarray(np.atleast_1d(np.asarray(a, dtype=np.int64)) % c)
    cdef i64[::1] Bv = np.ascontiguousarray(np.atleast_1d(np.asarray(b, dtype=np.int64)) % c)
    cdef i64 n = A.shape[0]
    out_arr = np.zeros((n, c), dtype=np.int64)
    cdef i64[:, ::1] out = out_arr
    cdef i64 x, xb, i
    with nogil:
        for x in range(c):
            if gcd(x, c) != 1:
                continue
            xb = invmod(x, c)
            for i in range(n):
                out[i, (A[i] * x + Bv[i] * xb) % c] += 1
    return out_arr


def tau_residues(i64 n_max):
    """tau(n), 0 <= n <= n_max, from the eighth power of Jacobi's series in 128-bit integers."""
    cdef i64 L = n_max
    cdef i64 nk = 0
    while nk * (nk + 1) // 2 <= L:
        nk += 1
    ks_arr = np.array([k * (k + 1) // 2 for k in range(nk)], dtype=np.int64)
    cs_arr = np.array([(-1) ** k * (2 * k + 1) for k in range(nk)], dtype=np.int64)
    cdef i64[::1] ks = ks_arr, cs = cs_arr
    cur_arr = np.zeros((L + 1, 2), dtype=np.int64)
    nxt_arr = np.zeros((L + 1, 2), dtype=np.int64)
    cdef i128* cur = <i128*> cnp.PyArray_DATA(cur_arr)
    cdef i128* nxt = <i128*> cnp.PyArray_DATA(nxt_arr)
    cdef i128* tmp
    cdef i64 it, j, n, t
    cdef i128 c
    with nogil:
        for j in range(nk):
            cur[ks[j]] = cs[j]
        for it in range(7):
            for n in range(L + 1):
                nxt[n] = 0
            for j in range(nk):
                t = ks[j]
                c = cs[j]
                for n in range(t, L + 1):
                    nxt[n] += c * cur[n - t]
            tmp = cur; cur = nxt; nxt = tmp
    # seven swaps leave the product in the second buffer
    res = nxt_arr
    lo = res[:, 0].view(np.uint64).tolist()
    hi = res[:, 1].tolist()
    out = [0] * (n_max + 1)
    for n in range(1, n_max + 1):
        out[n] = (hi[n - 1] << 64) + lo[n - 1]
    return out
