from __future__ import annotations

import math

import numpy as np
import pytest

from gl3moment.coeffs import (
    GL3Coeffs,
    InsufficientTable,
    delta_eigenvalues,
    divisor_count,
    gl3_multiplicativity_audit,
    hecke_relation_audit,
    rankin_selberg_coeffs,
    rankin_selberg_coeffs_satake,
    sym_square_gl3,
    sym_square_multiplicative,
    weight16_eigenvalues,
)
from oracles import tau_by_product


def test_tau_matches_product_expansion():
    g = delta_eigenvalues(300)
    assert list(g.coeffs[1:301]) == tau_by_product(300)[1:]
    assert g.coeffs[1] == 1 and g.coeffs[2] == -24
    assert g.coeffs[6] == g.coeffs[2] * g.coeffs[3]
    assert g.lam[1] == 1.0
    assert abs(g.lam[2] - (-24) / 2**5.5) < 1e-15


def test_weight16_form():
    w = weight16_eigenvalues(200)
    assert list(w.coeffs[1:5]) == [1, 216, -3348, 13888]
    assert hecke_relation_audit(w, 14) == 0


def test_hecke_audit_detects_fault():
    g = delta_eigenvalues(2500)
    assert hecke_relation_audit(g, 50) == 0
    assert hecke_relation_audit(g, 1) == 0
    lam = g.lam.copy()
    lam[4] += 1e-3
    assert hecke_relation_audit(g.with_lam(lam), 50) >= 1


def test_deligne_bound():
    g = delta_eigenvalues(10_000)
    d = divisor_count(10_000)
    assert np.all(np.abs(g.lam[1:]) <= d[1:] + 1e-12)


def test_sym_square_examples():
    g = delta_eigenvalues(400)
    Pi = sym_square_gl3(g, 20, 20)
    assert Pi.A(1, 1) == 1
    # zeta(2s) sum lambda(n^2) n^-s: the coefficient at 2 is lambda(4), at 4 it is lambda(16) + 1
    assert abs(Pi.A(2, 1) - g.lam[4]) < 1e-14
    assert abs(Pi.A(4, 1) - (g.lam[16] + 1)) < 1e-14
    assert abs(Pi.A(2, 1) * Pi.A(3, 1) - Pi.A(6, 1)) < 1e-12
    assert Pi.is_self_dual()
    with pytest.raises(InsufficientTable):
        sym_square_gl3(g, 21, 1)


def test_two_sym_square_routes_agree():
    g = delta_eigenvalues(10_000)
    a = sym_square_gl3(g, 100, 100)
    b = sym_square_multiplicative(g, 100)
    assert np.max(np.abs(a.row[1:] - b.row[1:])) < 1e-12


def test_gl3_multiplicativity_and_reality():
    g = delta_eigenvalues(3000)
    Pi = sym_square_multiplicative(g, 3000)
    assert gl3_multiplicativity_audit(Pi, 12) == 0
    T = Pi.table(30, 30)
    assert np.isrealobj(T) or np.max(np.abs(np.imag(T))) == 0


def test_rankin_selberg_routes_agree():
    g = delta_eigenvalues(3000)
    Pi = sym_square_multiplicative(g, 3000)
    a = rankin_selberg_coeffs(g, Pi, 3000)
    b = rankin_selberg_coeffs_satake(g, Pi, 3000)
    assert np.max(np.abs(a[1:] - b[1:])) < 1e-10
    assert a[1] == 1


def test_rankin_selberg_with_trivial_table():
    # A(1,1) = 1 and A(n,1) = A(1,n) = 0 otherwise; the recursion then leaves A(d,d) = mu(d)
    g = delta_eigenvalues(1000)
    row = np.zeros(1001)
    row[1] = 1.0
    Pi = GL3Coeffs(row, row.copy())
    b = rankin_selberg_coeffs(g, Pi, 1000)
    expect = np.zeros(1001)
    for m in range(1, 11):
        if m**3 <= 1000:
            from gl3moment.arith import mobius

            expect[m**3] = mobius(m) * g.lam[m]
    assert np.max(np.abs(b[1:] - expect[1:])) < 1e-14
