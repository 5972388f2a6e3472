from __future__ import annotations

import math

import numpy as np
import pytest

from gl3moment.kuznetsov import (
    SIGN_PAIRS,
    BudgetExceeded,
    KernelArg,
    KernelTable,
    QuadBudget,
    TestFunctionH,
    build_kernel_table,
    derivative_ratio_probe,
    j_support_holds,
    kernel_J,
    kernel_Jtilde,
)

COARSE = QuadBudget(nx=48, nt=12, tol=math.inf)


def test_jtilde_vanishes_below_support():
    for A in (0.01, 0.05, 0.5, 0.99):
        kv = kernel_Jtilde(A)
        assert kv.value == 0 and kv.error == 0


def test_j_vanishes_below_support():
    for A1, A2 in [(1e-2, 1e-1), (1e-3, 10.0), (0.5, 0.9)]:
        assert not j_support_holds(A1, A2)
        assert kernel_J(A1, A2).value == 0
    # min(A1 A2^2, A2 A1^2) = 1e-4
    A1, A2 = 1e-4 ** (1 / 3), 1e-4 ** (1 / 3)
    assert kernel_J(A1, A2).value == 0


def test_argument_validation():
    with pytest.raises(ValueError):
        KernelArg((0.0,), (1,))
    with pytest.raises(ValueError):
        KernelArg((1.0,), (2,))
    with pytest.raises(ValueError):
        TestFunctionH((2.0, 1.0, 1.0, 2.0))


def test_jtilde_self_convergence():
    a = kernel_Jtilde(1.5, 1, budget=QuadBudget(nx=64, nt=16, tol=math.inf))
    b = kernel_Jtilde(1.5, 1, budget=QuadBudget(nx=128, nt=32, tol=math.inf))
    assert abs(a.value - b.value) <= max(a.error, 1e-6)
    assert abs(b.value) > 0
    assert math.isfinite(abs(kernel_Jtilde(1.0).value))


def test_jtilde_conjugation_symmetry():
    for A in (1.3, 2.0):
        p = kernel_Jtilde(A, 1, budget=COARSE).value
        m = kernel_Jtilde(A, -1, budget=COARSE).value
        assert abs(m - np.conj(p)) <= 1e-12 * max(abs(p), 1e-30)


def test_j_is_real_for_every_sign_pair():
    for eps in SIGN_PAIRS:
        v = kernel_J(1.6, 1.3, eps, budget=COARSE).value
        # roundoff scales with the integrand, not with the cancelled value
        assert abs(v.imag) <= 1e-12 * abs(v) + 1e-15


def test_j_sign_pairs_are_distinct():
    # J_{-eps} is not conj(J_eps): all four pairs must be evaluated
    vals = {eps: kernel_J(2.0, 1.5, eps, budget=QuadBudget(nx=64, nt=16, tol=math.inf)) for eps in SIGN_PAIRS}
    v, err = vals[(1, 1)], vals[(1, 1)].error + vals[(-1, -1)].error
    assert abs(v.value - np.conj(vals[(-1, -1)].value)) > 10 * err


def test_j_self_convergence():
    a = kernel_J(1.5, 1.5, budget=QuadBudget(nx=48, nt=12, tol=math.inf))
    b = kernel_J(1.5, 1.5, budget=QuadBudget(nx=96, nt=24, tol=math.inf))
    assert abs(a.value - b.value) <= 1e-4
    assert math.isfinite(abs(kernel_J(1.0, 1.0).value))


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        kernel_J(3.0, 3.0, budget=QuadBudget(nx=8, nt=4, tol=1e-12, max_doublings=0))


def test_swapped_profile():
    H = TestFunctionH((1.0, 2.0, 0.5, 3.0))
    Hs = H.swapped()
    y1, y2 = np.meshgrid(np.linspace(0.4, 3.1, 17), np.linspace(0.4, 3.1, 13))
    assert np.array_equal(Hs(y1, y2), H(y2, y1))
    assert H(1.5, 1.75) == pytest.approx(1.0)


def test_derivative_probe():
    r0 = derivative_ratio_probe(1.5, 1.5, 0, 0)
    assert r0.ratio == pytest.approx(abs(kernel_J(1.5, 1.5, budget=COARSE).value))
    r = derivative_ratio_probe(1.5, 1.5, 1, 0)
    assert math.isfinite(r.ratio)
    assert abs(r.ratio - r.ratio_half_step) <= 0.05 * r.ratio + 1e-6


def test_kernel_table(tmp_path):
    tab = build_kernel_table(1.2, 1.8, 4, nx=24, nt=8, cache_dir=str(tmp_path))
    assert tab.covers(1.5, 1.5) and not tab.covers(1.0, 1.5)
    with pytest.raises(KeyError):
        tab(1.9, 1.5, (1, 1))
    assert tab(0.5, 0.5, (1, 1)) == 0
    direct = kernel_J(1.4, 1.6, (1, -1), budget=QuadBudget(nx=24, nt=8, tol=math.inf)).value
    assert abs(tab(1.4, 1.6, (1, -1)) - direct) < 0.2 * max(abs(direct), 1e-4)
    # the cache is reused
    again = build_kernel_table(1.2, 1.8, 4, nx=24, nt=8, cache_dir=str(tmp_path))
    assert all(np.array_equal(again.values[e], tab.values[e]) for e in SIGN_PAIRS)
    z = tab.zeroed()
    assert z(1.5, 1.5, (1, 1)) == 0
    path = tmp_path / "t.npz"
    tab.save(path)
    back = KernelTable.load(path)
    assert back(1.5, 1.5, (-1, 1)) == tab(1.5, 1.5, (-1, 1))
