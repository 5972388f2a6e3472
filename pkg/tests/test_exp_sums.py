from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3moment.arith import primes_upto
from gl3moment.exp_sums import (
    DivisibilityViolation,
    GL3SumSpec,
    HypothesisViolation,
    LevelViolation,
    SumConvention,
    factorization_lemma_rhs,
    gl3_modified_sum,
    gl3_tilde_sum,
    kloosterman_classical,
    modified_sums_batch,
    prime_twist_identity_check,
    prime_twist_product_form,
    weil_margin,
)
from oracles import brute_gl3, brute_kloosterman


def test_classical_examples():
    assert kloosterman_classical(1, 1, 1) == 1
    assert abs(kloosterman_classical(1, 1, 3) - (-1)) < 1e-12
    assert abs(kloosterman_classical(0, 1, 4)) < 1e-12


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 60))
def test_classical_matches_brute_force(a, b, c):
    v = kloosterman_classical(a, b, c)
    assert abs(v - brute_kloosterman(a, b, c)) < 1e-9
    assert abs(v - np.conj(kloosterman_classical(-a, -b, c))) < 1e-9


def test_classical_weil_bound_primes():
    for p in primes_upto(1000):
        assert abs(kloosterman_classical(1, 1, p)) <= 2 * math.sqrt(p) + 1e-9


def test_tilde_examples():
    assert gl3_tilde_sum(1, 1, 1, 1, 1) == 1
    # C1 = 1, C2 in {1, 3}: e(1/2) + e(3/2) = -2
    assert abs(gl3_tilde_sum(1, 1, 1, 2, 4) - (-2)) < 1e-12
    assert abs(gl3_tilde_sum(0, 0, 0, 3, 3) - 6) < 1e-12
    with pytest.raises(DivisibilityViolation):
        gl3_tilde_sum(1, 1, 1, 3, 4)


@pytest.mark.parametrize(
    "spec",
    [
        GL3SumSpec(1, 1, 1, 1, 1, 1),
        GL3SumSpec(1, 1, 1, 1, 2, 2),
        GL3SumSpec(1, 0, 1, 1, 2, 4, N=2),
        GL3SumSpec(0, 0, 0, 0, 3, 3),
        GL3SumSpec(1, 2, 3, 1, 4, 6),
        GL3SumSpec(1, 1, 1, 1, 5, 7),
        GL3SumSpec(2, 3, 1, 2, 6, 4, N=2),
    ],
)
def test_modified_sum_matches_direct_loop(spec):
    assert abs(gl3_modified_sum(spec) - brute_gl3(*spec.freqs, spec.D1, spec.D2, spec.N)) < 1e-9


def test_modified_sum_frozen_values():
    # values from the direct quadruple loop
    assert abs(gl3_modified_sum(GL3SumSpec(1, 1, 1, 1, 1, 1)) - 1) < 1e-12
    assert abs(gl3_modified_sum(GL3SumSpec(1, 1, 1, 1, 2, 2)) - 3) < 1e-12
    assert abs(gl3_modified_sum(GL3SumSpec(1, 0, 1, 1, 2, 4, N=2))) < 1e-12
    assert abs(gl3_modified_sum(GL3SumSpec(0, 0, 0, 0, 3, 3)) - 10) < 1e-12


def test_level_violation():
    with pytest.raises(LevelViolation):
        gl3_modified_sum(GL3SumSpec(1, 1, 1, 1, 3, 4, N=2))


def test_yz_independence():
    freqs = list(itertools.product(range(3), repeat=4))
    for D1, D2 in [(4, 6), (6, 9), (8, 12), (5, 10)]:
        base = modified_sums_batch(D1, D2, 1, freqs)
        for t in (1, 2):
            assert np.max(np.abs(modified_sums_batch(D1, D2, 1, freqs, yz_shift=t) - base)) <= 1e-9


def test_factorization_examples():
    assert abs(factorization_lemma_rhs(GL3SumSpec(1, 1, 1, 1, 1, 1)) - 1) < 1e-12
    for spec in (GL3SumSpec(1, 2, 3, 1, 4, 6), GL3SumSpec(1, 1, 1, 1, 5, 7)):
        assert abs(factorization_lemma_rhs(spec) - gl3_modified_sum(spec)) < 1e-9


def test_factorization_small_sweep():
    freqs = list(itertools.product(range(4), repeat=4))
    for D1 in range(1, 9):
        for D2 in range(1, 9):
            lhs = modified_sums_batch(D1, D2, 1, freqs)
            for f, v in zip(freqs, lhs):
                r = factorization_lemma_rhs(GL3SumSpec(*f, D1, D2))
                assert abs(v - r) <= 1e-6 * (1 + abs(v))


def test_literal_convention_fails_identity():
    # the typeset reading is kept behind a flag; it does not satisfy the factorization
    freqs = list(itertools.product(range(3), repeat=4))
    lit = modified_sums_batch(4, 6, 1, freqs, SumConvention.literal())
    rhs = [factorization_lemma_rhs(GL3SumSpec(*f, 4, 6)) for f in freqs]
    assert np.max(np.abs(lit - np.array(rhs))) > 1e-3


def test_prime_twist_examples():
    lhs, rhs = prime_twist_identity_check(1, 1, 1, 1, 5, 1, 1)
    assert abs(lhs - 5) < 1e-9 and abs(rhs - 5) < 1e-9
    with pytest.raises(HypothesisViolation):
        prime_twist_identity_check(1, 1, 1, 1, 2, 2, 1)
    # the weaker hypothesis (m2 n2, q) = 1 is not enough: n1 = 3 at q = 3
    with pytest.raises(HypothesisViolation):
        prime_twist_identity_check(1, 2, 3, 1, 3, 2, 4)


def test_prime_twist_product_form_coprime_moduli():
    for q in (3, 5, 7):
        for D1, D2 in [(1, 1), (2, 1), (4, 9), (8, 11)]:
            if math.gcd(D1 * D2, q) != 1:
                continue
            lhs, rhs = prime_twist_identity_check(1, 2, 2, 1, q, D1, D2)
            assert abs(prime_twist_product_form(1, 2, 2, 1, q, D1, D2) - rhs) < 1e-9


@settings(max_examples=40, deadline=None)
@given(
    st.sampled_from([3, 5, 7]),
    st.integers(1, 8),
    st.integers(1, 8),
    st.tuples(*[st.integers(1, 2)] * 4),
)
def test_prime_twist_property(q, D1, D2, f):
    if math.gcd(D1 * D2, q) != 1:
        return
    lhs, rhs = prime_twist_identity_check(*f, q, D1, D2)
    assert abs(lhs - rhs) <= 1e-6 * (1 + abs(rhs))


def test_weil_margin_examples():
    r = weil_margin(GL3SumSpec(0, 0, 0, 0, 1, 1))
    assert (r.sum_modulus, r.bound_value, r.margin) == (1.0, 1.0, 1.0)
    r = weil_margin(GL3SumSpec(0, 0, 0, 0, 3, 3))
    assert abs(r.bound_value - 3 * math.sqrt(27)) < 1e-12
    assert abs(r.sum_modulus - 10) < 1e-12
