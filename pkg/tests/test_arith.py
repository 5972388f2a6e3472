from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gl3moment.arith import (
    NotCoprime,
    NotInvertible,
    RationalPhase,
    Residue,
    crt_combine,
    crt_split,
    divisors,
    euler_phi,
    inv_mod,
    mobius,
    unit_phase,
)
from oracles import trial_divisors


def test_inv_mod_examples():
    assert inv_mod(1, 7) == Residue(1, 7)
    assert inv_mod(2, 5).value == 3
    # brute-force scan over 0..3119
    assert inv_mod(17, 3120).value == 2753


def test_inv_mod_raises_for_non_unit():
    with pytest.raises(NotInvertible):
        inv_mod(6, 9)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**5))
def test_inverse_property(a, m):
    if math.gcd(a, m) != 1:
        with pytest.raises(NotInvertible):
            inv_mod(a, m)
        return
    x = inv_mod(a, m)
    assert 0 <= x.value < m
    assert (a * x.value) % m == 1 % m


def test_unit_phase_examples():
    assert unit_phase(RationalPhase(0, 1)) == 1
    assert unit_phase(RationalPhase(1, 2)) == -1
    z = unit_phase(RationalPhase(1, 3))
    assert abs(z - complex(-0.5, 0.8660254037844386)) < 1e-15


@given(st.integers(-10**12, 10**12), st.integers(1, 10**6), st.integers(-50, 50))
def test_unit_phase_modulus_and_reduction(num, den, k):
    z = unit_phase(RationalPhase(num, den))
    assert abs(abs(z) - 1) <= 1e-15
    assert unit_phase(RationalPhase(k * den + num, den)) == z


def test_crt_examples():
    assert crt_split(Residue(7, 15), 3, 5) == (Residue(1, 3), Residue(2, 5))
    assert crt_split(Residue(0, 6), 2, 3) == (Residue(0, 2), Residue(0, 3))
    assert crt_split(Residue(11, 77), 7, 11) == (Residue(4, 7), Residue(0, 11))
    with pytest.raises(NotCoprime):
        crt_split(Residue(1, 12), 2, 6)


def test_crt_round_trip_all_moduli_pairs():
    # every coprime pair with m1*m2 <= 1e4; all residues up to 500, a stride of ~20 above
    for m1 in range(1, 10_001):
        for m2 in range(1, 10_000 // m1 + 1):
            if math.gcd(m1, m2) != 1:
                continue
            M = m1 * m2
            step = 1 if M <= 500 else M // 20
            for a in [*range(0, M, step), M - 1]:
                r1, r2 = crt_split(Residue(a, M), m1, m2)
                assert crt_combine(r1, r2).value == a


@settings(max_examples=300)
@given(st.integers(1, 100), st.integers(1, 100), st.data())
def test_crt_round_trip_property(m1, m2, data):
    if math.gcd(m1, m2) != 1:
        return
    a = data.draw(st.integers(0, m1 * m2 - 1))
    assert crt_combine(*crt_split(Residue(a, m1 * m2), m1, m2)).value == a


def test_divisors_examples():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(360) == trial_divisors(360)
    assert len(divisors(360)) == 24


@given(st.integers(1, 10**6))
def test_divisors_closed_under_complement(n):
    ds = divisors(n)
    assert ds == sorted(set(ds))
    assert {n // d for d in ds} == set(ds)


def test_mobius_and_phi():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert [euler_phi(n) for n in range(1, 11)] == [1, 1, 2, 2, 4, 2, 6, 4, 6, 4]
