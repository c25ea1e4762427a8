from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gaplab import arith
from gaplab.errors import DomainError
from gaplab.primes import is_prime, primes_upto, primorial
from gaplab.zero_region import (
    MCCURLEY_R,
    RhoInput,
    derive_PAP,
    gallagher_a,
    hr_pair_upper_bound,
    jutila_exponent,
    mccurley_constants,
    rho_classify,
    selberg_CUB,
    trivial_exponent,
    zero_density_exponent,
    zero_region_chain,
    zfr_admissible,
)

R1_ORACLE = 3.2218752741789645470
INV_4R1 = 0.077594561776978746076
C_UB_ORACLE = 25.377751665003604222


def test_mccurley():
    R, R1 = mccurley_constants()
    assert arith.endpoints(R)[0] <= MCCURLEY_R <= arith.endpoints(R)[1]
    assert MCCURLEY_R == Fraction("9.6459")
    assert abs(arith.midpoint(R1) - R1_ORACLE) < 1e-15
    assert abs(arith.midpoint(1 / (4 * R1)) - INV_4R1) < 1e-16
    assert zfr_admissible(Fraction(1, 24), R1)
    assert not zfr_admissible(Fraction(1, 12), R1)


def test_gallagher_a():
    assert gallagher_a(Fraction(1, 24)) == Fraction(1, 80)
    assert gallagher_a(Fraction(1, 10**30)) < Fraction(1, 10**30)
    t = Fraction(3, 7)
    assert gallagher_a(2 * t) == 2 * gallagher_a(t)
    with pytest.raises(DomainError):
        gallagher_a(0)


def test_zero_density_exponent():
    assert jutila_exponent() == 6
    assert trivial_exponent() == 15
    assert zero_density_exponent(6, 15) == 16
    assert zero_density_exponent(3, 3) == 4
    assert zero_density_exponent(6, 12) == 13
    assert zero_density_exponent("7/2", 1) == 4


def test_derive_PAP_defaults():
    D, C = derive_PAP(16, Fraction(1, 80))
    assert D == 160
    assert abs(arith.midpoint(C) - float(1 - mpmath.exp(-2))) < 1e-15
    lo, hi = arith.endpoints(C - (1 - arith.exp(-2)))
    assert lo <= 0 <= hi


def test_derive_PAP_limits():
    _, C = derive_PAP(16, 100)
    assert arith.endpoints(C)[0] > 1 - Fraction(1, 10**9)
    D, C = derive_PAP(10, Fraction(1, 80))
    assert D == 100
    assert abs(arith.midpoint(C) - 0.71349520313980989968) < 1e-15


def test_selberg_CUB():
    C_UB, ratio = selberg_CUB(10**5)
    assert abs(arith.midpoint(C_UB) - C_UB_ORACLE) < 1e-12
    assert abs(ratio - 1) < 0.01
    _, coarse = selberg_CUB(10)
    assert coarse > 1.1
    with pytest.raises(DomainError):
        selberg_CUB(9)


def test_selberg_ratio_trend():
    ratios = [selberg_CUB(10**e)[1] for e in range(2, 6)]
    dist = [abs(r - 1) for r in ratios]
    assert all(b < a for a, b in zip(dist, dist[1:]))


def test_rho_examples():
    assert rho_classify(RhoInput(7, 11, 13, 1, 10)).rho == 0
    r = rho_classify(RhoInput(11, 3, 5, 11, 20))
    assert (r.case, r.rho) == ("II", 2)
    r = rho_classify(RhoInput(101, 7, 108, 1, 10))
    assert (r.case, r.rho) == ("III", 1)
    r = rho_classify(RhoInput(3, 6, 7, 1, 10))
    assert r.case == "zero" and r.rho is None


def test_rho_checks_P():
    P = primorial(10)
    assert rho_classify(RhoInput(7, 11, 13, 1, 10), P).case == "I"
    with pytest.raises(DomainError):
        rho_classify(RhoInput(7, 11, 13, 1, 10), P // 7)
    with pytest.raises(DomainError):
        rho_classify(RhoInput(9, 1, 2, 1, 10))


def _roots(p, a, b, P):
    return sum(1 for n in range(p) if (P * n + a) * (P * n + b) % p == 0)


@given(
    st.sampled_from([int(p) for p in primes_upto(60)]),
    st.integers(1, 2000),
    st.integers(1, 2000),
    st.sampled_from([1, 2, 3, 5, 7, 11, 13]),
    st.integers(2, 30),
)
@settings(max_examples=300, deadline=None)
def test_rho_matches_root_count(p, a, b, B0, x):
    assume(a != b and B0 <= x)
    P = primorial(x) // B0
    res = rho_classify(RhoInput(p, a, b, B0, x), P)
    assert res.case in {"I", "II", "III", "zero"}
    n = _roots(p, a, b, P)
    if res.case == "zero":
        # P is divisible by p, so P n + a = a (mod p) for every n
        assert n == p
    else:
        assert res.rho == n


def test_hr_bound():
    C_UB, _ = selberg_CUB(10)
    v = hr_pair_upper_bound(5, 1000, C_UB, strict=False)
    assert abs(v - 1377.6145194482961610) < 1e-9
    v = hr_pair_upper_bound(math.e, math.exp(100), C_UB)
    assert abs(v / (arith.midpoint(C_UB) * 1e-4 * math.exp(100)) - 1) < 1e-12
    with pytest.raises(DomainError, match="o\\(log Z\\)"):
        hr_pair_upper_bound(5, 1000, C_UB)


@given(st.floats(2, 100), st.floats(20, 200))
@settings(max_examples=50, deadline=None)
def test_hr_ratio_decreases_in_Z(x, logZ):
    a = hr_pair_upper_bound(x, math.exp(logZ), 1, strict=False) / math.exp(logZ)
    b = hr_pair_upper_bound(x, math.exp(logZ + 10), 1, strict=False) / math.exp(logZ + 10)
    assert b < a


def test_chain_reproduces_defaults():
    consts, D, C, C_UB, trace = zero_region_chain()
    assert consts.a == Fraction(1, 80) and consts.c_ZD == 16 and D == 160
    assert abs(arith.midpoint(C) - (1 - math.exp(-2))) < 1e-12
    assert abs(arith.midpoint(C_UB) - 8 * math.exp(2 * 0.57721566490153286061)) < 1e-12
    assert all(c.passed for c in trace.checks)
    assert trace["R"].source == "external"
    assert trace.max_relative_width() < 1e-30


def test_chain_rejects_large_c_ZFR():
    with pytest.raises(DomainError):
        zero_region_chain(Fraction(1, 10))


def test_is_prime_guard():
    assert is_prime(2**61 - 1)
