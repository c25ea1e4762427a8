from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from gaplab.errors import DomainError
from gaplab.variational import (
    SymmetricPolynomial,
    check_cIJ_bound,
    compute_I,
    compute_J,
    gram_matrices,
    maximize_ratio,
    orbit,
    quadratic_form,
    simplex_monomial_integral,
    symmetric_basis,
)


def test_monomial_integral():
    assert simplex_monomial_integral(2, (1, 0)) == Fraction(1, 6)
    for r in range(1, 7):
        assert simplex_monomial_integral(r, (0,) * r) == Fraction(1, math.factorial(r))
    assert simplex_monomial_integral(3, (1, 1, 1)) == Fraction(1, 720)
    with pytest.raises(DomainError):
        simplex_monomial_integral(2, (1, -1))
    with pytest.raises(DomainError):
        simplex_monomial_integral(3, (1, 1))


def test_monomial_integral_quadrature():
    val, _ = integrate.nquad(lambda z, y, x: x * y * z,
                             [lambda y, x: (0, 1 - x - y), lambda x: (0, 1 - x), (0, 1)],
                             opts={"epsabs": 1e-13})
    assert abs(val - 1 / 720) < 1e-9


def test_basis():
    assert symmetric_basis(2, 2) == ((), (1,), (2,), (1, 1))
    assert len(symmetric_basis(8, 5)) == 19
    assert all(len(lam) <= 3 for lam in symmetric_basis(3, 6))
    assert sorted(orbit((1,), 3)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_I_J_constant():
    F = SymmetricPolynomial.constant(2)
    assert compute_I(F) == Fraction(1, 2)
    assert compute_J(F) == Fraction(1, 3)
    for r in range(1, 6):
        F = SymmetricPolynomial.constant(r)
        assert compute_I(F) == Fraction(1, math.factorial(r))
        assert compute_J(F) == Fraction(2, math.factorial(r + 1))


def test_I_J_zero_and_scaling():
    Z = SymmetricPolynomial(3, ((), (1,)), (0, 0))
    assert compute_I(Z) == 0 and compute_J(Z) == 0
    F = SymmetricPolynomial(3, ((), (1,), (1, 1)), (1, Fraction(-2, 3), 5))
    G = F.scaled(2)
    assert compute_I(G) == 4 * compute_I(F)
    assert compute_J(G) == 4 * compute_J(F)


@pytest.mark.parametrize("r,degree", [(1, 4), (2, 3), (3, 3), (4, 2), (5, 2)])
def test_gram_two_methods_identical(r, degree):
    basis = symmetric_basis(r, degree)
    assert gram_matrices(r, basis, "orbit") == gram_matrices(r, basis, "expand")


def test_gram_matches_functionals():
    r, basis = 3, symmetric_basis(3, 2)
    GI, GJ = gram_matrices(r, basis)
    coeffs = (Fraction(1), Fraction(-1, 2), Fraction(3), Fraction(2, 7))
    F = SymmetricPolynomial(r, basis, coeffs)
    assert quadratic_form(GI, coeffs) == compute_I(F)
    assert quadratic_form(GJ, coeffs) == compute_J(F)


def _quad_I_J(F, r):
    if r == 1:
        I, _ = integrate.quad(lambda t: F(t) ** 2, 0, 1, epsabs=1e-13)
        J = integrate.quad(lambda t: F(t), 0, 1, epsabs=1e-13)[0] ** 2
        return I, J
    if r == 2:
        I, _ = integrate.nquad(lambda t2, t1: F(t1, t2) ** 2, [lambda t1: (0, 1 - t1), (0, 1)],
                               opts={"epsabs": 1e-13})

        def inner(t1):
            return integrate.quad(lambda t2: F(t1, t2), 0, 1 - t1, epsabs=1e-13)[0] ** 2

        J, _ = integrate.quad(inner, 0, 1, epsabs=1e-13)
        return I, J
    I, _ = integrate.nquad(lambda t3, t2, t1: F(t1, t2, t3) ** 2,
                           [lambda t2, t1: (0, 1 - t1 - t2), lambda t1: (0, 1 - t1), (0, 1)],
                           opts={"epsabs": 1e-13})

    def inner(t2, t1):
        return integrate.quad(lambda t3: F(t1, t2, t3), 0, 1 - t1 - t2, epsabs=1e-13)[0] ** 2

    J, _ = integrate.nquad(inner, [lambda t1: (0, 1 - t1), (0, 1)], opts={"epsabs": 1e-13})
    return I, J


@pytest.mark.parametrize("r", [1, 2, 3])
def test_quadrature_cross_check(r):
    basis = symmetric_basis(r, 2)
    rng = np.random.default_rng(r)
    coeffs = tuple(Fraction(int(v), 7) for v in rng.integers(-9, 10, size=len(basis)))
    F = SymmetricPolynomial(r, basis, coeffs)
    I, J = _quad_I_J(F, r)
    assert abs(float(compute_I(F)) - I) < 1e-9
    assert abs(float(compute_J(F)) - J) < 1e-9


@given(st.integers(1, 4), st.lists(st.integers(-20, 20), min_size=1, max_size=10))
@settings(max_examples=60, deadline=None)
def test_ratio_in_unit_interval(r, raw):
    basis = symmetric_basis(r, 3)[: len(raw)]
    coeffs = tuple(Fraction(v, 3) for v in raw[: len(basis)])
    F = SymmetricPolynomial(r, basis, coeffs)
    I, J = compute_I(F), compute_J(F)
    if I == 0:
        assert J == 0
    else:
        assert 0 <= J / I <= 1


def test_r1_ratio_is_one():
    for d in range(0, 5):
        assert abs(maximize_ratio(1, d).ratio - 1) < 1e-9


def test_r2_degree0_exact():
    res = maximize_ratio(2, 0)
    assert res.certified_ratio == Fraction(2, 3)
    assert abs(res.ratio - 2 / 3) < 1e-15


def test_r5_against_log_bound():
    res = maximize_ratio(5, 3)
    assert res.ratio >= 2 / 6
    assert check_cIJ_bound(5, res.ratio, Fraction(1, 4)).passed
    assert res.ratio >= 0.25 * math.log(5) / 5


def test_monotone_in_degree():
    for r in (2, 3, 4):
        ratios = [maximize_ratio(r, d).ratio for d in range(0, 5)]
        assert all(b >= a - 1e-12 for a, b in zip(ratios, ratios[1:]))


def test_scale_invariance():
    res = maximize_ratio(3, 3)
    base = quadratic_form(res.gram_J, res.coefficients) / quadratic_form(res.gram_I, res.coefficients)
    for lam in (Fraction(-3), Fraction(1, 9), Fraction(1000)):
        c = [lam * x for x in res.coefficients]
        assert quadratic_form(res.gram_J, c) / quadratic_form(res.gram_I, c) == base
    assert abs(float(base) - res.ratio) < 1e-10


def test_certified_ratio_is_lower_bound_up_to_rounding():
    res = maximize_ratio(4, 4)
    assert res.certified_ratio <= Fraction(res.ratio) + Fraction(1, 10**9)
    assert abs(float(res.certified_ratio) - res.ratio) < 1e-9
    assert res.residual <= 1e-10


def test_gram_I_positive_definite():
    res = maximize_ratio(4, 3)
    w = np.linalg.eigvalsh(np.array([[float(x) for x in row] for row in res.gram_I]))
    assert w.min() > 0


def test_check_cIJ():
    chk = check_cIJ_bound(2, Fraction(2, 3), Fraction(1, 4))
    assert chk.passed and abs(chk.margin - 0.580) < 1e-3
    edge = 0.25 * math.log(7) / 7
    chk = check_cIJ_bound(7, edge, Fraction(1, 4))
    assert chk.passed and chk.margin == 0
    assert check_cIJ_bound(8, Fraction(2, 9), Fraction(1, 4)).passed
    with pytest.raises(DomainError):
        check_cIJ_bound(1, 1)


def test_to_dict_rational_strings():
    d = maximize_ratio(2, 1).to_dict()
    assert d["basis_size"] == 2
    assert all(isinstance(c, str) for c in d["coefficients"])
    Fraction(d["certified_ratio"])
