from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaplab.errors import DomainError
from gaplab.primes import is_prime, primes_upto
from gaplab.sieve_lab import (
    ap_prime_count,
    brun_titchmarsh_check,
    brun_titchmarsh_sweep,
    brute_force_Gk,
    gap_records,
    max_gap_Gk,
    mertens_product,
    random_coprime_pairs,
    ub_pair_count,
    ub_pair_sweep,
)


@pytest.mark.parametrize("X,k,value,witness", [
    (30, 1, 6, (23, 29)),
    (30, 2, 4, (19, 23, 29)),
    (100, 1, 8, (89, 97)),
])
def test_gap_examples(X, k, value, witness):
    rec = max_gap_Gk(X, k)
    assert (rec.value, rec.witness) == (value, witness)
    assert brute_force_Gk(X, k) == (value, witness)


def test_gap_undefined():
    with pytest.raises(DomainError, match="undefined"):
        max_gap_Gk(3, 2)


def test_gap_matches_brute_force_1e5():
    for k in (1, 2, 3):
        rec = max_gap_Gk(10**5, k, segment=7919)
        assert (rec.value, rec.witness) == brute_force_Gk(10**5, k)


@given(st.integers(10, 3000), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_gap_monotone(X, k):
    assume_ok = len(primes_upto(X)) >= k + 2
    if not assume_ok:
        return
    a = max_gap_Gk(X, k).value
    assert max_gap_Gk(X + 50, k).value >= a
    assert max_gap_Gk(X, k + 1).value <= a


def test_gap_records_are_strict():
    recs = gap_records(10**5, 1)
    vals = [r.value for r in recs]
    assert vals == sorted(set(vals))
    assert recs[-1].value == 72
    assert all(r.X == r.witness[-1] for r in recs)


def test_mertens():
    assert mertens_product(2).product == pytest.approx(2.0, abs=1e-15)
    assert abs(mertens_product(10**4).ratio - 1) < 0.005
    assert abs(mertens_product(10**6).ratio - 1) < 0.01
    dist = [abs(mertens_product(10**e).ratio - 1) for e in range(3, 7)]
    assert all(b < a for a, b in zip(dist, dist[1:]))
    with pytest.raises(DomainError):
        mertens_product(1)


def test_brun_titchmarsh_examples():
    r = brun_titchmarsh_check(100, 3, 1)
    assert r.count == 11 and r.holds and r.bound == pytest.approx(28.518, abs=1e-3)
    assert brun_titchmarsh_check(100, 3, 2).count == 13
    with pytest.raises(DomainError):
        brun_titchmarsh_check(100, 100, 1)
    with pytest.raises(DomainError):
        brun_titchmarsh_check(100, 6, 3)


def test_brun_titchmarsh_sweep():
    res = brun_titchmarsh_sweep(10**4, 50)
    assert all(r.holds for r in res)
    # every prime up to x lands in exactly one class modulo each q
    by_q = {}
    for r in res:
        by_q[r.q] = by_q.get(r.q, 0) + r.count
    ps = primes_upto(10**4)
    for q, total in by_q.items():
        assert total == sum(1 for p in ps.tolist() if math.gcd(p, q) == 1)


def _brute_pairs(P, Z, a, b):
    return sum(1 for z in range(1, Z + 1) if is_prime(P * z + a) and is_prime(P * z + b))


def test_ub_examples():
    r = ub_pair_count(5, 1, 1000, 7, 11)
    assert r.count == _brute_pairs(30, 1000, 7, 11)
    assert r.bound == pytest.approx(1377.6145, abs=1e-3) and r.holds and r.toy_regime
    z = ub_pair_count(5, 1, 1000, 6, 11)
    assert z.count == 0 and z.short_circuit
    r = ub_pair_count(7, 7, 100, 7, 11)
    assert r.count == _brute_pairs(30, 100, 7, 11)
    with pytest.raises(DomainError):
        ub_pair_count(5, 1, 100, 7, 7)


def test_ub_miller_rabin_path_agrees_with_sieve(monkeypatch):
    import gaplab.sieve_lab as sl
    a = ub_pair_count(7, 1, 500, 11, 13)
    monkeypatch.setattr(sl, "COUNT_SIEVE_LIMIT", 10)
    b = ub_pair_count(7, 1, 500, 11, 13)
    assert a == b


@pytest.mark.parametrize("x,P", [(5, 30), (7, 210), (11, 2310)])
def test_ub_surrogate_holds(x, P):
    res = ub_pair_sweep(x, 1, 10**4, 50, seed=7)
    assert len(res) == 50
    assert all(r.holds for r in res)
    assert all(math.gcd(r.a * r.b, P) == 1 for r in res)


def test_ap_count():
    r = ap_prime_count(5, 1, 7, 100)
    assert r.count == sum(1 for z in range(1, 101) if is_prime(30 * z + 7))
    assert r.reference_lower > 0
    with pytest.raises(DomainError):
        ap_prime_count(5, 1, 15, 100)


@given(st.integers(2, 400))
@settings(max_examples=30, deadline=None)
def test_ap_count_monotone(Z):
    assert ap_prime_count(5, 1, 7, Z + 10).count >= ap_prime_count(5, 1, 7, Z).count


def test_coprime_pairs_seeded():
    a = random_coprime_pairs(210, 20, 3)
    assert a == random_coprime_pairs(210, 20, 3)
    assert all(x != y and math.gcd(x * y, 210) == 1 for x, y in a)
    assert np.all(np.array(a) <= 210)
