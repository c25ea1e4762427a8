"""Empirical checks built on the prime sieve.

Exact maximal k-gap records, Mertens products, Brun-Titchmarsh counts and
brute-force pair/progression counts at primorial moduli.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from . import arith
from .errors import DomainError
from .primes import DEFAULT_SEGMENT, is_prime, primes_upto, primorial, segmented_sieve, totient
from .zero_region import hr_pair_upper_bound, selberg_CUB

#: largest value sieved directly for pair/progression counts; beyond it Miller-Rabin is used
COUNT_SIEVE_LIMIT = 5 * 10**7
#: default ceiling on X for gap searches
GAP_SEARCH_LIMIT = 10**9


@dataclass(frozen=True)
class GapRecord:
    k: int
    X: int
    value: int
    witness: tuple

    def __post_init__(self):
        w = self.witness
        if len(w) != self.k + 1:
            raise DomainError("witness must hold k+1 primes")
        if min(b - a for a, b in zip(w, w[1:])) != self.value:
            raise DomainError("value is not the minimum gap of the witness")

    def to_row(self):
        return {"k": self.k, "X": self.X, "gap": self.value,
                "witness_primes": ";".join(str(p) for p in self.witness)}


def _window_min(primes: np.ndarray, k: int) -> np.ndarray:
    gaps = np.diff(primes)
    return sliding_window_view(gaps, k).min(axis=1)


def _prime_chunks(X: int, segment: int, threads: int):
    # yields ascending prime arrays covering (0, X]
    for lo in range(0, X, segment):
        hi = min(lo + segment, X)
        yield segmented_sieve(lo, hi, segment=DEFAULT_SEGMENT, threads=threads).primes()


def gap_records(X: int, k: int, *, segment=1 << 24, threads=1, limit=GAP_SEARCH_LIMIT):
    """Every new strict maximum of the k-gap statistic as ``p_{n+k}`` runs up to ``X``.

    The last record is ``G_k(X)``; ties keep the earliest chain.
    """
    X, k = int(X), int(k)
    if k < 1:
        raise DomainError("k must be at least 1")
    if X > limit:
        raise DomainError(f"X = {X} exceeds the gap search limit {limit}")
    best = -1
    records = []
    carry = np.empty(0, dtype=np.int64)
    for chunk in _prime_chunks(X, segment, threads):
        ps = np.concatenate([carry, chunk])
        if len(ps) >= k + 1:
            vals = _window_min(ps, k)
            prior = np.maximum.accumulate(np.concatenate([[best], vals[:-1]]))
            for i in np.flatnonzero(vals > prior).tolist():
                w = tuple(int(p) for p in ps[i : i + k + 1])
                records.append(GapRecord(k, w[-1], int(vals[i]), w))
            best = max(best, int(vals.max()))
        carry = ps[-k:] if len(ps) >= k else ps
    return records


def max_gap_Gk(X: int, k: int = 1, **kw) -> GapRecord:
    """``G_k(X)``: the largest minimum of k successive gaps among chains ending at most ``X``."""
    recs = gap_records(X, k, **kw)
    if not recs:
        raise DomainError(f"G_{k}({X}) is undefined: fewer than {k + 1} primes up to {X}")
    r = recs[-1]
    return GapRecord(r.k, int(X), r.value, r.witness)


def brute_force_Gk(X: int, k: int) -> tuple[int, tuple]:
    """Reference implementation by explicit enumeration of all chains."""
    ps = [int(p) for p in primes_upto(X)]
    best, wit = None, None
    for i in range(len(ps) - k):
        m = min(ps[j + 1] - ps[j] for j in range(i, i + k))
        if best is None or m > best:
            best, wit = m, tuple(ps[i : i + k + 1])
    if best is None:
        raise DomainError("undefined")
    return best, wit


@dataclass(frozen=True)
class MertensResult:
    x: float
    product: float
    ratio: float


def mertens_product(x) -> MertensResult:
    """``prod_{p<=x} (1-1/p)^{-1}`` and its ratio to ``e^gamma log x``."""
    if x < 2:
        raise DomainError("x must be at least 2")
    ps = primes_upto(math.floor(x)).astype(float)
    log_prod = -math.fsum(np.log1p(-1.0 / ps))
    gamma = arith.midpoint(arith.euler_gamma())
    return MertensResult(x, math.exp(log_prod), math.exp(log_prod - gamma - math.log(math.log(x))))


@dataclass(frozen=True)
class BTResult:
    x: int
    q: int
    a: int
    count: int
    bound: float
    holds: bool


def _bt_validate(x, q, a):
    if q < 1:
        raise DomainError("q must be positive")
    if q >= x:
        raise DomainError("need q < x")
    if math.gcd(a, q) != 1:
        raise DomainError(f"gcd({a}, {q}) > 1")


def brun_titchmarsh_check(x: int, q: int, a: int, primes=None) -> BTResult:
    """Compare ``pi(x; q, a)`` with ``2x / (phi(q) log(x/q))``."""
    x, q, a = int(x), int(q), int(a)
    _bt_validate(x, q, a)
    ps = primes_upto(x) if primes is None else primes
    count = int(np.count_nonzero(ps % q == a % q))
    bound = 2 * x / (totient(q) * math.log(x / q))
    return BTResult(x, q, a % q, count, bound, count <= bound)


def brun_titchmarsh_sweep(x: int, qmax: int) -> list[BTResult]:
    """All moduli ``q <= qmax`` (and ``q < x``) and every reduced residue class."""
    ps = primes_upto(int(x))
    out = []
    for q in range(1, min(int(qmax), int(x) - 1) + 1):
        for a in range(q):
            if math.gcd(a, q) == 1:
                out.append(brun_titchmarsh_check(x, q, a, ps))
    return out


def primorial_modulus(x, B0: int) -> int:
    """``P(x) / B0`` with ``B0`` either 1 or a prime not exceeding ``x``."""
    B0 = int(B0)
    if x < 2:
        raise DomainError("x must be at least 2")
    if B0 != 1 and not (is_prime(B0) and B0 <= x):
        raise DomainError("B0 must be 1 or a prime <= x")
    return primorial(x) // B0


def _count_primes(values: np.ndarray, threads=1, table=None) -> np.ndarray:
    """Primality flags for a sorted array of positive integers."""
    if len(values) == 0:
        return np.zeros(0, dtype=bool)
    top = int(values[-1])
    if table is not None and table.lo == 0 and top <= table.hi:
        return table.mask()[values - 1]
    if top <= COUNT_SIEVE_LIMIT:
        mask = segmented_sieve(0, top, threads=threads).mask()
        return mask[values - 1]
    return np.array([is_prime(int(v)) for v in values.tolist()], dtype=bool)


@dataclass(frozen=True)
class PairCountResult:
    x: float
    B0: int
    Z: int
    a: int
    b: int
    count: int
    bound: float
    holds: bool
    toy_regime: bool
    short_circuit: bool


def _sieving_divisor(x, B0, n):
    for p in primes_upto(math.floor(x)).tolist():
        if p != B0 and n % p == 0:
            return p
    return None


def ub_pair_count(x, B0: int, Z: int, a: int, b: int, *, threads=1, table=None) -> PairCountResult:
    """Count ``z in [Z]`` with ``Pz+a`` and ``Pz+b`` both prime, against the pair bound.

    ``toy_regime`` is set when ``log Z < 10 log x``, i.e. when the bound is
    evaluated outside the range in which it is claimed.
    """
    a, b, Z, B0 = int(a), int(b), int(Z), int(B0)
    if a == b:
        raise DomainError("a and b must differ")
    P = primorial_modulus(x, B0)
    if not (1 <= a <= P and 1 <= b <= P):
        raise DomainError(f"a, b must lie in [1, {P}]")
    if Z < 2:
        raise DomainError("Z must be at least 2")
    C_UB, _ = selberg_CUB(10)
    bound = hr_pair_upper_bound(x, Z, C_UB, strict=False)
    toy = math.log(Z) < 10 * math.log(x)
    if _sieving_divisor(x, B0, a * b) is not None:
        return PairCountResult(x, B0, Z, a, b, 0, bound, True, toy, True)
    z = np.arange(1, Z + 1, dtype=np.int64)
    fa = _count_primes(P * z + a, threads, table)
    fb = _count_primes(P * z + b, threads, table)
    count = int(np.count_nonzero(fa & fb))
    return PairCountResult(x, B0, Z, a, b, count, bound, count <= bound, toy, False)


@dataclass(frozen=True)
class APCountResult:
    x: float
    B0: int
    Z: int
    a: int
    count: int
    reference_lower: float


def ap_prime_count(x, B0: int, a: int, Z: int, D_PAP=160, *, threads=1, table=None) -> APCountResult:
    """Count ``z in [Z]`` with ``Pz+a`` prime; the asymptotic lower bound is only reported."""
    a, Z = int(a), int(Z)
    P = primorial_modulus(x, B0)
    if math.gcd(a, P) != 1:
        raise DomainError(f"gcd({a}, {P}) > 1")
    if Z < 2:
        raise DomainError("Z must be at least 2")
    z = np.arange(1, Z + 1, dtype=np.int64)
    count = int(np.count_nonzero(_count_primes(P * z + a, threads, table)))
    gamma = arith.midpoint(arith.euler_gamma())
    ref = math.exp(gamma) / (1 + 1 / float(D_PAP)) * (math.log(x) / math.log(Z)) * Z
    return APCountResult(x, int(B0), Z, a, count, ref)


def random_coprime_pairs(P: int, n: int, seed: int) -> list[tuple[int, int]]:
    """``n`` distinct-element pairs ``(a, b)`` in ``[1, P]`` with ``gcd(ab, P) = 1``."""
    units = [a for a in range(1, P + 1) if math.gcd(a, P) == 1]
    if len(units) < 2:
        raise DomainError(f"fewer than two units modulo {P}")
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        i, j = rng.choice(len(units), size=2, replace=False)
        out.append((units[int(i)], units[int(j)]))
    return out


def ub_pair_sweep(x, B0: int, Z: int, pairs: int, seed: int, *, threads=1) -> list[PairCountResult]:
    """``ub_pair_count`` over seeded random coprime pairs, sharing one sieve."""
    P = primorial_modulus(x, B0)
    top = P * int(Z) + P
    table = segmented_sieve(0, top, threads=threads) if top <= COUNT_SIEVE_LIMIT else None
    return [ub_pair_count(x, B0, Z, a, b, threads=threads, table=table)
            for a, b in random_coprime_pairs(P, pairs, seed)]
