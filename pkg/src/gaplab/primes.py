"""Prime enumeration kernel: one-shot and segmented Eratosthenes, Miller-Rabin."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, SieveCapError

#: largest span ``hi - lo`` a single table may cover (packed: span/8 bytes)
MAX_SPAN = 2 * 10**9
DEFAULT_SEGMENT = 1 << 20

# Deterministic for n < 3.3170044064679e24 (Sorenson & Webster).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
MR_LIMIT = 3_317_044_064_679_887_385_961_981


def simple_sieve(n: int) -> np.ndarray:
    """Boolean primality flags for ``0..n`` from a single unsegmented sieve."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    flags = np.ones(n + 1, dtype=bool)
    flags[: min(2, n + 1)] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def primes_upto(n: int) -> np.ndarray:
    if n < 2:
        return np.empty(0, dtype=np.int64)
    return np.flatnonzero(simple_sieve(n)).astype(np.int64)


@dataclass(frozen=True)
class PrimeTable:
    """Prime membership on the half-open range ``(lo, hi]``, stored as packed bits."""

    lo: int
    hi: int
    bits: bytes

    @property
    def span(self) -> int:
        return self.hi - self.lo

    @cached_property
    def _mask(self) -> np.ndarray:
        packed = np.frombuffer(self.bits, dtype=np.uint8)
        out = np.unpackbits(packed, count=self.span).astype(bool)
        out.flags.writeable = False
        return out

    def mask(self) -> np.ndarray:
        """Boolean array; index ``i`` stands for the integer ``lo + 1 + i``."""
        return self._mask

    def primes(self) -> np.ndarray:
        return np.flatnonzero(self._mask).astype(np.int64) + (self.lo + 1)

    def count(self) -> int:
        return int(np.count_nonzero(self._mask))

    def __contains__(self, n) -> bool:
        n = int(n)
        if not self.lo < n <= self.hi:
            raise DomainError(f"{n} outside table range ({self.lo}, {self.hi}]")
        return bool(self._mask[n - self.lo - 1])

    def __len__(self) -> int:
        return self.count()

    @classmethod
    def from_mask(cls, lo: int, hi: int, mask: np.ndarray) -> PrimeTable:
        if mask.shape != (hi - lo,):
            raise ValueError("mask length must equal hi - lo")
        return cls(lo, hi, np.packbits(mask.astype(np.uint8)).tobytes())

    def join(self, other: PrimeTable) -> PrimeTable:
        """Concatenate with an adjacent table covering ``(self.hi, other.hi]``."""
        if other.lo != self.hi:
            raise DomainError("tables are not adjacent")
        return PrimeTable.from_mask(self.lo, other.hi, np.concatenate([self.mask(), other.mask()]))


def _sieve_segment(start: int, stop: int, base: np.ndarray) -> np.ndarray:
    # integers start..stop-1
    seg = np.ones(stop - start, dtype=bool)
    if start < 2:
        seg[: min(2 - start, stop - start)] = False
    for p in base.tolist():
        pp = p * p
        if pp >= stop:
            break
        first = max(pp, -(-start // p) * p)
        if first < stop:
            seg[first - start :: p] = False
    return seg


def segmented_sieve(lo: int, hi: int, *, segment=DEFAULT_SEGMENT, threads=1, max_span=None) -> PrimeTable:
    """Exact prime membership on ``(lo, hi]``.

    Segments are sieved independently (optionally on a thread pool) and
    concatenated in order, so the result does not depend on ``threads``.
    """
    lo, hi = int(lo), int(hi)
    if lo < 0 or hi < lo:
        raise DomainError(f"need 0 <= lo <= hi, got ({lo}, {hi})")
    cap = MAX_SPAN if max_span is None else max_span
    if hi - lo > cap:
        raise SieveCapError(f"span {hi - lo} exceeds sieve cap {cap}")
    if hi == lo:
        return PrimeTable(lo, hi, b"")
    base = primes_upto(math.isqrt(hi))
    bounds = [(s, min(s + segment, hi + 1)) for s in range(lo + 1, hi + 1, segment)]
    if threads > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: _sieve_segment(b[0], b[1], base), bounds))
    else:
        parts = [_sieve_segment(a, b, base) for a, b in bounds]
    return PrimeTable.from_mask(lo, hi, np.concatenate(parts))


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for ``n`` below :data:`MR_LIMIT`."""
    n = int(n)
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    if n >= MR_LIMIT:
        raise DomainError(f"{n} beyond the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    n = int(n)
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(q: int) -> int:
    result = q
    for p in factorize(q):
        result -= result // p
    return result


def primorial(x) -> int:
    """Product of all primes ``<= x``."""
    return math.prod(int(p) for p in primes_upto(math.floor(x)))
