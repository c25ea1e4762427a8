"""Radius-tracked high-precision interval arithmetic helpers.

All explicit constants are evaluated in a private ``mpmath`` interval
context so that callers who change ``mpmath.mp.dps`` (or ``mpmath.iv.dps``)
do not perturb results, and results are reproducible bit for bit.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from mpmath.ctx_iv import MPIntervalContext

from .errors import DomainError

WORKING_DPS = 60

iv = MPIntervalContext()
iv.dps = WORKING_DPS

Interval = type(iv.mpf(1))


def is_interval(value) -> bool:
    # mpmath constants such as iv.euler are a distinct class exposing _mpi_
    return hasattr(value, "_mpi_")


def parse_number(text) -> Fraction:
    """Parse ``"1/3"``, ``"0.25"``, ``"1e-3"`` or an int into an exact rational."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, (int, Rational)):
        return Fraction(text)
    if isinstance(text, float):
        if not math.isfinite(text):
            raise DomainError(f"non-finite number {text!r}")
        return Fraction(text)
    s = str(text).strip()
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse {text!r} as a decimal or rational") from exc


def to_iv(value) -> Interval:
    """Enclose ``value`` in an interval of the private context.

    Rationals become tight enclosures of their exact value; intervals pass
    through untouched.
    """
    if isinstance(value, Interval):
        return value
    if is_interval(value):
        return +value
    if isinstance(value, bool):
        raise DomainError("booleans are not numbers here")
    if isinstance(value, int):
        return iv.mpf(value)
    if isinstance(value, float):
        return iv.mpf(Fraction(value).numerator) / Fraction(value).denominator
    q = parse_number(value)
    return iv.mpf(q.numerator) / q.denominator


def _raw_to_fraction(raw) -> Fraction:
    sign, man, exp, _ = raw
    if not man:
        if exp:
            raise DomainError("interval endpoint is infinite or nan")
        return Fraction(0)
    value = Fraction(int(man)) * (Fraction(2) ** exp)
    return -value if sign else value


def endpoints(v) -> tuple[Fraction, Fraction]:
    """Exact rational lower and upper endpoints of ``v``."""
    v = to_iv(v)
    lo, hi = v._mpi_
    return _raw_to_fraction(lo), _raw_to_fraction(hi)


def midpoint(v) -> float:
    lo, hi = endpoints(v)
    return float((lo + hi) / 2)


def radius(v) -> float:
    lo, hi = endpoints(v)
    return float((hi - lo) / 2)


def relative_width(v) -> float:
    """Width divided by magnitude of the midpoint; 0 for exact points."""
    lo, hi = endpoints(v)
    if lo == hi:
        return 0.0
    mid = abs(lo + hi) / 2
    if mid == 0:
        return math.inf
    return float((hi - lo) / mid)


def certainly_less(a, b) -> bool:
    return endpoints(a)[1] < endpoints(b)[0]


def possibly_within(v, lo, hi) -> bool:
    """False only when ``v`` lies certainly outside ``[lo, hi]``."""
    return endpoints(v)[0] <= endpoints(hi)[1] and endpoints(v)[1] >= endpoints(lo)[0]


def certainly_positive(a) -> bool:
    return endpoints(a)[0] > 0


def iv_floor(v) -> int:
    """Floor of an interval, which must not straddle an integer."""
    lo, hi = endpoints(v)
    f_lo, f_hi = math.floor(lo), math.floor(hi)
    if f_lo != f_hi:
        raise DomainError(f"floor is ambiguous for interval [{float(lo)!r}, {float(hi)!r}]")
    return f_lo


def iterated_log(x, n: int) -> Interval:
    """``log`` applied ``n`` times; every intermediate value must be positive."""
    v = to_iv(x)
    for i in range(n):
        if not certainly_positive(v):
            raise DomainError(f"log_{i + 1} undefined: argument not positive")
        v = iv.log(v)
    return v


def euler_gamma() -> Interval:
    return +iv.euler


def exp(v) -> Interval:
    return iv.exp(to_iv(v))


def log(v) -> Interval:
    v = to_iv(v)
    if not certainly_positive(v):
        raise DomainError("log of a non-positive quantity")
    return iv.log(v)


def sqrt(v) -> Interval:
    return iv.sqrt(to_iv(v))


def format_directed(q: Fraction, digits: int, *, up: bool) -> str:
    """Decimal string of ``q`` with ``digits`` significant digits, rounded outward.

    ``up=False`` rounds toward -inf and ``up=True`` toward +inf, so a pair of
    calls on the endpoints yields a printed enclosure of the interval.
    """
    if q == 0:
        return "0"
    neg = q < 0
    a = -q if neg else q
    e = math.floor(math.log10(a.numerator) - math.log10(a.denominator))
    # correct the estimate of the decimal exponent exactly
    while Fraction(10) ** e > a:
        e -= 1
    while Fraction(10) ** (e + 1) <= a:
        e += 1
    scale = Fraction(10) ** (digits - 1 - e)
    scaled = a * scale
    # for negatives, rounding the magnitude up moves toward -inf
    toward_larger_magnitude = up != neg
    n = math.ceil(scaled) if toward_larger_magnitude else math.floor(scaled)
    mant = str(n)
    exp10 = e - (digits - 1)
    if len(mant) > digits:
        mant = mant[:-1]
        exp10 += 1
    body = f"{mant[0]}.{mant[1:]}" if len(mant) > 1 else mant
    exp_shift = exp10 + len(mant) - 1
    return f"{'-' if neg else ''}{body}e{exp_shift:+d}"
