"""Component constants from zero-free regions, zero density and the Selberg sieve.

The analytic inputs (McCurley's zero-free regions, Gallagher's and Jutila's
estimates, the Halberstam-Richert upper bound sieve) enter only through
their constants; this module carries out the arithmetic that turns those
constants into ``C_PAP``, ``D_PAP`` and ``C_UB``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import arith
from .errors import DomainError
from .primes import is_prime, primes_upto
from .trace import Check, DerivationTrace, TraceNode

#: McCurley's zero-free region constant, truncated as published ("9.6459...")
MCCURLEY_R = Fraction("9.6459")
DEFAULT_C_ZFR = Fraction(1, 24)
#: split point between Jutila's range and the trivial estimate
JUTILA_ALPHA_MIN = Fraction(4, 5)


@dataclass(frozen=True)
class ZeroRegionConstants:
    R: Fraction
    R1: arith.Interval
    c_ZFR: Fraction
    a: Fraction
    c_ZD: int
    jutila_exp: Fraction
    trivial_exp: Fraction

    def __post_init__(self):
        if not arith.certainly_less(self.c_ZFR, 1 / (4 * self.R1)):
            raise DomainError("c_ZFR must lie strictly below 1/(4 R1)")
        if self.a != Fraction(3, 10) * self.c_ZFR:
            raise DomainError("Gallagher exponent must equal (3/10) c_ZFR")
        if not self.c_ZD > max(self.jutila_exp, self.trivial_exp):
            raise DomainError("c_ZD must exceed both density exponents")


@dataclass(frozen=True)
class RhoInput:
    p: int
    a: int
    b: int
    B0: int
    x: float


@dataclass(frozen=True)
class RhoCase:
    """Outcome of the local-density case analysis at one prime.

    ``case`` is ``"I"``, ``"II"``, ``"III"`` or ``"zero"``; the last one
    means ``p`` divides ``a*b`` for a sieving prime, so the pair count is
    identically zero and ``rho`` is ``None``.
    """

    case: str
    rho: int | None


def mccurley_constants():
    """Return ``(R, R1)`` with ``R1 = (5 - sqrt 5) / (15 - 10 sqrt 2)``."""
    R = arith.to_iv(MCCURLEY_R)
    R1 = (5 - arith.sqrt(5)) / (15 - 10 * arith.sqrt(2))
    return R, R1


def zfr_admissible(c_ZFR, R1=None) -> bool:
    """True when ``c_ZFR < 1/(4 R1)`` holds rigorously."""
    if R1 is None:
        R1 = mccurley_constants()[1]
    return arith.certainly_less(arith.to_iv(c_ZFR), 1 / (4 * R1))


def gallagher_a(c_ZFR):
    """Gallagher's exponent ``a = (3/10) c_ZFR``; exact for rational input."""
    if arith.is_interval(c_ZFR):
        if not arith.certainly_positive(c_ZFR):
            raise DomainError("c_ZFR must be positive")
        return c_ZFR * 3 / 10
    c = arith.parse_number(c_ZFR)
    if c <= 0:
        raise DomainError("c_ZFR must be positive")
    return Fraction(3, 10) * c


def jutila_exponent(eps=0) -> Fraction:
    # (Q^2 T)^{(2+eps)(1-alpha)} with Q = T
    return 3 * (2 + arith.parse_number(eps))


def trivial_exponent(alpha_split=JUTILA_ALPHA_MIN) -> Fraction:
    # T^3 log T against T^{e(1-alpha)} for alpha <= alpha_split
    return Fraction(3) / (1 - arith.parse_number(alpha_split))


def zero_density_exponent(jutila_exp, trivial_exp) -> int:
    """Smallest integer strictly greater than both exponents."""
    j = arith.parse_number(jutila_exp)
    t = arith.parse_number(trivial_exp)
    if j <= 0 or t <= 0:
        raise DomainError("density exponents must be positive")
    return math.floor(max(j, t)) + 1


def derive_PAP(c_ZD, a):
    """``D_PAP = 10 c_ZD`` and ``C_PAP = 1 - exp(-a D_PAP)``."""
    c_zd = arith.parse_number(c_ZD)
    if c_zd <= 0:
        raise DomainError("c_ZD must be positive")
    D = 10 * c_zd
    a_iv = arith.to_iv(a)
    if not arith.certainly_positive(a_iv):
        raise DomainError("a must be positive")
    C = 1 - arith.exp(-a_iv * arith.to_iv(D))
    return (int(D) if D.denominator == 1 else D), C


def selberg_CUB(x=10**5):
    """``C_UB = 2^2 * 2! * e^{2 gamma}`` and its finite-x Mertens ratio.

    ``finite_ratio`` is ``prod_{p<=x} (1-1/p)^{-2} / (e^gamma log x)^2``,
    computed from the actual primes up to ``x``; it tends to 1.
    """
    if x < 10:
        raise DomainError("x must be at least 10")
    C_UB = 4 * 2 * arith.exp(2 * arith.euler_gamma())
    ps = primes_upto(math.floor(x)).astype(float)
    log_prod = -2.0 * math.fsum(np.log1p(-1.0 / ps))
    gamma = float(arith.midpoint(arith.euler_gamma()))
    finite_ratio = math.exp(log_prod - 2.0 * (gamma + math.log(math.log(x))))
    return C_UB, finite_ratio


def rho_classify(inp: RhoInput, P=None) -> RhoCase:
    """Number of roots of ``(P n + a)(P n + b) = 0 (mod p)``.

    ``P`` is the primorial of ``x`` divided by ``B0``; when given it is
    checked against ``p`` (it must be divisible by ``p`` exactly when ``p``
    is a sieving prime).
    """
    p, a, b, B0, x = int(inp.p), int(inp.a), int(inp.b), int(inp.B0), inp.x
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if B0 != 1 and not is_prime(B0):
        raise DomainError("B0 must be 1 or a prime")
    if B0 > x:
        raise DomainError("B0 must not exceed x")
    sieving = p <= x and p != B0
    if P is not None and (int(P) % p == 0) != sieving:
        raise DomainError(f"P is inconsistent with p={p}, x={x}, B0={B0}")
    if sieving:
        if (a * b) % p == 0:
            return RhoCase("zero", None)
        return RhoCase("I", 0)
    roots = 1 if (a - b) % p == 0 else 2
    return RhoCase("II" if p == B0 else "III", roots)


def hr_pair_upper_bound(x, Z, C_UB, *, strict=True) -> float:
    """``C_UB (log x / log Z)^2 Z``, the pair-count bound.

    The asymptotic requirement ``log x = o(log Z)`` is enforced as
    ``log Z >= 10 log x`` unless ``strict`` is false.
    """
    if x <= 1 or Z <= 1:
        raise DomainError("need x > 1 and Z > 1")
    lx, lz = math.log(x), math.log(Z)
    if strict and lz < 10 * lx:
        raise DomainError("log x = o(log Z) operationalised as log Z >= 10 log x is violated")
    c = arith.midpoint(C_UB) if arith.is_interval(C_UB) else float(C_UB)
    return c * (lx / lz) ** 2 * Z


def _node(name, value, formula, **kw):
    return TraceNode(name, arith.to_iv(value), formula, **kw)


def zero_region_chain(c_ZFR=DEFAULT_C_ZFR, jutila_exp=None, trivial_exp=None, R=MCCURLEY_R):
    """Run the whole chain and return ``(constants, D_PAP, C_PAP, C_UB, trace)``."""
    c_ZFR = arith.parse_number(c_ZFR)
    R = arith.parse_number(R)
    jutila_exp = jutila_exponent() if jutila_exp is None else arith.parse_number(jutila_exp)
    trivial_exp = trivial_exponent() if trivial_exp is None else arith.parse_number(trivial_exp)
    _, R1 = mccurley_constants()
    bound = 1 / (4 * R1)
    a = gallagher_a(c_ZFR)
    c_ZD = zero_density_exponent(jutila_exp, trivial_exp)
    D_PAP, C_PAP = derive_PAP(c_ZD, a)
    C_UB, _ = selberg_CUB(10)
    consts = ZeroRegionConstants(R, R1, c_ZFR, a, c_ZD, jutila_exp, trivial_exp)

    leaves = (
        _node("R", R, "McCurley zero-free region constant (truncated literal)", source="external"),
        _node("R1", R1, "(5 - sqrt 5)/(15 - 10 sqrt 2)"),
        _node("inv_4R1", bound, "1/(4 R1)", depends_on=("R1",)),
        _node("c_ZFR", c_ZFR, "zero-free region constant, must be < 1/(4 R1)", source="input"),
        _node("a", a, "(3/10) c_ZFR", depends_on=("c_ZFR",)),
        _node("jutila_exp", jutila_exp, "3 (2 + eps), eps = 0", source="input"),
        _node("trivial_exp", trivial_exp, "3 / (1 - 4/5)", source="input"),
        _node("c_ZD", c_ZD, "floor(max(jutila_exp, trivial_exp)) + 1",
              depends_on=("jutila_exp", "trivial_exp")),
        _node("D_PAP", D_PAP, "10 c_ZD", depends_on=("c_ZD",)),
        _node("C_PAP", C_PAP, "1 - exp(-a D_PAP)", depends_on=("a", "D_PAP")),
        _node("C_UB", C_UB, "2^2 * 2! * e^(2 gamma)"),
    )
    root = TraceNode("component_constants", C_PAP, "zero-region chain", children=leaves)
    checks = (
        Check("c_ZFR < 1/(4 R1)", zfr_admissible(c_ZFR, R1),
              f"c_ZFR = {float(c_ZFR):.6g}, 1/(4 R1) = {arith.midpoint(bound):.6g}"),
    )
    return consts, D_PAP, C_PAP, C_UB, DerivationTrace(root, checks)
