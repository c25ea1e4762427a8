"""Exact I/J functionals on the simplex and maximisation of J/I.

A symmetric polynomial is stored in the basis of symmetrised monomials
``m_lambda = sum of t^alpha over the distinct permutations alpha of lambda``,
where ``lambda`` is a partition (exponent multiset). Both quadratic forms
reduce to Dirichlet integrals

    int_{R_n} t^a (1 - t_1 - ... - t_n)^b dt = prod(a_i!) b! / (n + |a| + b)!

and are therefore exact rationals.
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import ConditioningError, DomainError

#: reject bases whose equilibrated Gram matrix of I is worse conditioned
MAX_CONDITION = 1e13
#: tolerance on the generalised eigen-residual, relative
RESIDUAL_TOL = 1e-10
COEFF_DENOMINATOR = 10**9


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return math.factorial(n)


@lru_cache(maxsize=1 << 20)
def dirichlet_integral(exps: tuple, tail: int = 0) -> Fraction:
    """``int_{R_n} t^exps (1 - sum t)^tail``, with ``n = len(exps)``."""
    num = _fact(tail)
    for e in exps:
        num *= _fact(e)
    return Fraction(num, _fact(len(exps) + sum(exps) + tail))


def simplex_monomial_integral(r: int, exponents) -> Fraction:
    """Integral of ``prod t_i^{a_i}`` over the simplex ``R_r``: ``prod a_i! / (r + sum a)!``."""
    exps = tuple(int(a) for a in exponents)
    if len(exps) != r:
        raise DomainError(f"expected {r} exponents, got {len(exps)}")
    if any(a < 0 for a in exps):
        raise DomainError("exponents must be nonnegative")
    return dirichlet_integral(exps, 0)


def partitions(degree: int, parts: int):
    """Partitions of every total ``0..degree`` into at most ``parts`` parts.

    Returned as non-increasing tuples without zeros, ordered by total degree
    and then reverse-lexicographically.
    """
    out = []

    def rec(remaining, max_part, prefix):
        if len(prefix) <= parts:
            if sum(prefix) == target:
                out.append(tuple(prefix))
                return
        if len(prefix) == parts:
            return
        for p in range(min(max_part, remaining), 0, -1):
            rec(remaining - p, p, prefix + [p])

    for target in range(degree + 1):
        rec(target, target, [])
    return out


def symmetric_basis(r: int, degree: int):
    if r < 1:
        raise DomainError("r must be at least 1")
    if degree < 0:
        raise DomainError("degree must be nonnegative")
    return tuple(partitions(degree, r))


def _pad(lam, r):
    return tuple(lam) + (0,) * (r - len(lam))


def _multiset_permutations(counts: dict):
    # distinct permutations of a multiset given as value -> multiplicity
    keys = sorted(counts, reverse=True)
    total = sum(counts.values())
    cur = []

    def rec():
        if len(cur) == total:
            yield tuple(cur)
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                cur.append(k)
                yield from rec()
                cur.pop()
                counts[k] += 1

    yield from rec()


@lru_cache(maxsize=None)
def orbit(lam: tuple, r: int) -> tuple:
    """Distinct permutations of ``lam`` padded with zeros to length ``r``."""
    return tuple(_multiset_permutations(dict(Counter(_pad(lam, r)))))


def orbit_size(vec) -> int:
    n = _fact(len(vec))
    for m in Counter(vec).values():
        n //= _fact(m)
    return n


@dataclass(frozen=True)
class SymmetricPolynomial:
    """``F = sum_i coefficients[i] * m_{basis[i]}`` in ``r`` variables."""

    r: int
    basis: tuple
    coefficients: tuple

    def __post_init__(self):
        if self.r < 1:
            raise DomainError("r must be at least 1")
        if len(self.basis) != len(self.coefficients):
            raise DomainError("basis and coefficients differ in length")
        basis = tuple(tuple(sorted((int(e) for e in lam if e), reverse=True)) for lam in self.basis)
        if any(len(lam) > self.r for lam in basis):
            raise DomainError("a basis partition has more parts than variables")
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @classmethod
    def constant(cls, r, value=1):
        return cls(r, ((),), (Fraction(value),))

    @property
    def degree(self) -> int:
        return max((sum(lam) for lam, c in zip(self.basis, self.coefficients) if c), default=0)

    def scaled(self, factor) -> SymmetricPolynomial:
        f = Fraction(factor)
        return SymmetricPolynomial(self.r, self.basis, tuple(c * f for c in self.coefficients))

    def monomials(self) -> dict:
        """Expansion into ordinary monomials ``{exponent tuple: coefficient}``."""
        out: dict = defaultdict(Fraction)
        for lam, c in zip(self.basis, self.coefficients):
            if c:
                for alpha in orbit(lam, self.r):
                    out[alpha] += c
        return {k: v for k, v in out.items() if v}

    def __call__(self, *t) -> float:
        total = 0.0
        for alpha, c in self.monomials().items():
            total += float(c) * math.prod(ti**a for ti, a in zip(t, alpha))
        return total


# -- bilinear forms by direct monomial expansion -------------------------------------


def _inner_I_expanded(F: SymmetricPolynomial, G: SymmetricPolynomial) -> Fraction:
    fm, gm = F.monomials(), G.monomials()
    total = Fraction(0)
    for a, ca in fm.items():
        for b, cb in gm.items():
            total += ca * cb * dirichlet_integral(tuple(x + y for x, y in zip(a, b)), 0)
    return total


def _marginal(F: SymmetricPolynomial) -> dict:
    # int_0^{1-s} F dt_r as {(alpha', power of (1-s)): coefficient}
    out: dict = defaultdict(Fraction)
    for alpha, c in F.monomials().items():
        out[(alpha[:-1], alpha[-1] + 1)] += c / (alpha[-1] + 1)
    return out


def _inner_J_expanded(F: SymmetricPolynomial, G: SymmetricPolynomial) -> Fraction:
    fm, gm = _marginal(F), _marginal(G)
    total = Fraction(0)
    for (a, pa), ca in fm.items():
        for (b, pb), cb in gm.items():
            total += ca * cb * dirichlet_integral(tuple(x + y for x, y in zip(a, b)), pa + pb)
    return total


def compute_I(F: SymmetricPolynomial) -> Fraction:
    """``I_r(F) = int_{R_r} F^2``, exactly."""
    return _inner_I_expanded(F, F)


def compute_J(F: SymmetricPolynomial) -> Fraction:
    """``J_r(F) = int_{R_{r-1}} (int_0^{1 - t_1 - ... - t_{r-1}} F dt_r)^2``, exactly.

    For ``r = 1`` the outer integral is empty and ``J_1(F) = (int_0^1 F)^2``.
    """
    return _inner_J_expanded(F, F)


# -- Gram matrices by orbit sums with symmetry reduction --------------------------


def _gram_I_entry(lam, mu, r):
    a = _pad(lam, r)
    s = sum(dirichlet_integral(tuple(x + y for x, y in zip(a, b)), 0) for b in orbit(mu, r))
    return orbit_size(a) * s


def _gram_J_entry(lam, mu, r):
    a = _pad(lam, r)
    total = Fraction(0)
    for e in sorted(set(a)):
        rest = list(a)
        rest.remove(e)
        rest = tuple(sorted(rest, reverse=True))
        weight = orbit_size(rest)
        s = Fraction(0)
        for b in orbit(mu, r):
            s += dirichlet_integral(tuple(x + y for x, y in zip(rest, b[:-1])), e + b[-1] + 2) / (
                (e + 1) * (b[-1] + 1))
        total += weight * s
    return total


def gram_matrices(r: int, basis, method: str = "orbit"):
    """Exact Gram matrices ``(G_I, G_J)`` of both quadratic forms on ``basis``.

    ``method="orbit"`` sums over orbits with the permutation symmetry folded
    out; ``method="expand"`` expands every basis element into monomials.
    The two must agree exactly.
    """
    n = len(basis)
    GI = [[Fraction(0)] * n for _ in range(n)]
    GJ = [[Fraction(0)] * n for _ in range(n)]
    if method == "expand":
        polys = [SymmetricPolynomial(r, (lam,), (1,)) for lam in basis]
    elif method != "orbit":
        raise DomainError(f"unknown method {method!r}")
    for i in range(n):
        for j in range(i, n):
            if method == "orbit":
                gi, gj = _gram_I_entry(basis[i], basis[j], r), _gram_J_entry(basis[i], basis[j], r)
            else:
                gi, gj = _inner_I_expanded(polys[i], polys[j]), _inner_J_expanded(polys[i], polys[j])
            GI[i][j] = GI[j][i] = gi
            GJ[i][j] = GJ[j][i] = gj
    return tuple(map(tuple, GI)), tuple(map(tuple, GJ))


def quadratic_form(G, coeffs) -> Fraction:
    c = [Fraction(x) for x in coeffs]
    return sum(c[i] * G[i][j] * c[j] for i in range(len(c)) for j in range(len(c)))


@dataclass(frozen=True)
class RatioResult:
    r: int
    degree: int
    ratio: float
    coefficients: tuple
    gram_I: tuple
    gram_J: tuple
    basis: tuple
    residual: float
    certified_ratio: Fraction = field(default=None)

    @property
    def polynomial(self) -> SymmetricPolynomial:
        return SymmetricPolynomial(self.r, self.basis, self.coefficients)

    def to_dict(self):
        return {
            "r": self.r,
            "degree": self.degree,
            "ratio": self.ratio,
            "certified_ratio": str(self.certified_ratio),
            "certified_ratio_float": float(self.certified_ratio),
            "basis_size": len(self.basis),
            "basis": [list(lam) for lam in self.basis],
            "coefficients": [str(c) for c in self.coefficients],
            "residual": self.residual,
        }


def _to_float(G):
    return np.array([[float(x) for x in row] for row in G], dtype=float)


def maximize_ratio(r: int, degree: int) -> RatioResult:
    """Maximise ``J_r(F)/I_r(F)`` over symmetric polynomials of degree ``<= degree``.

    The Gram matrices are assembled exactly; the symmetric-definite
    generalised eigenproblem ``G_J v = lambda G_I v`` is then solved in
    floating point after diagonal equilibration. The top eigenvector is
    rounded to rationals and its exact quotient is reported as
    ``certified_ratio``, a rigorous lower bound for the supremum.
    """
    basis = symmetric_basis(r, degree)
    GI, GJ = gram_matrices(r, basis)
    A, B = _to_float(GJ), _to_float(GI)
    d = 1.0 / np.sqrt(np.diag(B))
    As, Bs = A * np.outer(d, d), B * np.outer(d, d)
    cond = np.linalg.cond(Bs)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise ConditioningError(
            f"Gram matrix of I is ill-conditioned (cond={cond:.3g}) for basis size {len(basis)}")
    w, V = scipy.linalg.eigh(As, Bs)
    lam, v = float(w[-1]), V[:, -1] * d
    res = np.linalg.norm(A @ v - lam * (B @ v)) / max(np.linalg.norm(A @ v) + abs(lam) * np.linalg.norm(B @ v), 1e-300)
    if res > RESIDUAL_TOL:
        raise ConditioningError(f"eigen-residual {res:.3g} exceeds {RESIDUAL_TOL} for basis size {len(basis)}")
    # fix sign and scale so the output is deterministic
    k = int(np.argmax(np.abs(v)))
    v = v / v[k]
    coeffs = tuple(Fraction(float(x)).limit_denominator(COEFF_DENOMINATOR) for x in v)
    certified = quadratic_form(GJ, coeffs) / quadratic_form(GI, coeffs)
    return RatioResult(r, degree, lam, coeffs, GI, GJ, basis, float(res), certified)


@dataclass(frozen=True)
class CIJCheck:
    passed: bool
    margin: float
    threshold: float


def check_cIJ_bound(r: int, ratio, c_IJ=Fraction(1, 4)) -> CIJCheck:
    """Compare a ratio with ``c_IJ log r / r``."""
    if r < 2:
        raise DomainError("r must be at least 2 for the log r / r comparison")
    threshold = float(c_IJ) * math.log(r) / r
    margin = float(ratio) - threshold
    return CIJCheck(margin >= 0, margin, threshold)
