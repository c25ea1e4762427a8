"""Explicit constant chain for large gaps between k consecutive primes.

Every quantity is evaluated as a rigorous interval at ``arith.WORKING_DPS``
decimal digits. ``derive_c_LG`` runs the full chain and records each
intermediate value in a :class:`~gaplab.trace.DerivationTrace`.

Asymptotic ``1 + o(1)`` factors are taken to be exactly 1; trace nodes
that depend on such a replacement carry ``asymptotic=True``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import NamedTuple

from . import arith
from .errors import ConstraintViolation, DomainError
from .trace import Check, DerivationTrace, TraceNode
from .zero_region import (
    DEFAULT_C_ZFR,
    derive_PAP,
    gallagher_a,
    jutila_exponent,
    selberg_CUB,
    trivial_exponent,
    zero_density_exponent,
)

TRACE_RELATIVE_TOLERANCE = 1e-30

#: 12800 * 1800 * 4 * 2 * 4, the denominator of the closed form
CLOSED_FORM_DENOMINATOR = 737_280_000


def _iv_max(a, b):
    a, b = arith.to_iv(a), arith.to_iv(b)
    (alo, ahi), (blo, bhi) = arith.endpoints(a), arith.endpoints(b)
    if alo >= bhi:
        return a
    if blo >= ahi:
        return b
    raise DomainError("max of overlapping intervals is ambiguous")


@dataclass(frozen=True)
class ComponentConstants:
    """Tunable inputs of the explicit theorem.

    Values may be rationals (``Fraction``/``int``/``"1/3"``) or intervals.
    ``M = max(D_PAP, D_UB)`` is always recomputed.
    """

    theta: object = Fraction(1, 3)
    c_IJ: object = Fraction(1, 4)
    C_PAP: object = None
    D_PAP: object = None
    C_UB: object = None
    D_UB: object = Fraction(1)

    def __post_init__(self):
        if self.C_PAP is None or self.D_PAP is None:
            a = gallagher_a(DEFAULT_C_ZFR)
            c_zd = zero_density_exponent(jutila_exponent(), trivial_exponent())
            D, C = derive_PAP(c_zd, a)
            if self.D_PAP is None:
                object.__setattr__(self, "D_PAP", Fraction(D))
            if self.C_PAP is None:
                object.__setattr__(self, "C_PAP", C)
        if self.C_UB is None:
            object.__setattr__(self, "C_UB", selberg_CUB(10)[0])
        for f in fields(self):
            v = getattr(self, f.name)
            if not arith.is_interval(v):
                object.__setattr__(self, f.name, arith.parse_number(v))
        self._check()

    def _check(self):
        lo = {f.name: arith.endpoints(getattr(self, f.name))[0] for f in fields(self)}
        hi = {f.name: arith.endpoints(getattr(self, f.name))[1] for f in fields(self)}
        if not (lo["theta"] > 0 and hi["theta"] < 1):
            raise DomainError("theta must lie in (0, 1)")
        if not lo["c_IJ"] > 0:
            raise DomainError("c_IJ must be positive")
        if not (lo["C_PAP"] > 0 and hi["C_PAP"] <= 1):
            raise DomainError("C_PAP must lie in (0, 1]")
        if not lo["D_PAP"] >= 1:
            raise DomainError("D_PAP must be at least 1")
        if not lo["C_UB"] >= 1:
            raise DomainError("C_UB must be at least 1")
        if not lo["D_UB"] > 0:
            raise DomainError("D_UB must be positive")

    @property
    def M(self):
        return _iv_max(self.D_PAP, self.D_UB)

    @property
    def gamma(self):
        return arith.euler_gamma()

    def replace(self, **changes) -> ComponentConstants:
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return ComponentConstants(**values)

    def as_strings(self) -> dict[str, str]:
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, Fraction):
                out[f.name] = str(v)
            else:
                lo, hi = arith.endpoints(v)
                out[f.name] = f"[{arith.format_directed(lo, 25, up=False)}, {arith.format_directed(hi, 25, up=True)}]"
        return out


@dataclass(frozen=True)
class DerivedParams:
    c: object
    A: object
    c1: object
    epsilon: object
    EN_lower: object
    EN2_upper: object
    prob_lower: object
    c_LG: object
    C_low: object
    C_high: object
    m: int
    A_prime: object
    epsilon0: object
    u: object
    sigma_y_coeff: object


class MomentBounds(NamedTuple):
    EN_lower: object
    EN2_upper: object
    prob_lower: object


class CRange(NamedTuple):
    C_low: object
    C_high: object
    admissible: bool


class MChoice(NamedTuple):
    m: int
    A_prime: object
    feasible: bool
    violations: tuple


class PipelineResult(NamedTuple):
    u: object
    sigma_y_coeff: object
    C: object


def _positive(name, v):
    v = arith.to_iv(v)
    if not arith.certainly_positive(v):
        raise DomainError(f"{name} must be positive")
    return v


def _one_plus_inv(D):
    return 1 + 1 / arith.to_iv(D)


def _mixing_denominator(C_UB, M):
    # 25 C_UB + 20 e^gamma M
    return 25 * arith.to_iv(C_UB) + 20 * arith.exp(arith.euler_gamma()) * arith.to_iv(M)


def derive_sieve_scale_c(theta, c_IJ):
    """``c = theta c_IJ / (12800 log 5)``."""
    theta, c_IJ = _positive("theta", theta), _positive("c_IJ", c_IJ)
    return theta * c_IJ / (12800 * arith.log(5))


def derive_population_A(C_PAP, D_PAP, M, k):
    """``A = 2 e^{-gamma} C_PAP^{-1} M (1 + 1/D_PAP) k``."""
    if int(k) != k or k < 1:
        raise DomainError("k must be an integer >= 1")
    g = arith.euler_gamma()
    return 2 * arith.exp(-g) / _positive("C_PAP", C_PAP) * arith.to_iv(M) * _one_plus_inv(D_PAP) * int(k)


def derive_threshold_c1(C_PAP, D_PAP, M):
    """``c1 = C_PAP e^gamma / (2 (1 + 1/D_PAP) M)``."""
    g = arith.euler_gamma()
    return _positive("C_PAP", C_PAP) * arith.exp(g) / (2 * _one_plus_inv(D_PAP) * _positive("M", M))


def display_probability_bound(C_UB, D_PAP, M):
    """``e^{2 gamma} / (4 (1 + 1/D_PAP)^2 (25 C_UB + 20 e^gamma M))``.

    This is the separation-failure bound achieved by the chosen epsilon and
    also the value printed for the second-moment lower bound; the exact
    second-moment value is ``C_PAP^2`` times it.
    """
    g = arith.euler_gamma()
    return arith.exp(2 * g) / (4 * _one_plus_inv(D_PAP) ** 2 * _mixing_denominator(C_UB, M))


def derive_separation_epsilon(A, M, C_UB, D_PAP):
    """Separation fraction of ``y`` between consecutive primes found.

    Raises :class:`ConstraintViolation` unless ``epsilon < 1`` is certain.
    """
    A = arith.to_iv(A)
    if not arith.endpoints(A)[0] >= 1:
        raise DomainError("A must be at least 1")
    M, C_UB = arith.to_iv(M), arith.to_iv(C_UB)
    eps = M**2 / (1800 * A**2 * C_UB) * display_probability_bound(C_UB, D_PAP, M)
    if not arith.certainly_less(eps, 1):
        raise ConstraintViolation(
            f"separation epsilon = M^2/(1800 A^2 C_UB) * e^(2 gamma)/(4 (1+1/D_PAP)^2 (25 C_UB + 20 e^gamma M)) "
            f"must be < 1, got {arith.midpoint(eps):.6g}",
            quantity="epsilon", value=eps)
    return eps


def collision_probability(epsilon, A, C_UB, M):
    """Bound ``1800 eps A^2 C_UB / M^2`` on two primes closer than ``eps y``."""
    e = arith.to_iv(epsilon)
    lo, hi = arith.endpoints(e)
    if not (lo > 0 and hi < 1):
        raise DomainError("epsilon must lie in (0, 1)")
    return 1800 * e * arith.to_iv(A) ** 2 * arith.to_iv(C_UB) / arith.to_iv(M) ** 2


def moment_bounds(A, k, constants: ComponentConstants, c1=None) -> MomentBounds:
    """First/second moment bounds on the prime count and the Cauchy-Schwarz tail bound."""
    g = arith.euler_gamma()
    A = arith.to_iv(A)
    M = constants.M
    if c1 is None:
        c1 = derive_threshold_c1(constants.C_PAP, constants.D_PAP, M)
    c1 = arith.to_iv(c1)
    ceiling = arith.to_iv(constants.C_PAP) * arith.exp(g) / (_one_plus_inv(constants.D_PAP) * M)
    if not arith.certainly_less(c1, ceiling):
        raise DomainError("threshold c1 must be below C_PAP e^gamma / ((1 + 1/D_PAP) M)")
    EN_lower = ceiling * A
    EN2_upper = _mixing_denominator(constants.C_UB, M) * A**2 / M**2
    prob_lower = (EN_lower - c1 * A) ** 2 / EN2_upper
    return MomentBounds(EN_lower, EN2_upper, prob_lower)


def closed_form_c_LG(constants: ComponentConstants):
    """The explicit constant as a single closed-form expression."""
    g = arith.euler_gamma()
    C = arith.to_iv(constants.C_PAP)
    num = C**2 * arith.to_iv(constants.theta) * arith.to_iv(constants.c_IJ) * arith.exp(4 * g)
    den = (CLOSED_FORM_DENOMINATOR * arith.log(5) * arith.to_iv(constants.C_UB) * constants.M
           * _one_plus_inv(constants.D_PAP) ** 4 * _mixing_denominator(constants.C_UB, constants.M))
    return num / den


def lower_bound_Gk(X, k, c_LG, *, log_X=None):
    """``(c_LG/k^2) log X log_2 X log_4 X / log_3 X``.

    Pass ``log_X`` instead of ``X`` for arguments too large to materialise.
    """
    if int(k) != k or k < 1:
        raise DomainError("k must be an integer >= 1")
    if log_X is None:
        if X is None:
            raise DomainError("give X or log_X")
        L1 = arith.iterated_log(X, 1)
    else:
        L1 = arith.to_iv(log_X)
    try:
        L2 = arith.iterated_log(L1, 1)
        L3 = arith.iterated_log(L2, 1)
        L4 = arith.iterated_log(L3, 1)
    except DomainError as exc:
        raise DomainError("X too small: log_4 X must be positive") from exc
    if not arith.certainly_positive(L4):
        raise DomainError("X too small: log_4 X must be positive")
    return arith.to_iv(c_LG) / int(k) ** 2 * L1 * L2 * L4 / L3


def derive_C_range(theta, c_IJ, c) -> CRange:
    """Admissible range ``[theta c_IJ/(9600 c), theta c_IJ/(4800 c)]`` for C.

    ``admissible`` reports whether the lower end reaches ``(5/4) log 5``,
    the threshold required by the covering step.
    """
    num = _positive("theta", theta) * _positive("c_IJ", c_IJ)
    c = _positive("c", c)
    low, high = num / (9600 * c), num / (4800 * c)
    threshold = arith.to_iv(Fraction(5, 4)) * arith.log(5)
    # at the default c the two sides differ by a factor 16/15, so this is decidable
    admissible = arith.endpoints(low)[0] >= arith.endpoints(threshold)[1]
    return CRange(low, high, admissible)


def _log2x_of(x, log2x):
    if log2x is not None:
        return arith.to_iv(log2x)
    if x is None:
        raise DomainError("give x or log2x")
    if x < 10:
        raise DomainError("x must be at least 10")
    return arith.iterated_log(x, 2)


def _floor_log5_exact(q: Fraction) -> int:
    # largest n with 5^n <= q, by exact comparison
    n = math.floor((math.log(q.numerator) - math.log(q.denominator)) / math.log(5))
    while Fraction(5) ** n > q:
        n -= 1
    while Fraction(5) ** (n + 1) <= q:
        n += 1
    return n


def choose_m(A, c, x=None, *, log2x=None) -> MChoice:
    """Thinning exponent ``m = floor(log(80 c log_2 x / A) / log 5)``.

    ``A_prime = 5^{-m} 80 c log_2 x``. Infeasibility (``m < 0`` or ``m`` above
    ``log_3 x / log 5``) is reported in ``violations``, not raised.
    """
    exact = None
    if x is None and log2x is not None and not any(arith.is_interval(v) for v in (A, c, log2x)):
        exact = 80 * arith.parse_number(c) * arith.parse_number(log2x) / arith.parse_number(A)
    A = arith.to_iv(A)
    if not arith.endpoints(A)[0] >= 1:
        raise DomainError("A must be at least 1")
    c = _positive("c", c)
    L2 = _log2x_of(x, log2x)
    if not arith.certainly_positive(L2):
        raise DomainError("log_2 x must be positive")
    budget = 80 * c * L2
    ratio = budget / A
    if exact is not None:
        m = _floor_log5_exact(exact)
    else:
        m = arith.iv_floor(arith.log(ratio) / arith.log(5))
    A_prime = budget / arith.to_iv(5) ** m
    violations = []
    if m < 0:
        violations.append("m < 0: need 80 c log_2 x >= A")
    L3 = arith.log(L2) if arith.endpoints(L2)[0] > 1 else None
    if L3 is None or not arith.endpoints(L3)[0] > 0:
        violations.append("m <= log_3 x / log 5 needs log_3 x > 0")
    elif arith.endpoints(arith.to_iv(m))[0] > arith.endpoints(L3 / arith.log(5))[1]:
        violations.append("m exceeds log_3 x / log 5")
    if m >= 0:
        a_lo, a_hi = arith.endpoints(A)
        p_lo, p_hi = arith.endpoints(A_prime)
        # flag only certain violations; exact ties (m = 0 at A = budget) must pass
        if p_hi < a_lo or p_lo > 5 * a_hi:
            violations.append("A <= A' <= 5 A failed")
    return MChoice(m, A_prime, not violations, tuple(violations))


def default_r(x=None, *, log_x=None) -> int:
    """``r = floor(log^{1/5} x)``."""
    L1 = arith.to_iv(log_x) if log_x is not None else arith.iterated_log(x, 1)
    return arith.iv_floor(L1 ** (arith.to_iv(Fraction(1, 5))))


def maynard_pipeline(x, r, phiB_over_B, theta, JI_ratio, c, *, log2x=None) -> PipelineResult:
    """Main-term evaluation of ``u``, ``sigma y / x`` and ``C = (u/sigma)(x/2y)``.

    All three are asymptotic main terms: ``sigma y`` is replaced by
    ``80 c x log_2 x`` and ``log R / log x`` by ``theta/3``.
    """
    phi = arith.to_iv(phiB_over_B)
    lo, hi = arith.endpoints(phi)
    if not (lo >= Fraction(1, 2) and hi <= 1):
        raise DomainError("phi(B)/B must lie in [1/2, 1]")
    if int(r) != r or r < 2:
        raise DomainError("r must be an integer >= 2")
    JI = arith.to_iv(JI_ratio)
    if arith.endpoints(JI)[0] < 0:
        raise DomainError("JI_ratio must be nonnegative")
    u = _u_main_term(phi, theta, int(r) * JI)
    L2 = _log2x_of(x, log2x)
    sigma_y_coeff = 80 * _positive("c", c) * L2
    C = u / (2 * sigma_y_coeff)
    return PipelineResult(u, sigma_y_coeff, C)


def _u_main_term(phi, theta, r_times_JI):
    return arith.to_iv(phi) * arith.to_iv(theta) / 3 * arith.to_iv(r_times_JI) / 2


def u_main_term_range(theta, c_IJ, log2x):
    """``[theta c_IJ log_2 x / 60, theta c_IJ log_2 x / 30]``."""
    base = arith.to_iv(theta) * arith.to_iv(c_IJ) * arith.to_iv(log2x)
    return base / 60, base / 30


def epsilon0(k, theta, c_IJ, A):
    """``eps0 = k theta c_IJ / (160 A log 5)``; satisfies ``c = A eps0 / (80 k)``."""
    return int(k) * arith.to_iv(theta) * arith.to_iv(c_IJ) / (160 * arith.to_iv(A) * arith.log(5))


def default_pipeline_log2x(A, c) -> int:
    """Smallest power of ten ``L`` with ``80 c L >= A``."""
    need = arith.to_iv(A) / (80 * arith.to_iv(c))
    hi = arith.endpoints(need)[1]
    e = max(0, math.ceil(math.log10(float(hi))))
    while 10**e < hi:
        e += 1
    return 10**e


@dataclass(frozen=True)
class Derivation:
    c_LG: object
    params: DerivedParams
    trace: DerivationTrace


def derive_c_LG(constants: ComponentConstants | None = None, k: int = 1, *, log2x=None) -> Derivation:
    """Run the whole chain for ``k`` and return the constant with its audit trace.

    ``log2x`` fixes the scale ``log log x`` at which the construction
    parameters (``m``, ``A'``, ``u``, ...) are evaluated; by default the
    smallest power of ten for which ``m >= 0``.
    """
    if constants is None:
        constants = ComponentConstants()
    if int(k) != k or k < 1:
        raise DomainError("k must be an integer >= 1")
    k = int(k)
    cs = constants
    g = arith.euler_gamma()
    M = cs.M
    checks = []

    c = derive_sieve_scale_c(cs.theta, cs.c_IJ)
    A = derive_population_A(cs.C_PAP, cs.D_PAP, M, k)
    c1 = derive_threshold_c1(cs.C_PAP, cs.D_PAP, M)
    eps = derive_separation_epsilon(A, M, cs.C_UB, cs.D_PAP)
    checks.append(Check("epsilon < 1", True, f"epsilon = {arith.midpoint(eps):.6g}"))
    collision = collision_probability(eps, A, cs.C_UB, M)
    moments = moment_bounds(A, k, cs, c1)
    display = display_probability_bound(cs.C_UB, cs.D_PAP, M)
    prob_ratio = moments.prob_lower / display
    c_LG = closed_form_c_LG(cs)
    chain = c * eps * k**2 / (2 * M)

    def agree(a, b, tol=Fraction(1, 10**40)):
        (alo, ahi), (blo, bhi) = arith.endpoints(a), arith.endpoints(b)
        scale = max(abs(ahi), abs(bhi), Fraction(1, 10**300))
        return max(abs(ahi - blo), abs(bhi - alo)) <= tol * scale

    checks.append(Check("c1 * A = k", agree(c1 * A, k), f"c1*A = {arith.midpoint(c1 * A):.17g}"))
    checks.append(Check("EN_lower = 2k", agree(moments.EN_lower, 2 * k), f"EN_lower = {arith.midpoint(moments.EN_lower):.17g}"))
    checks.append(Check("collision bound = display bound", agree(collision, display), ""))
    checks.append(Check("prob_lower / display = C_PAP^2", agree(prob_ratio, arith.to_iv(cs.C_PAP) ** 2), ""))
    checks.append(Check("chain c eps k^2 / (2M) = closed form", agree(chain, c_LG), ""))

    crange = derive_C_range(cs.theta, cs.c_IJ, c)
    checks.append(Check("C_low >= (5/4) log 5", crange.admissible, f"C_low = {arith.midpoint(crange.C_low):.6g}"))
    e0 = epsilon0(k, cs.theta, cs.c_IJ, A)
    e0_max = k * arith.to_iv(cs.theta) * arith.to_iv(cs.c_IJ) / (150 * A * arith.log(5))
    checks.append(Check("eps0 <= k theta c_IJ / (150 A log 5)", arith.certainly_less(e0, e0_max), ""))
    checks.append(Check("c = A eps0 / (80 k)", agree(A * e0 / (80 * k), c), ""))

    if log2x is None:
        log2x = default_pipeline_log2x(A, c)
    L2 = arith.to_iv(log2x)
    mc = choose_m(A, c, log2x=L2)
    checks.append(Check("m feasible", mc.feasible, "; ".join(mc.violations) or f"m = {mc.m}"))
    if not mc.feasible:
        raise ConstraintViolation("thinning exponent m infeasible: " + "; ".join(mc.violations),
                                  quantity="m", value=mc.m)
    # r = floor(log^{1/5} x) and J/I ~ c_IJ log r / r give r J/I = c_IJ log_2 x / 5
    r_JI = arith.to_iv(cs.c_IJ) * L2 / 5
    u = _u_main_term(1, cs.theta, r_JI)
    sigma_y_coeff = 80 * c * L2
    C_pipe = u / (2 * sigma_y_coeff)
    u_lo, u_hi = u_main_term_range(cs.theta, cs.c_IJ, L2)
    # with phi(B)/B = 1 the main term sits exactly on the upper end
    in_range = arith.possibly_within(u, u_lo, u_hi)
    checks.append(Check("u in [theta c_IJ log_2 x/60, theta c_IJ log_2 x/30]", in_range, ""))
    c_in = arith.possibly_within(C_pipe, crange.C_low, crange.C_high)
    checks.append(Check("C_low <= C <= C_high", c_in, f"C = {arith.midpoint(C_pipe):.6g}"))

    def node(name, value, formula, deps=(), asym=False, source="derived"):
        return TraceNode(name, arith.to_iv(value), formula, asymptotic=asym, source=source, depends_on=tuple(deps))

    inputs = [
        node("theta", cs.theta, "level of distribution", source="input"),
        node("c_IJ", cs.c_IJ, "variational ratio constant", source="input"),
        node("C_PAP", cs.C_PAP, "1 - exp(-a D_PAP)", source="input"),
        node("D_PAP", cs.D_PAP, "10 c_ZD", source="input"),
        node("C_UB", cs.C_UB, "8 e^(2 gamma)", source="input"),
        node("D_UB", cs.D_UB, "arbitrary positive", source="input"),
        node("M", M, "max(D_PAP, D_UB)", ("D_PAP", "D_UB")),
        node("gamma", g, "Euler-Mascheroni constant", source="input"),
        node("k", k, "number of consecutive gaps", source="input"),
        node("log2x", L2, "log log x at which construction parameters are evaluated", asym=True, source="input"),
    ]
    derived = [
        node("c", c, "theta c_IJ / (12800 log 5)", ("theta", "c_IJ")),
        node("A", A, "2 e^(-gamma) C_PAP^(-1) M (1 + 1/D_PAP) k", ("C_PAP", "D_PAP", "M", "k")),
        node("c1", c1, "C_PAP e^gamma / (2 (1 + 1/D_PAP) M)", ("C_PAP", "D_PAP", "M")),
        node("epsilon", eps, "M^2/(1800 A^2 C_UB) * e^(2 gamma)/(4 (1+1/D_PAP)^2 (25 C_UB + 20 e^gamma M))",
             ("M", "A", "C_UB", "D_PAP")),
        node("collision_bound", collision, "1800 epsilon A^2 C_UB / M^2", ("epsilon", "A", "C_UB", "M")),
        node("EN_lower", moments.EN_lower, "C_PAP e^gamma A / ((1 + 1/D_PAP) M)", ("C_PAP", "A", "D_PAP", "M")),
        node("EN2_upper", moments.EN2_upper, "(25 C_UB + 20 e^gamma M) A^2 / M^2", ("C_UB", "M", "A")),
        node("prob_lower", moments.prob_lower, "(EN_lower - c1 A)^2 / EN2_upper", ("EN_lower", "c1", "A", "EN2_upper")),
        node("prob_display", display, "e^(2 gamma) / (4 (1 + 1/D_PAP)^2 (25 C_UB + 20 e^gamma M))",
             ("C_UB", "D_PAP", "M")),
        node("prob_ratio", prob_ratio, "prob_lower / prob_display (= C_PAP^2)", ("prob_lower", "prob_display")),
        node("c_LG_chain", chain, "c epsilon k^2 / (2 M)", ("c", "epsilon", "k", "M")),
        node("C_low", crange.C_low, "theta c_IJ / (9600 c)", ("theta", "c_IJ", "c"), asym=True),
        node("C_high", crange.C_high, "theta c_IJ / (4800 c)", ("theta", "c_IJ", "c"), asym=True),
        node("epsilon0", e0, "k theta c_IJ / (160 A log 5)", ("k", "theta", "c_IJ", "A")),
        node("m", mc.m, "floor(log(80 c log_2 x / A) / log 5)", ("c", "log2x", "A"), asym=True),
        node("A_prime", mc.A_prime, "5^(-m) 80 c log_2 x", ("m", "c", "log2x"), asym=True),
        node("u", u, "(phi(B)/B) (theta/3) r J/(2 I), phi(B)/B = 1, r J/I = c_IJ log_2 x / 5",
             ("theta", "c_IJ", "log2x"), asym=True),
        node("sigma_y_coeff", sigma_y_coeff, "sigma y / x = 80 c log_2 x", ("c", "log2x"), asym=True),
        node("C", C_pipe, "(u / sigma) (x / 2y) = u / (160 c log_2 x)", ("u", "sigma_y_coeff"), asym=True),
    ]
    root = TraceNode(
        "c_LG", c_LG,
        "C_PAP^2 theta c_IJ e^(4 gamma) / (737280000 log 5 C_UB M (1+1/D_PAP)^4 (25 C_UB + 20 e^gamma M))",
        children=tuple(inputs + derived),
        depends_on=("theta", "c_IJ", "C_PAP", "D_PAP", "C_UB", "M", "gamma"),
    )
    trace = DerivationTrace(root, tuple(checks))
    width = trace.max_relative_width()
    trace_ok = width < TRACE_RELATIVE_TOLERANCE
    trace = DerivationTrace(root, tuple(checks) + (
        Check("relative interval width < 1e-30", trace_ok, f"max relative width = {width:.3g}"),))
    params = DerivedParams(
        c=c, A=A, c1=c1, epsilon=eps, EN_lower=moments.EN_lower, EN2_upper=moments.EN2_upper,
        prob_lower=moments.prob_lower, c_LG=c_LG, C_low=crange.C_low, C_high=crange.C_high,
        m=mc.m, A_prime=mc.A_prime, epsilon0=e0, u=u, sigma_y_coeff=sigma_y_coeff,
    )
    return Derivation(c_LG, params, trace)
