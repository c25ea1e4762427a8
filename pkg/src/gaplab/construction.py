"""Desk-scale simulator of the residue-class interval construction.

Builds the prime sets S, P and Q, applies residue assignments to the
interval (x, y], and reports the surviving set together with band counts.
With the asymptotic parameter choices every set of interest is empty at
any feasible x, so all parameters can be overridden and every run is
labelled ``paper-regime`` or ``toy-regime``.
"""
from __future__ import annotations

import hashlib
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import arith
from .constants import derive_sieve_scale_c
from .errors import DomainError
from .primes import is_prime, primes_upto, segmented_sieve

STRATEGIES = ("uniform-random", "zero-class", "greedy-cover")
STAGES = ("S-sieve", "P-sieve", "S+P-sieve", "full-T")
DEFAULT_BAND_EPS = Fraction(1, 100)


class RegimeWarning(UserWarning):
    """Raised when the chosen parameters leave a prime set empty."""


def default_c() -> float:
    return arith.midpoint(derive_sieve_scale_c(Fraction(1, 3), Fraction(1, 4)))


def interval_parameters(x, c):
    """``(y, z)`` as functions of ``x``: ``y = c x log x log_3 x / log_2 x``, ``z = x^{log_3 x / (4 log_2 x)}``."""
    l1 = math.log(x)
    l2 = math.log(l1)
    if l2 <= 0 or math.log(l2) <= 0:
        raise DomainError(f"log_3 x <= 0 at x = {x}; override y and z")
    l3 = math.log(l2)
    return c * x * l1 * l3 / l2, x ** (l3 / (4 * l2))


@dataclass(frozen=True, eq=False)
class SieveSystem:
    x: float
    y: float
    z: float
    c: float
    B0: int
    s_min: float
    S: np.ndarray
    P_set: np.ndarray
    Q: np.ndarray
    regime: str
    b0_in_range: bool
    warnings: tuple = ()

    @property
    def lo(self) -> int:
        return math.floor(self.x)

    @property
    def hi(self) -> int:
        return math.floor(self.y)

    def sieving_primes(self) -> np.ndarray:
        ps = primes_upto(math.floor(self.x))
        return ps[ps != self.B0]

    def to_dict(self):
        return {
            "x": self.x, "y": self.y, "z": self.z, "c": self.c, "B0": self.B0,
            "s_min": self.s_min, "regime": self.regime, "b0_in_range": self.b0_in_range,
            "size_S": len(self.S), "size_P": len(self.P_set), "size_Q": len(self.Q),
            "warnings": list(self.warnings),
        }


def _primes_in(table, lo, hi, exclude):
    lo, hi = math.floor(lo), math.floor(hi)
    if hi <= lo:
        return np.empty(0, dtype=np.int64)
    ps = table[(table > lo) & (table <= hi)]
    return ps[ps != exclude]


def build_prime_sets(x, B0: int = 1, *, c=None, s_min=None, y=None, z=None, threads=1) -> SieveSystem:
    """Assemble ``S``, ``P`` and ``Q`` for the given ``x`` and overrides.

    ``S`` holds the primes in ``(s_min, z]``, ``P`` those in ``(x/2, x]`` and
    ``Q`` those in ``(x, y]``, all excluding ``B0``. Empty ``S`` or ``Q``
    triggers a :class:`RegimeWarning` and is recorded on the system.
    """
    if x < 10:
        raise DomainError("x must be at least 10")
    B0 = int(B0)
    if B0 != 1 and not is_prime(B0):
        raise DomainError("B0 must be 1 or a prime")
    regime = "paper-regime" if c is None and s_min is None and y is None and z is None else "toy-regime"
    c = default_c() if c is None else float(c)
    if c <= 0:
        raise DomainError("c must be positive")
    if y is None or z is None:
        y0, z0 = interval_parameters(x, c)
        y = y0 if y is None else y
        z = z0 if z is None else z
    y, z = float(y), float(z)
    s_min = math.log(x) ** 20 if s_min is None else float(s_min)
    top = math.floor(max(x, y, z, 2))
    table = segmented_sieve(0, top, threads=threads).primes()
    S = _primes_in(table, s_min, z, B0)
    P_set = _primes_in(table, x / 2, x, B0)
    Q = _primes_in(table, x, y, B0)
    notes = []
    if len(S) == 0:
        notes.append(f"S is empty: s_min = {s_min:.6g} >= z = {z:.6g} or no primes in between")
    if y <= x:
        notes.append(f"Q is empty: y = {y:.6g} <= x = {x:.6g}")
    elif len(Q) == 0:
        notes.append("Q is empty: no primes in (x, y]")
    for msg in notes:
        warnings.warn(msg, RegimeWarning, stacklevel=2)
    b0_ok = B0 == 1 or math.log(x) <= B0 <= x
    return SieveSystem(float(x), y, z, c, B0, s_min, S, P_set, Q, regime, b0_ok, tuple(notes))


@dataclass(frozen=True)
class ResidueAssignment:
    """Residues ``a_s`` for ``s`` in S, ``n_p`` for ``p`` in P, and optional extra primes."""

    a_vec: dict
    n_vec: dict
    seed: int | None = None
    strategy: str = "zero-class"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, vec in (("a_vec", self.a_vec), ("n_vec", self.n_vec), ("extra", self.extra)):
            for p, r in vec.items():
                if not 0 <= r < p:
                    raise DomainError(f"{name}[{p}] = {r} is not reduced")
        if self.strategy not in STRATEGIES:
            raise DomainError(f"unknown strategy {self.strategy!r}")

    def residues(self) -> dict:
        out = dict(self.extra)
        out.update(self.a_vec)
        out.update(self.n_vec)
        return out

    def digest(self) -> str:
        payload = {
            "a": sorted(self.a_vec.items()), "n": sorted(self.n_vec.items()),
            "extra": sorted(self.extra.items()), "seed": self.seed, "strategy": self.strategy,
        }
        return hashlib.sha256(json.dumps(payload, separators=(",", ":")).encode()).hexdigest()


@dataclass(frozen=True, eq=False)
class SurvivorSet:
    members: np.ndarray
    provenance: str

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        return (isinstance(other, SurvivorSet) and self.provenance == other.provenance
                and np.array_equal(self.members, other.members))

    def __hash__(self):
        return hash((self.provenance, self.members.tobytes()))


def zero_assignment(system: SieveSystem) -> ResidueAssignment:
    return ResidueAssignment({int(s): 0 for s in system.S}, {int(p): 0 for p in system.P_set})


def sieve_residues(lo: int, hi: int, residues: dict) -> np.ndarray:
    """Integers in ``(lo, hi]`` avoiding ``residue mod p`` for every ``p`` in ``residues``."""
    if hi <= lo:
        return np.empty(0, dtype=np.int64)
    alive = np.ones(hi - lo, dtype=bool)
    start = lo + 1
    for p in sorted(residues):
        alive[(residues[p] - start) % p :: p] = False
    return np.flatnonzero(alive).astype(np.int64) + start


def _required_residues(system, assignment, stage, extend_all_primes):
    S = [int(s) for s in system.S]
    P = [int(p) for p in system.P_set]
    need = {"S-sieve": S, "P-sieve": P, "S+P-sieve": S + P, "full-T": S + P}[stage]
    out = {}
    for p in need:
        r = assignment.a_vec.get(p, assignment.n_vec.get(p))
        if r is None:
            raise DomainError(f"missing residue for required prime {p}")
        out[p] = r
    if stage == "full-T":
        given = assignment.residues()
        for p in system.sieving_primes().tolist():
            if p in out:
                continue
            if p in given:
                out[p] = given[p]
            elif extend_all_primes:
                out[p] = 0
            else:
                raise DomainError(f"missing residue for prime {p} <= x")
    return out


def sieve_survivors(system: SieveSystem, assignment: ResidueAssignment, extend_all_primes=True,
                    stage: str | None = None) -> SurvivorSet:
    """Survivors in ``(x, y]`` of the residue classes of ``assignment``.

    ``stage`` selects which primes sieve: ``"S-sieve"``, ``"P-sieve"``,
    ``"S+P-sieve"`` or ``"full-T"`` (every ``p <= x`` other than ``B0``).
    For ``full-T`` primes without a residue get ``0`` when
    ``extend_all_primes`` is set and raise otherwise. The default stage is
    ``full-T`` when extending and ``S+P-sieve`` when not.
    """
    if stage is None:
        stage = "full-T" if extend_all_primes else "S+P-sieve"
    if stage not in STAGES:
        raise DomainError(f"unknown stage {stage!r}")
    residues = _required_residues(system, assignment, stage, extend_all_primes)
    return SurvivorSet(sieve_residues(system.lo, system.hi, residues), stage)


def _greedy(primes, alive_values):
    # choose the residue class hitting the most values still alive; ties -> smallest
    chosen = {}
    alive = alive_values.copy()
    for p in primes:
        counts = np.bincount(alive % p, minlength=p) if len(alive) else np.zeros(p, dtype=int)
        r = int(np.argmax(counts))
        chosen[p] = r
        alive = alive[alive % p != r]
    return chosen


def random_construction(system: SieveSystem, seed: int, strategy: str = "uniform-random"):
    """Draw a residue assignment by ``strategy`` and sieve the full set ``T``.

    Primes ``p <= x`` outside ``S`` and ``P`` get ``a_p = 0``. Random draws
    come from a single generator seeded by ``seed`` (S ascending, then P).
    """
    if len(system.Q) == 0:
        raise DomainError("Q is empty; override y (and c, s_min, z) to get a nonempty construction")
    if strategy not in STRATEGIES:
        raise DomainError(f"unknown strategy {strategy!r}")
    S = [int(s) for s in system.S]
    P = [int(p) for p in system.P_set]
    if strategy == "zero-class":
        a_vec, n_vec = {s: 0 for s in S}, {p: 0 for p in P}
    elif strategy == "uniform-random":
        rng = np.random.default_rng(seed)
        a_vec = {s: int(rng.integers(s)) for s in S}
        n_vec = {p: int(rng.integers(p)) for p in P}
    else:
        interval = np.arange(system.lo + 1, system.hi + 1, dtype=np.int64)
        a_vec = _greedy(S, interval)
        left = sieve_residues(system.lo, system.hi, a_vec)
        n_vec = _greedy(P, left)
    extra = {p: 0 for p in system.sieving_primes().tolist() if p not in a_vec and p not in n_vec}
    assignment = ResidueAssignment(a_vec, n_vec, seed, strategy, extra)
    return assignment, sieve_survivors(system, assignment)


def e_p_sizes(system: SieveSystem, assignment: ResidueAssignment) -> dict:
    """``#e_p`` with ``e_p = {q in Q : q = n_p (mod p)}`` for every ``p`` in P."""
    Q = system.Q
    return {int(p): int(np.count_nonzero(Q % p == assignment.n_vec[int(p)])) for p in system.P_set}


@dataclass(frozen=True)
class BandRow:
    alpha: Fraction
    beta: Fraction
    count: int
    upper_band: float
    lower_band: float
    short_band: float


def _band_count(members, y, alpha, beta):
    lo, hi = math.floor(alpha * y), math.floor(beta * y)
    return int(np.count_nonzero((members > lo) & (members <= hi)))


def survivor_stats(T, y, alpha, beta, A, x, eps=DEFAULT_BAND_EPS) -> BandRow:
    """``#(T cap (alpha y, beta y])`` beside the reference bands.

    The bands are ``5A x/log x``, ``A x/log x`` and
    ``5A (2|beta-alpha| + eps) x/log x``. They are reported, not asserted.
    """
    alpha, beta = arith.parse_number(alpha), arith.parse_number(beta)
    if not 0 <= alpha < beta <= 1:
        raise DomainError("need 0 <= alpha < beta <= 1")
    members = T.members if isinstance(T, SurvivorSet) else np.asarray(T, dtype=np.int64)
    yq = arith.parse_number(y)
    unit = float(A) * x / math.log(x)
    return BandRow(alpha, beta, _band_count(members, yq, alpha, beta), 5 * unit, unit,
                   5 * (2 * float(beta - alpha) + float(eps)) * unit)


def parse_bands(text: str):
    """``"0:0.25,0.25:1"`` into a list of rational ``(alpha, beta)`` pairs."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            a, b = part.split(":")
        except ValueError as exc:
            raise DomainError(f"malformed band {part!r}") from exc
        out.append((arith.parse_number(a), arith.parse_number(b)))
    return out


def largest_prime_factor(n: int) -> np.ndarray:
    """``lpf[m]`` for ``0 <= m <= n`` (with ``lpf[0] = 0`` and ``lpf[1] = 1``)."""
    lpf = np.arange(n + 1, dtype=np.int64)
    lpf[: min(2, n + 1)] = np.arange(min(2, n + 1))
    for p in primes_upto(n).tolist():
        lpf[p::p] = p
    return lpf


def smooth_residual(y, z, B0: int = 1) -> list[int]:
    """``{m * B0^j <= y : m is z-smooth, j >= 0}``."""
    if y < 1:
        raise DomainError("y must be at least 1")
    if z < 2:
        raise DomainError("z must be at least 2")
    Y = math.floor(y)
    lpf = largest_prime_factor(Y)
    smooth = lpf <= z
    smooth[0] = False
    out = smooth.copy()
    B0 = int(B0)
    if B0 > 1:
        q = B0
        while q <= Y:
            m = np.arange(1, Y // q + 1)
            out[m[smooth[m]] * q] = True
            q *= B0
    return np.flatnonzero(out).tolist()
