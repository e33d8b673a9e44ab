"""Subsets of the natural numbers: intcones, periodicity and MILP emission.

A :class:`PeriodicNaturalSet` denotes ``exceptional | (offsets + t*N)``.  The
canonical form uses the minimal eventual period, the smallest offset of each
occupied residue whose whole upward chain lies in the set, and the finitely
many members left over as the exceptional part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Sequence

import numpy as np

from .errors import DeskScaleError, MicpError
from .formulations import MicpFormulation, _Builder, union_rational
from .rational import as_fraction, gcd_vector


BETA_LIMIT = 10 ** 6


@dataclass(frozen=True)
class PeriodicNaturalSet:
    exceptional: tuple
    offsets: tuple
    period: int
    finite: bool = False
    window_certified: bool = False

    def __post_init__(self):
        object.__setattr__(self, "exceptional", tuple(sorted(int(e) for e in self.exceptional)))
        object.__setattr__(self, "offsets", tuple(sorted(int(o) for o in self.offsets)))
        if self.period < 1:
            raise MicpError("period must be a positive integer")
        if any(e < 0 for e in self.exceptional + self.offsets):
            raise MicpError("members must be natural numbers")
        if len({o % self.period for o in self.offsets}) != len(self.offsets):
            raise MicpError("offsets must be pairwise distinct modulo the period")

    def contains(self, x: int) -> bool:
        if x < 0:
            return False
        if x in self.exceptional:
            return True
        return any(x >= o and (x - o) % self.period == 0 for o in self.offsets)

    def members(self, bound: int) -> list[int]:
        return [x for x in range(bound + 1) if self.contains(x)]

    def bits(self, bound: int) -> np.ndarray:
        out = np.zeros(bound + 1, dtype=bool)
        for e in self.exceptional:
            if e <= bound:
                out[e] = True
        for o in self.offsets:
            out[o::self.period] = True
        return out

    @property
    def triple(self) -> tuple:
        return (self.exceptional, self.offsets, self.period)


def _residue_chains(member: Callable[[int], bool], t: int, start: int) -> list[int]:
    """Smallest offset per residue mod t whose chain upward from ``start`` is in the set."""
    offsets = []
    for r in range(t):
        x = start + ((r - start) % t)
        if not member(x):
            continue
        while x - t >= 0 and member(x - t):
            x -= t
        offsets.append(x)
    return sorted(offsets)


def canonicalize(P: PeriodicNaturalSet) -> PeriodicNaturalSet:
    """Canonical triple of the set denoted by P (minimal period, minimal offsets)."""
    if not P.offsets:
        return PeriodicNaturalSet(P.exceptional, (), 1, finite=True)
    t = P.period
    residues = {o % t for o in P.offsets}
    period = t
    for dvs in sorted(d for d in range(1, t + 1) if t % d == 0):
        if all(((r + dvs) % t) in residues for r in residues):
            period = dvs
            break
    # beyond this point membership is purely residue based
    start = max(P.exceptional + P.offsets) + 1
    offsets = _residue_chains(P.contains, period, start)
    covered = PeriodicNaturalSet((), offsets, period)
    exceptional = [e for e in range(start + period) if P.contains(e) and not covered.contains(e)]
    return PeriodicNaturalSet(tuple(exceptional), tuple(offsets), period)


def intcone_enumerate(generators: Sequence[int], bound: int) -> list[int]:
    """Elements of intcone(generators) up to ``bound`` (0 always included)."""
    gens = sorted({int(g) for g in generators})
    if not gens:
        raise MicpError("empty input")
    if any(g < 0 for g in gens):
        raise MicpError("generators must be natural numbers")
    reach = np.zeros(bound + 1, dtype=bool)
    reach[0] = True
    for g in gens:
        if g == 0:
            continue
        for x in range(g, bound + 1):
            if reach[x - g]:
                reach[x] = True
    return [int(x) for x in np.flatnonzero(reach)]


def schur_bound(generators: Sequence[int]) -> int:
    """Schur's bound ``(a1 - 1)(an - 1) - 1`` on the Frobenius number of coprime generators."""
    gens = sorted(g for g in generators if g > 0)
    if gens[0] == 1:
        return -1
    return (gens[0] - 1) * (gens[-1] - 1) - 1


def conductor(generators: Sequence[int]) -> tuple[int, list[int]]:
    """For coprime generators: the threshold alpha0 and the members below it."""
    gens = sorted(g for g in generators if g > 0)
    if gens[0] == 1:
        return 0, []
    limit = schur_bound(gens) + gens[0] + 1
    members = set(intcone_enumerate(gens, limit))
    missing = [x for x in range(limit + 1) if x not in members]
    alpha0 = missing[-1] + 1
    return alpha0, sorted(x for x in members if x < alpha0)


def intcone_normal_form(generators: Sequence[int]) -> PeriodicNaturalSet:
    """Canonical :class:`PeriodicNaturalSet` of ``intcone(generators)``."""
    gens = [int(g) for g in generators]
    if not gens:
        raise MicpError("empty input")
    g = gcd_vector(gens)
    if g == 0:
        return PeriodicNaturalSet((0,), (), 1, finite=True)
    reduced = [x // g for x in gens if x]
    alpha0, below = conductor(reduced)
    P = PeriodicNaturalSet(tuple(g * b for b in below), (g * alpha0,), g)
    return canonicalize(P)


def schur_beta(generators: Sequence[int]) -> tuple[int, int, list[int]]:
    """Period ``g * beta`` from the product construction, with ``J`` and ``g``.

    ``beta`` is the product of the nonzero elements of ``R0``, the members of
    ``intcone(R')`` up to its threshold, and ``J`` the members up to ``2 beta``;
    then ``intcone(R') = J + intcone(beta)``.  beta grows like a product,
    so values above ``BETA_LIMIT`` raise DeskScaleError instead of enumerating.
    """
    gens = [int(x) for x in generators]
    g = gcd_vector(gens)
    if g == 0:
        raise MicpError("generators are all zero")
    reduced = [x // g for x in gens if x]
    alpha0, below = conductor(reduced)
    R0 = below + [alpha0]
    beta = reduce(lambda a, b: a * b, [a for a in R0 if a != 0], 1)
    if beta > BETA_LIMIT:
        raise DeskScaleError(f"product period {beta} exceeds {BETA_LIMIT}")
    J = intcone_enumerate(reduced, 2 * beta)
    return g, beta, J


@dataclass(frozen=True)
class NaturalOracle:
    """Exact membership predicate valid on ``[0, certified_bound]``."""

    predicate: Callable[[int], bool]
    certified_bound: int
    name: str = ""

    def __call__(self, x: int) -> bool:
        if x < 0:
            return False
        if x > self.certified_bound:
            raise MicpError(f"query {x} beyond certified bound {self.certified_bound}")
        return bool(self.predicate(x))

    def bits(self, bound: int | None = None) -> np.ndarray:
        bound = self.certified_bound if bound is None else bound
        if bound > self.certified_bound:
            raise MicpError("window exceeds certified bound")
        return np.fromiter((self.predicate(x) for x in range(bound + 1)), dtype=bool, count=bound + 1)


def oracle_from_set(P: PeriodicNaturalSet, bound: int) -> NaturalOracle:
    return NaturalOracle(P.contains, bound, "periodic")


def oracle_from_members(members, bound: int) -> NaturalOracle:
    s = {int(m) for m in members}
    return NaturalOracle(lambda x: x in s, bound, "finite")


def s_epsilon_member(x: int, eps: Fraction) -> bool:
    """Whether ``frac(sqrt(2) x)`` lies outside ``(eps, 1 - sqrt(2) eps)``, exactly."""
    p, q = eps.numerator, eps.denominator
    m = math.isqrt(2 * x * x)  # floor(sqrt(2) x)
    # frac <= eps  <=>  sqrt(2) x <= m + eps
    if 2 * x * x * q * q <= (m * q + p) ** 2:
        return True
    # frac >= 1 - sqrt(2) eps  <=>  sqrt(2)(x + eps) >= m + 1
    return 2 * (x * q + p) ** 2 >= (m + 1) ** 2 * q * q


def fixture_s_epsilon(eps, certified_bound: int = 100_000) -> NaturalOracle:
    eps = as_fraction(eps)
    # 0 < eps < 1/(1 + sqrt 2)  <=>  eps > 0, 1 - eps > 0, 2 eps^2 < (1 - eps)^2
    if not (eps > 0 and 1 - eps > 0 and 2 * eps * eps < (1 - eps) ** 2):
        raise MicpError("eps must satisfy 0 < eps < 1/(1 + sqrt(2))")
    return NaturalOracle(lambda x: s_epsilon_member(x, eps), certified_bound, f"s_epsilon({eps})")


@dataclass(frozen=True)
class NotPeriodicUpTo:
    max_period: int
    certified_bound: int
    thresholds: tuple = field(default=(), compare=False, repr=False)


def min_window(max_period: int, factor: int = 4) -> int:
    return factor * max_period


def window_thresholds(bits: np.ndarray, max_period: int) -> list[int]:
    """For t = 1..max_period the least x0 with ``bits[x] == bits[x + t]`` for all x >= x0."""
    out = []
    N = len(bits) - 1
    for t in range(1, max_period + 1):
        if t > N:
            out.append(N + 1)
            continue
        mism = np.flatnonzero(bits[:-t] != bits[t:])
        out.append(int(mism[-1]) + 1 if len(mism) else 0)
    return out


def window_periods(bits: np.ndarray, max_period: int) -> list[int]:
    """Every t <= max_period that is periodic from the first half of the window on."""
    N = len(bits) - 1
    return [t for t, thr in enumerate(window_thresholds(bits, max_period), start=1) if thr <= N // 2]


def detect_periodicity(S, max_period: int, floor_factor: int = 4, bound: int | None = None):
    """Canonical periodic description certified on ``[0, bound]``, or NotPeriodicUpTo.

    ``S`` is a :class:`NaturalOracle` or a boolean membership array.  A period
    t is accepted when the window is t-periodic from its midpoint on, which
    leaves at least half the window as evidence; the smallest accepted t is
    the minimal eventual period on the window.
    """
    if isinstance(S, NaturalOracle):
        bits = S.bits(bound)
    else:
        bits = np.asarray(S, dtype=bool)
    N = len(bits) - 1
    if max_period < 1:
        raise MicpError("max_period must be positive")
    if N < min_window(max_period, floor_factor):
        raise MicpError("insufficient window")
    thresholds = window_thresholds(bits, max_period)
    for t, thr in enumerate(thresholds, start=1):
        if thr <= N // 2:
            break
    else:
        return NotPeriodicUpTo(max_period, N, tuple(thresholds))
    member = lambda x: bool(bits[x])
    offsets = _residue_chains(member, t, thr)
    covered = PeriodicNaturalSet((), offsets, t)
    exceptional = [x for x in range(thr) if bits[x] and not covered.contains(x)]
    if not offsets:
        return PeriodicNaturalSet(tuple(exceptional), (), 1, finite=True, window_certified=True)
    return PeriodicNaturalSet(tuple(exceptional), tuple(offsets), t, window_certified=True)


def finite_set_formulation(values: Sequence[int]) -> MicpFormulation:
    """``x = sum_j v_j w_j`` with a binary simplex selector w."""
    values = sorted(set(int(v) for v in values))
    if not values:
        raise MicpError("empty input")
    k = len(values)
    B = _Builder(1 + k)
    B.add("Zero", [B.row({0: 1, **{1 + j: -v for j, v in enumerate(values)}}),
                   B.row({1 + j: 1 for j in range(k)}, -1)])
    rows = []
    for j in range(k):
        rows += [B.row({1 + j: 1}), B.row({1 + j: -1}, 1)]
    B.add("Nonneg", rows)
    return MicpFormulation(B.build(), 1, 0, k, f"finite{tuple(values)}")


def periodic_formulation(offsets: Sequence[int], period: int) -> MicpFormulation:
    """``x = sum_j o_j s_j + t * lam`` with binary simplex s and ``lam >= 0`` integer."""
    offsets = sorted(int(o) for o in offsets)
    r = len(offsets)
    if r == 0:
        raise MicpError("empty input")
    lam = 1 + r
    B = _Builder(2 + r)
    B.add("Zero", [B.row({0: 1, **{1 + j: -o for j, o in enumerate(offsets)}, lam: -period}),
                   B.row({1 + j: 1 for j in range(r)}, -1)])
    rows = []
    for j in range(r):
        rows += [B.row({1 + j: 1}), B.row({1 + j: -1}, 1)]
    rows.append(B.row({lam: 1}))
    B.add("Nonneg", rows)
    return MicpFormulation(B.build(), 1, 0, r + 1, f"periodic(offsets={tuple(offsets)}, t={period})")


def to_milp(P: PeriodicNaturalSet) -> MicpFormulation:
    """Rational MILP formulation; every integer slice is a single natural number.

    The periodic part is ``x = sum o_j s_j + t lam``; a nonempty exceptional
    part is joined through :func:`union_rational` (periodic part first).
    """
    if not P.offsets and not P.exceptional:
        raise MicpError("empty set has no formulation")
    if not P.offsets:
        return finite_set_formulation(P.exceptional)
    F = periodic_formulation(P.offsets, P.period)
    if P.exceptional:
        F = union_rational(F, finite_set_formulation(P.exceptional))
    return F


def pure_periodic_form(P: PeriodicNaturalSet):
    """``(S0, t')`` with ``S = S0 + intcone(t')`` and t' a multiple of the period, or None.

    Possible exactly when every exceptional point lies in a residue class
    that the periodic part occupies; sets failing this are finite-plus-periodic
    but not of the form ``S0 + intcone(t')`` and need the conic union.
    """
    if not P.offsets:
        return None
    t = P.period
    first = {o % t: o for o in P.offsets}
    if any(e % t not in first for e in P.exceptional):
        return None
    k = 1
    while any(e + k * t < first[e % t] for e in P.exceptional):
        k += 1
    tp = k * t
    top = max(P.exceptional + P.offsets) + tp
    S0 = [x for x in range(top + 1) if P.contains(x) and not (x >= tp and P.contains(x - tp))]
    return tuple(S0), tp


def polyhedral_milp(P: PeriodicNaturalSet) -> MicpFormulation:
    """Polyhedral formulation ``x = sum s_j o_j + t' lam`` of P when one exists."""
    if not P.offsets:
        return finite_set_formulation(P.exceptional)
    form = pure_periodic_form(P)
    if form is None:
        raise MicpError("set has exceptional points outside the occupied residues; "
                        "it is not of the form S0 + intcone(t) and has no polyhedral formulation")
    return periodic_formulation(*form)


def milp_window(P: PeriodicNaturalSet, bound: int) -> list[tuple[int, int]]:
    """z-window of :func:`to_milp` covering every member up to ``bound``."""
    win = []
    if P.offsets:
        win += [(0, 1)] * len(P.offsets) + [(0, max(0, bound // P.period))]
    if P.exceptional:
        win += [(0, 1)] * len(P.exceptional)
    if P.offsets and P.exceptional:
        win.append((0, 1))
    return win


def members_from_slices(F: MicpFormulation, window, bound: int) -> np.ndarray:
    """Membership array on ``[0, bound]`` from the single-point slices of F."""
    from .convex import interval_of
    from .formulations import enumerate_slices

    bits = np.zeros(bound + 1, dtype=bool)
    fam = enumerate_slices(F, window)
    for z, S in fam.slices.items():
        lo, hi = interval_of(S)
        if lo is None or lo != hi:
            raise MicpError(f"slice at {z} is not a single point")
        x = lo
        if x.denominator != 1 or x < 0:
            raise MicpError(f"slice at {z} is not a natural number")
        if x <= bound:
            bits[int(x)] = True
    return bits
