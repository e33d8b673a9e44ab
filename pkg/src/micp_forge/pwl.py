"""Piecewise linear functions on the naturals with integer breakpoints.

A :class:`PwlFunction` is given by its values ``P(0..m)`` and a block of
slopes repeated forever from ``m`` on.  Periodicity questions reduce to the
string periodicity of the slope word.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import MicpError
from .formulations import MicpFormulation, _Builder, union_rational
from .rational import as_fraction


@dataclass(frozen=True)
class PwlFunction:
    prefix_values: tuple
    repeating_slopes: tuple

    def __post_init__(self):
        pv = tuple(as_fraction(v) for v in self.prefix_values)
        rs = tuple(as_fraction(v) for v in self.repeating_slopes)
        if not pv:
            raise MicpError("prefix needs at least P(0)")
        if not rs:
            raise MicpError("repeating slope block must be nonempty")
        object.__setattr__(self, "prefix_values", pv)
        object.__setattr__(self, "repeating_slopes", rs)

    @property
    def m(self) -> int:
        return len(self.prefix_values) - 1

    def slope(self, i: int) -> Fraction:
        if i < self.m:
            return self.prefix_values[i + 1] - self.prefix_values[i]
        return self.repeating_slopes[(i - self.m) % len(self.repeating_slopes)]

    def value(self, i: int) -> Fraction:
        if i < 0:
            raise MicpError("PWL functions are defined on the naturals")
        if i <= self.m:
            return self.prefix_values[i]
        L = len(self.repeating_slopes)
        q, r = divmod(i - self.m, L)
        return self.prefix_values[-1] + q * sum(self.repeating_slopes) + sum(self.repeating_slopes[:r], Fraction(0))

    def at(self, x) -> Fraction:
        """Value at a rational point by linear interpolation."""
        x = as_fraction(x)
        i = x.numerator // x.denominator
        lam = x - i
        return self.value(i) + lam * self.slope(i)

    def shifted(self, origin: int) -> "PwlFunction":
        """``i -> P(origin + i)``, still in prefix + block form."""
        if origin <= self.m:
            return PwlFunction(self.prefix_values[origin:], self.repeating_slopes)
        L = len(self.repeating_slopes)
        k = (origin - self.m) % L
        block = self.repeating_slopes[k:] + self.repeating_slopes[:k]
        return PwlFunction((self.value(origin),), block)


@dataclass(frozen=True)
class Segment:
    i: int
    x: Fraction
    c: Fraction

    @property
    def endpoints(self) -> tuple:
        return ((Fraction(self.i), self.x), (Fraction(self.i + 1), self.x + self.c))


@dataclass(frozen=True)
class SegmentSet:
    segments: tuple
    graph: bool = True

    def __post_init__(self):
        segs = tuple(sorted(self.segments, key=lambda s: s.i))
        object.__setattr__(self, "segments", segs)
        idx = [s.i for s in segs]
        if len(set(idx)) != len(idx):
            raise MicpError("at most one segment per breakpoint")
        if self.graph:
            for a, b in zip(segs, segs[1:]):
                if b.i == a.i + 1 and a.x + a.c != b.x:
                    raise MicpError("consecutive segments must share endpoints")

    def __len__(self):
        return len(self.segments)


def minimal_period(word: Sequence) -> int:
    """Smallest p with ``word[i] == word[i + p]``; equals len(word) if not a divisor."""
    n = len(word)
    fail = [0] * (n + 1)
    fail[0] = -1
    k = -1
    for i in range(n):
        while k >= 0 and word[k] != word[i]:
            k = fail[k]
        k += 1
        fail[i + 1] = k
    p = n - fail[n]
    return p if n % p == 0 else n


@dataclass(frozen=True)
class PwlPeriod:
    threshold: int
    t: int


@dataclass(frozen=True)
class NotPeriodic:
    threshold: int
    t: int


def detect_pwl_period(P: PwlFunction, mode: str = "eventual"):
    """Minimal period of the slope word and the first index from which it holds.

    In ``global`` mode a nonzero threshold yields :class:`NotPeriodic`
    (carrying the eventual data).
    """
    if mode not in ("eventual", "global"):
        raise MicpError("mode must be 'eventual' or 'global'")
    t = minimal_period(P.repeating_slopes)
    thr = P.m
    while thr > 0 and P.slope(thr - 1) == P.slope(thr - 1 + t):
        thr -= 1
    if mode == "global" and thr > 0:
        return NotPeriodic(thr, t)
    return PwlPeriod(thr, t)


def _segment_rows(B: _Builder, P: PwlFunction, origin: int, count: int, sel: int, theta: int, lam: int | None, t: int):
    """Rows ``x = sum_j s_j (seg start) + theta_j (1, c_j) [+ lam r]``."""
    x1 = {0: 1}
    x2 = {1: 1}
    for j in range(count):
        i = origin + j
        x1[sel + j] = -i
        x1[theta + j] = -1
        x2[sel + j] = -P.value(i)
        x2[theta + j] = -P.slope(i)
    if lam is not None:
        x1[lam] = -t
        x2[lam] = -(P.value(origin + t) - P.value(origin))
    B.add("Zero", [B.row(x1), B.row(x2), B.row({sel + j: 1 for j in range(count)}, -1)])
    rows = []
    for j in range(count):
        rows += [B.row({theta + j: 1}), B.row({sel + j: 1, theta + j: -1}),
                 B.row({sel + j: 1}), B.row({sel + j: -1}, 1)]
    if lam is not None:
        rows.append(B.row({lam: 1}))
    B.add("Nonneg", rows)


def pwl_to_milp(P: PwlFunction, origin: int = 0) -> MicpFormulation:
    """MILP for the graph of P on ``[origin, inf)``; slices are unit segments.

    Variables ``(x1, x2) | theta_0..theta_{t-1} | s_0..s_{t-1}, lam`` with
    ``0 <= theta_j <= s_j``; requires the slopes to be t-periodic from origin.
    """
    per = detect_pwl_period(P.shifted(origin), mode="global")
    if isinstance(per, NotPeriodic):
        raise MicpError("function is not periodic from the origin; use pwl_decompose")
    t = per.t
    B = _Builder(2 + t + t + 1)
    _segment_rows(B, P, origin, t, sel=2 + t, theta=2, lam=2 + 2 * t, t=t)
    return MicpFormulation(B.build(), 2, t, t + 1, f"pwl_tail(origin={origin}, t={t})")


def head_formulation(P: PwlFunction, count: int) -> MicpFormulation:
    """Union of the first ``count`` segments with a binary selector."""
    B = _Builder(2 + 2 * count)
    _segment_rows(B, P, 0, count, sel=2 + count, theta=2, lam=None, t=0)
    return MicpFormulation(B.build(), 2, count, count, f"pwl_head({count})")


@dataclass(frozen=True)
class PwlDecomposition:
    head: SegmentSet
    period: PwlPeriod
    formulation: MicpFormulation
    tail_formulation: MicpFormulation


def pwl_decompose(P: PwlFunction) -> PwlDecomposition:
    """Finite head segments plus a periodic tail, joined by the rational union."""
    per = detect_pwl_period(P, mode="eventual")
    head = SegmentSet(tuple(Segment(i, P.value(i), P.slope(i)) for i in range(per.threshold)))
    tail = pwl_to_milp(P, per.threshold)
    if per.threshold == 0:
        return PwlDecomposition(head, per, tail, tail)
    F = union_rational(head_formulation(P, per.threshold), tail)
    return PwlDecomposition(head, per, F, tail)


def decomposition_window(dec: PwlDecomposition, max_index: int) -> list[tuple[int, int]]:
    """z-window covering segments with start index below ``max_index``."""
    t, thr = dec.period.t, dec.period.threshold
    lam_hi = max(0, (max_index - thr) // t)
    tail = [(0, 1)] * t + [(0, lam_hi)]
    if thr == 0:
        return tail
    return [(0, 1)] * thr + tail + [(0, 1)]


def graph_segments(P: PwlFunction, upto: int) -> set[tuple]:
    """Endpoint pairs of the segments starting at 0..upto-1."""
    return {((Fraction(i), P.value(i)), (Fraction(i + 1), P.value(i + 1))) for i in range(upto)}
