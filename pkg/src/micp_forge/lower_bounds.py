"""Midpoint-exclusion witnesses and the MICP-dimension lower bound they give.

A set R inside S whose pairwise midpoints all miss S forces every
formulation of S to use at least ``ceil(log2 |R|)`` integer variables.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import DeskScaleError, MicpError
from .rational import as_fraction

EXACT_LIMIT = 40


def _point(p) -> tuple:
    if isinstance(p, (tuple, list)):
        return tuple(as_fraction(x) for x in p)
    return (as_fraction(p),)


def midpoint(u: Sequence, v: Sequence) -> tuple:
    return tuple((a + b) / 2 for a, b in zip(u, v))


def dimension_lower_bound(w) -> int:
    """``ceil(log2 w)`` for a w-strongly nonconvex set (0 for w <= 1)."""
    if isinstance(w, MidpointWitness):
        w = w.w
    if w <= 1:
        return 0
    return (w - 1).bit_length()


@dataclass(frozen=True)
class MidpointWitness:
    points: tuple
    w: int
    bound: int

    def verify(self, member: Callable[[tuple], bool]) -> bool:
        return all(not member(midpoint(a, b)) for a, b in itertools.combinations(self.points, 2))


def _membership(S) -> tuple[Callable[[tuple], bool], list | None]:
    if callable(S):
        return S, None
    pts = sorted({_point(p) for p in S})
    lookup = set(pts)
    return (lambda q: tuple(q) in lookup), pts


def exclusion_graph(points: Sequence[tuple], member: Callable[[tuple], bool]) -> list[int]:
    """Adjacency bitmasks: i ~ j iff the midpoint of points i, j is not a member."""
    adj = [0] * len(points)
    for i, j in itertools.combinations(range(len(points)), 2):
        if not member(midpoint(points[i], points[j])):
            adj[i] |= 1 << j
            adj[j] |= 1 << i
    return adj


def _color_bound(cand: int, adj: list[int]) -> int:
    """Number of greedy colour classes of the candidate set (a clique-size bound)."""
    colors = 0
    rest = cand
    while rest:
        colors += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~(1 << v)
            avail &= ~adj[v]
            rest &= ~(1 << v)
    return colors


def max_clique(adj: list[int], target: int | None = None) -> list[int]:
    """Lexicographically smallest maximum clique (vertex indices, ascending).

    Branch and bound in inclusion-first lexicographic order with a greedy
    colouring bound; only branches that cannot beat the incumbent are cut,
    so the first maximum clique found is the lexicographically smallest.
    """
    best: list[int] = []

    def expand(chosen: list[int], cand: int) -> bool:
        nonlocal best
        if len(chosen) > len(best):
            best = chosen[:]
            if target is not None and len(best) >= target:
                return True
        if not cand:
            return False
        if len(chosen) + _color_bound(cand, adj) <= len(best):
            return False
        while cand:
            if len(chosen) + bin(cand).count("1") <= len(best):
                return False
            v = (cand & -cand).bit_length() - 1
            cand &= ~(1 << v)
            chosen.append(v)
            higher = cand & adj[v]
            if expand(chosen, higher):
                return True
            chosen.pop()
        return False

    expand([], (1 << len(adj)) - 1)
    return best


def greedy_clique(adj: list[int]) -> list[int]:
    """Best of the greedy cliques grown from each start vertex, smallest index first."""
    best: list[int] = []
    for s in range(len(adj)):
        clique = [s]
        cand = adj[s]
        while cand:
            v = (cand & -cand).bit_length() - 1
            clique.append(v)
            cand &= adj[v]
        clique.sort()
        if len(clique) > len(best):
            best = clique
    return best


def strongest_witness(
    S,
    candidates: Iterable | None = None,
    mode: str = "exact",
    w_target: int | None = None,
) -> MidpointWitness:
    """Largest midpoint-exclusion clique among the candidate points of S.

    ``S`` is a finite collection of points (numbers or vectors) or a
    membership predicate on tuples; with a predicate, ``candidates`` must be
    given.  Exact mode is limited to 40 candidates.
    """
    member, pts = _membership(S)
    if candidates is not None:
        pts = sorted({_point(p) for p in candidates})
        pts = [p for p in pts if member(p)]
    if pts is None:
        raise MicpError("a membership oracle needs a finite candidate window")
    if not pts:
        raise MicpError("empty input")
    if mode not in ("exact", "greedy"):
        raise MicpError(f"unknown mode {mode!r}")
    if mode == "exact" and len(pts) > EXACT_LIMIT:
        raise DeskScaleError(f"exact clique search is limited to {EXACT_LIMIT} candidates")
    adj = exclusion_graph(pts, member)
    idx = max_clique(adj, w_target) if mode == "exact" else greedy_clique(adj)
    if w_target is not None and mode == "greedy" and len(idx) > w_target:
        idx = idx[:w_target]
    R = tuple(pts[i] for i in idx)
    wit = MidpointWitness(R, len(R), dimension_lower_bound(len(R)))
    if not wit.verify(member):
        raise MicpError("internal error: witness failed verification")
    return wit


def parity_classes(Z: Sequence[Sequence[int]]) -> list[list[tuple]]:
    """Group integer vectors by componentwise parity (classes sorted by parity key)."""
    Z = [tuple(int(v) for v in z) for z in Z]
    if len({len(z) for z in Z}) > 1:
        raise MicpError("vectors must have a uniform dimension")
    groups: dict[tuple, list] = {}
    for z in Z:
        groups.setdefault(tuple(v % 2 for v in z), []).append(z)
    return [groups[k] for k in sorted(groups)]


def is_prime(k: int) -> bool:
    if k < 2:
        return False
    if k % 2 == 0:
        return k == 2
    f = 3
    while f * f <= k:
        if k % f == 0:
            return False
        f += 2
    return True


def primes_up_to(n: int) -> list[int]:
    return [k for k in range(2, n + 1) if is_prime(k)]


def prime_membership(q: tuple) -> bool:
    x = q[0]
    return isinstance(x, Fraction) and x.denominator == 1 and is_prime(x.numerator) or (
        isinstance(x, int) and is_prime(x)
    )


def even_parity_cube(n: int) -> list[tuple[int, ...]]:
    """Points of ``{0,1}^n`` with an even number of ones."""
    return [p for p in itertools.product((0, 1), repeat=n) if sum(p) % 2 == 0]
