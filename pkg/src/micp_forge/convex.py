"""Conic sets with rational data and exact polyhedral machinery.

A :class:`ConicSet` is ``{v : A v + b in K_1 x ... x K_m}`` for elementary
cones ``K_j``.  Polyhedra are kept separately in H-form
(:class:`PolyhedronH`, ``A v <= b`` plus ``E v = f``) and V-form
(:class:`PolyhedronV`).  Projection is exact Fourier-Motzkin elimination and
vertex enumeration is a small double-description method over Python ints.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import DeskScaleError, MicpError
from .rational import (
    ONE,
    ZERO,
    as_fraction,
    dot,
    inverse,
    nullspace,
    primitive,
    rank,
    rref,
    solve_affine,
    vec,
)

INFINITY = math.inf
DEFAULT_ROW_CAP = 10_000
DEFAULT_VERTEX_DIM_LIMIT = 8

CONE_KINDS = ("Zero", "Nonneg", "SecondOrder", "RotatedSecondOrder")


@dataclass(frozen=True)
class Cone:
    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in CONE_KINDS:
            raise MicpError(f"unknown cone kind {self.kind!r}")
        if self.dim < 0:
            raise MicpError("cone dimension must be nonnegative")
        if self.kind == "SecondOrder" and self.dim < 1:
            raise MicpError("SecondOrder cone needs dim >= 1")
        if self.kind == "RotatedSecondOrder" and self.dim < 2:
            raise MicpError("RotatedSecondOrder cone needs dim >= 2")

    @property
    def polyhedral(self) -> bool:
        return self.kind in ("Zero", "Nonneg")

    def contains(self, vals: Sequence[Fraction]) -> bool:
        if self.kind == "Zero":
            return all(v == 0 for v in vals)
        if self.kind == "Nonneg":
            return all(v >= 0 for v in vals)
        if self.kind == "SecondOrder":
            t = vals[0]
            return t >= 0 and sum(v * v for v in vals[1:]) <= t * t
        z, t = vals[0], vals[1]
        return z >= 0 and t >= 0 and sum(v * v for v in vals[2:]) <= z * t


def Zero(m: int) -> Cone:
    return Cone("Zero", m)


def Nonneg(m: int) -> Cone:
    return Cone("Nonneg", m)


def SecondOrder(m: int) -> Cone:
    return Cone("SecondOrder", m)


def RotatedSecondOrder(m: int) -> Cone:
    return Cone("RotatedSecondOrder", m)


@dataclass(frozen=True)
class ConicSet:
    """``{v in R^ambient_dim : A v + b in cones[0] x cones[1] x ...}``."""

    ambient_dim: int
    A: tuple
    b: tuple
    cones: tuple

    def __post_init__(self):
        A = tuple(vec(row) for row in self.A)
        b = vec(self.b)
        cones = tuple(self.cones)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "cones", cones)
        if any(len(row) != self.ambient_dim for row in A):
            raise MicpError("A must have ambient_dim columns")
        if len(b) != len(A):
            raise MicpError("b must have one entry per row of A")
        if sum(c.dim for c in cones) != len(A):
            raise MicpError("total cone dimension must equal the number of rows")

    @classmethod
    def from_blocks(cls, ambient_dim: int, blocks: Iterable[tuple[Cone | str, Sequence[tuple[Sequence, object]]]]) -> "ConicSet":
        """Assemble from ``(cone, [(coeffs, const), ...])`` blocks."""
        A, b, cones = [], [], []
        for cone, rows in blocks:
            rows = list(rows)
            if isinstance(cone, str):
                cone = Cone(cone, len(rows))
            if cone.dim != len(rows):
                raise MicpError("block row count does not match cone dimension")
            if not rows:
                continue
            for coeffs, const in rows:
                A.append(coeffs)
                b.append(const)
            cones.append(cone)
        return cls(ambient_dim, tuple(A), tuple(b), tuple(cones))

    @property
    def rows(self) -> int:
        return len(self.A)

    def blocks(self):
        """Yield ``(cone, start_row)`` pairs."""
        r = 0
        for cone in self.cones:
            yield cone, r
            r += cone.dim

    @property
    def is_polyhedral(self) -> bool:
        return all(c.polyhedral for c in self.cones)

    def evaluate(self, v: Sequence) -> tuple:
        if len(v) != self.ambient_dim:
            raise MicpError(f"dimension mismatch: expected {self.ambient_dim}, got {len(v)}")
        v = vec(v)
        return tuple(dot(row, v) + bi for row, bi in zip(self.A, self.b))

    def contains(self, v: Sequence) -> bool:
        vals = self.evaluate(v)
        for cone, r in self.blocks():
            if not cone.contains(vals[r:r + cone.dim]):
                return False
        return True

    def to_polyhedron(self) -> "PolyhedronH":
        if not self.is_polyhedral:
            raise MicpError("set has non-polyhedral cone blocks")
        A, b, E, f = [], [], [], []
        for cone, r in self.blocks():
            for i in range(r, r + cone.dim):
                if cone.kind == "Zero":
                    E.append(self.A[i])
                    f.append(-self.b[i])
                else:
                    A.append(tuple(-x for x in self.A[i]))
                    b.append(self.b[i])
        return PolyhedronH(self.ambient_dim, tuple(A), tuple(b), tuple(E), tuple(f))

    @classmethod
    def from_polyhedron(cls, P: "PolyhedronH") -> "ConicSet":
        blocks = [
            (Zero(len(P.E)), [(row, -fi) for row, fi in zip(P.E, P.f)]),
            (Nonneg(len(P.A)), [(tuple(-x for x in row), bi) for row, bi in zip(P.A, P.b)]),
        ]
        return cls.from_blocks(P.dim, blocks)

    def embed(self, ambient_dim: int, columns: Sequence[int]) -> "ConicSet":
        """Same constraints with variable j moved to column ``columns[j]``."""
        if len(columns) != self.ambient_dim:
            raise MicpError("column map must cover every variable")
        A = []
        for row in self.A:
            new = [ZERO] * ambient_dim
            for j, c in enumerate(columns):
                new[c] += row[j]
            A.append(tuple(new))
        return ConicSet(ambient_dim, tuple(A), self.b, self.cones)


def interval(lo, hi) -> ConicSet:
    lo, hi = as_fraction(lo), as_fraction(hi)
    return ConicSet.from_blocks(1, [(Nonneg(2), [((ONE,), -lo), ((-ONE,), hi)])])


def box(lo: Sequence, hi: Sequence) -> ConicSet:
    n = len(lo)
    rows = []
    for i in range(n):
        e = tuple(ONE if j == i else ZERO for j in range(n))
        rows.append((e, -as_fraction(lo[i])))
        rows.append((tuple(-x for x in e), as_fraction(hi[i])))
    return ConicSet.from_blocks(n, [(Nonneg(2 * n), rows)])


def point(p: Sequence) -> ConicSet:
    n = len(p)
    rows = [(tuple(ONE if j == i else ZERO for j in range(n)), -as_fraction(p[i])) for i in range(n)]
    return ConicSet.from_blocks(n, [(Zero(n), rows)])


def halfline(start, direction: int = 1) -> ConicSet:
    """``{x >= start}`` for direction +1, ``{x <= start}`` for -1."""
    s = as_fraction(start)
    if direction not in (1, -1):
        raise MicpError("direction must be +1 or -1")
    return ConicSet.from_blocks(1, [(Nonneg(1), [((Fraction(direction),), -direction * s)])])


def ball(center: Sequence, radius) -> ConicSet:
    """Euclidean ball ``||x - center|| <= radius`` as a SecondOrder block."""
    n = len(center)
    rows = [((ZERO,) * n, as_fraction(radius))]
    for i in range(n):
        rows.append((tuple(ONE if j == i else ZERO for j in range(n)), -as_fraction(center[i])))
    return ConicSet.from_blocks(n, [(SecondOrder(n + 1), rows)])


def recession_cone(S: ConicSet) -> ConicSet:
    """``{d : A d in K}``; equals the recession cone when S is nonempty."""
    return ConicSet(S.ambient_dim, S.A, (ZERO,) * S.rows, S.cones)


def conic_hull(T: ConicSet) -> ConicSet:
    """Homogenization ``{(v, z) : A v + z b in K, z >= 0}``."""
    A = [tuple(row) + (bi,) for row, bi in zip(T.A, T.b)]
    A.append((ZERO,) * T.ambient_dim + (ONE,))
    return ConicSet(T.ambient_dim + 1, tuple(A), (ZERO,) * len(A), T.cones + (Nonneg(1),))


def recession_equalize(T: ConicSet) -> ConicSet:
    """Lift T to ``{(v, t) : v in T, ||v||^2 <= t}`` (t appended last)."""
    n = T.ambient_dim
    A = [tuple(row) + (ZERO,) for row in T.A]
    b = list(T.b)
    A.append((ZERO,) * (n + 1))
    b.append(ONE)
    A.append((ZERO,) * n + (ONE,))
    b.append(ZERO)
    for i in range(n):
        A.append(tuple(ONE if j == i else ZERO for j in range(n + 1)))
        b.append(ZERO)
    return ConicSet(n + 1, tuple(A), tuple(b), T.cones + (RotatedSecondOrder(n + 2),))


def membership(S: ConicSet, v: Sequence) -> bool:
    return S.contains(v)


# ---------------------------------------------------------------------------
# H-representation and Fourier-Motzkin


@dataclass(frozen=True)
class PolyhedronH:
    """``{v : A v <= b, E v = f}`` in ``dim`` variables."""

    dim: int
    A: tuple = ()
    b: tuple = ()
    E: tuple = ()
    f: tuple = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(vec(r) for r in self.A))
        object.__setattr__(self, "b", vec(self.b))
        object.__setattr__(self, "E", tuple(vec(r) for r in self.E))
        object.__setattr__(self, "f", vec(self.f))
        for rows, rhs in ((self.A, self.b), (self.E, self.f)):
            if len(rows) != len(rhs):
                raise MicpError("row/rhs count mismatch")
            if any(len(r) != self.dim for r in rows):
                raise MicpError("row length must equal dim")

    @classmethod
    def empty(cls, dim: int) -> "PolyhedronH":
        return cls(dim, ((ZERO,) * dim,), (-ONE,))

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "PolyhedronH":
        return box(lo, hi).to_polyhedron()

    def contains(self, v: Sequence) -> bool:
        v = vec(v)
        if len(v) != self.dim:
            raise MicpError("dimension mismatch")
        return all(dot(r, v) <= bi for r, bi in zip(self.A, self.b)) and all(
            dot(r, v) == fi for r, fi in zip(self.E, self.f)
        )

    def is_empty(self) -> bool:
        if "empty" not in self._cache and self.dim == 1:
            self._cache["empty"] = interval_of(self) is None
        if "empty" not in self._cache:
            try:
                proj = fm_project(self, [])
                self._cache["empty"] = bool(proj.A) or bool(proj.E)
            except DeskScaleError:
                # FM blows up doubly exponentially; double description does not
                self._cache["empty"] = vertices_and_rays(self).is_empty
        return self._cache["empty"]

    def intersect(self, other: "PolyhedronH") -> "PolyhedronH":
        if other.dim != self.dim:
            raise MicpError("dimension mismatch")
        return PolyhedronH(self.dim, self.A + other.A, self.b + other.b, self.E + other.E, self.f + other.f)

    def substitute(self, fixed: dict[int, Fraction]) -> "PolyhedronH":
        """Fix the variables in ``fixed`` and drop them from the variable list."""
        keep = [j for j in range(self.dim) if j not in fixed]

        def sub(rows, rhs):
            out_r, out_b = [], []
            for r, bi in zip(rows, rhs):
                out_r.append(tuple(r[j] for j in keep))
                out_b.append(bi - sum((r[j] * as_fraction(val) for j, val in fixed.items()), ZERO))
            return tuple(out_r), tuple(out_b)

        A, b = sub(self.A, self.b)
        E, f = sub(self.E, self.f)
        return PolyhedronH(len(keep), A, b, E, f)


def interval_of(P: PolyhedronH):
    """``(lo, hi)`` of a 1D polyhedron (None for an infinite end), or None if empty."""
    if P.dim != 1:
        raise MicpError("interval_of needs a 1D polyhedron")
    lo = hi = None
    for (a,), f in zip(P.E, P.f):
        if a == 0:
            if f != 0:
                return None
            continue
        v = f / a
        lo = v if lo is None else max(lo, v)
        hi = v if hi is None else min(hi, v)
    for (a,), b in zip(P.A, P.b):
        if a == 0:
            if b < 0:
                return None
        elif a > 0:
            hi = b / a if hi is None else min(hi, b / a)
        else:
            lo = b / a if lo is None else max(lo, b / a)
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def _normalize_row(a: Sequence[Fraction], b: Fraction):
    """Scale ``a x <= b`` so that ``a`` is a primitive integer vector."""
    scale = reduce(math.lcm, (x.denominator for x in a), 1)
    ints = [int(x * scale) for x in a]
    g = reduce(math.gcd, (abs(x) for x in ints), 0)
    if g == 0:
        return None, b
    factor = Fraction(scale, g)
    return tuple(x // g for x in ints), b * factor


def _normalize_eq(a: Sequence[Fraction], f: Fraction):
    key, rhs = _normalize_row(a, f)
    if key is None:
        return None, rhs
    lead = next(x for x in key if x != 0)
    if lead < 0:
        key = tuple(-x for x in key)
        rhs = -rhs
    return key, rhs


def _clean_inequalities(rows: Iterable[tuple[Sequence, Fraction]]):
    """Normalize, drop trivially true rows, keep tightest rhs per direction.

    Returns ``(dict direction -> rhs, infeasible_flag)``.
    """
    best: dict[tuple, Fraction] = {}
    for a, b in rows:
        key, rhs = _normalize_row(a, b)
        if key is None:
            if rhs < 0:
                return {}, True
            continue
        if key not in best or rhs < best[key]:
            best[key] = rhs
    for key, rhs in best.items():
        neg = tuple(-x for x in key)
        if neg in best and best[neg] < -rhs:
            return {}, True
    return best, False


def fm_project(P: PolyhedronH, keep: Sequence[int], row_cap: int = DEFAULT_ROW_CAP) -> PolyhedronH:
    """Exact projection of P onto the variables ``keep`` (in that order).

    Equalities are used for substitution first; the remaining variables are
    removed by Fourier-Motzkin, choosing at each step the variable with the
    fewest generated rows.  Rows are deduplicated syntactically.  An empty
    projection is returned as a single ``0 <= -1`` row.
    """
    keep = list(keep)
    if len(set(keep)) != len(keep) or any(not 0 <= k < P.dim for k in keep):
        raise MicpError("keep must be distinct variable indices")
    n = P.dim
    drop = [j for j in range(n) if j not in keep]
    ineqs = [(list(r), bi) for r, bi in zip(P.A, P.b)]
    eqs = [(list(r), fi) for r, fi in zip(P.E, P.f)]

    # equality substitution
    remaining = set(drop)
    while True:
        pick = None
        for idx, (e, fi) in enumerate(eqs):
            js = [j for j in remaining if e[j] != 0]
            if js:
                pick = (idx, min(js, key=lambda j: (abs(e[j]).denominator, j)))
                break
        if pick is None:
            break
        idx, j = pick
        e, fi = eqs.pop(idx)
        ej = e[j]

        def sub(row, rhs):
            c = row[j] / ej
            if c == 0:
                return row, rhs
            return [x - c * y for x, y in zip(row, e)], rhs - c * fi

        ineqs = [sub(r, bi) for r, bi in ineqs]
        eqs = [sub(r, fi2) for r, fi2 in eqs]
        remaining.discard(j)

    eq_clean: dict[tuple, Fraction] = {}
    for e, fi in eqs:
        key, rhs = _normalize_eq(e, fi)
        if key is None:
            if rhs != 0:
                return PolyhedronH.empty(len(keep))
            continue
        if key in eq_clean and eq_clean[key] != rhs:
            return PolyhedronH.empty(len(keep))
        eq_clean[key] = rhs

    rows, infeasible = _clean_inequalities((r, bi) for r, bi in ineqs)
    if infeasible:
        return PolyhedronH.empty(len(keep))

    remaining = set(j for j in remaining if any(k[j] != 0 for k in rows))
    while remaining:
        def cost(j):
            pos = sum(1 for k in rows if k[j] > 0)
            neg = sum(1 for k in rows if k[j] < 0)
            return (pos * neg - pos - neg, j)

        j = min(remaining, key=cost)
        remaining.discard(j)
        pos = [(k, b) for k, b in rows.items() if k[j] > 0]
        neg = [(k, b) for k, b in rows.items() if k[j] < 0]
        new = [(k, b) for k, b in rows.items() if k[j] == 0]
        if len(new) + len(pos) * len(neg) > row_cap:
            raise DeskScaleError(f"Fourier-Motzkin row cap {row_cap} exceeded")
        for kp, bp in pos:
            for kn, bn in neg:
                cp, cn = -kn[j], kp[j]
                combo = [cp * x + cn * y for x, y in zip(kp, kn)]
                new.append(([Fraction(x) for x in combo], cp * bp + cn * bn))
        rows, infeasible = _clean_inequalities((list(map(Fraction, k)), b) for k, b in new)
        if infeasible:
            return PolyhedronH.empty(len(keep))
        remaining = set(jj for jj in remaining if any(k[jj] != 0 for k in rows))

    # rows that pin a direction from both sides become equalities
    A_out, b_out = [], []
    for key in sorted(rows):
        rhs = rows[key]
        neg = tuple(-x for x in key)
        if neg in rows and rows[neg] == -rhs:
            ek, er = _normalize_eq([Fraction(x) for x in key], rhs)
            eq_clean[ek] = er
            continue
        A_out.append(tuple(Fraction(key[k]) for k in keep))
        b_out.append(rhs)
    E_out, f_out = [], []
    for key in sorted(eq_clean):
        E_out.append(tuple(Fraction(key[k]) for k in keep))
        f_out.append(eq_clean[key])
    return PolyhedronH(len(keep), tuple(A_out), tuple(b_out), tuple(E_out), tuple(f_out))


# ---------------------------------------------------------------------------
# V-representation by double description


@dataclass(frozen=True)
class PolyhedronV:
    """``conv(vertices) + cone(rays) + span(lineality)``; no vertices means empty."""

    dim: int
    vertices: tuple = ()
    rays: tuple = ()
    lineality: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(vec(v) for v in self.vertices))
        object.__setattr__(self, "rays", tuple(tuple(r) for r in self.rays))
        object.__setattr__(self, "lineality", tuple(tuple(r) for r in self.lineality))

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality


def _extreme_rays(G: list[tuple[int, ...]], dim: int) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone ``{y : G y <= 0}`` (G of column rank dim)."""
    basis: list[int] = []
    for i, row in enumerate(G):
        if rank([G[k] for k in basis] + [row]) > len(basis):
            basis.append(i)
            if len(basis) == dim:
                break
    if len(basis) < dim:
        raise MicpError("cone is not pointed")
    binv = inverse([G[k] for k in basis])
    rays = []
    masks = []
    for c in range(dim):
        rays.append(primitive([-binv[r][c] for r in range(dim)]))
        # ray c is tight on every basis row except row c
        masks.append(sum(1 << basis[k] for k in range(dim) if k != c))
    for i, row in enumerate(G):
        if i in basis:
            continue
        vals = [sum(a * y for a, y in zip(row, r)) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        bit = 1 << i
        new_rays = [rays[k] for k in neg] + [rays[k] for k in zer]
        new_masks = [masks[k] for k in neg] + [masks[k] | bit for k in zer]
        for p in pos:
            for q in neg:
                common = masks[p] & masks[q]
                if bin(common).count("1") < dim - 2:
                    continue
                if any(
                    k != p and k != q and (masks[k] & common) == common
                    for k in range(len(rays))
                ):
                    continue
                vp, vq = vals[p], -vals[q]
                combo = [vq * a + vp * b for a, b in zip(rays[p], rays[q])]
                new_rays.append(primitive(combo))
                new_masks.append(common | bit)
        rays, masks = new_rays, new_masks
        if not rays:
            break
    return rays


def _integer_row(values: Sequence[Fraction]) -> tuple[int, ...]:
    return primitive(values)


def vertices_and_rays(P: PolyhedronH, limit: int = DEFAULT_VERTEX_DIM_LIMIT) -> PolyhedronV:
    """Exact V-representation of P (vertices are minimal-face representatives).

    With lineality, P is intersected with a complement of the lineality space
    inside its affine hull and the lineality basis is reported separately.
    """
    if P.dim > limit:
        raise DeskScaleError()
    n = P.dim
    if P.E:
        sol = solve_affine(P.E, P.f)
        if sol is None:
            return PolyhedronV(n)
        x0, N = sol
    else:
        x0 = (ZERO,) * n
        N = [tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    m = len(N)
    Ap = [tuple(dot(row, col) for col in N) for row in P.A]
    bp = [bi - dot(row, x0) for row, bi in zip(P.A, P.b)]

    def to_x(u, affine):
        out = [x0[i] if affine else ZERO for i in range(n)]
        for coef, col in zip(u, N):
            if coef:
                for i in range(n):
                    out[i] += coef * col[i]
        return tuple(out)

    lin_u = nullspace(Ap, m) if Ap else [tuple(ONE if i == j else ZERO for i in range(m)) for j in range(m)]
    lineality = tuple(sorted(_integer_row(to_x(l, False)) for l in lin_u))
    if Ap:
        r, piv = rref(Ap)
        W = [tuple(row) for row in r[: len(piv)]]
    else:
        W = []
    k = len(W)
    # inequality rows in w-coordinates, homogenized with s
    G = []
    for row, bi in zip(Ap, bp):
        coeffs = [dot(row, w) for w in W] + [-bi]
        G.append(_integer_row(coeffs))
    G.append(tuple([0] * k + [-1]))
    G = [g for g in dict.fromkeys(G)]
    rays = _extreme_rays(G, k + 1)
    vertices, rec = [], []
    for ray in rays:
        w, s = ray[:k], ray[k]
        if s > 0:
            u = [ZERO] * m
            for coef, wv in zip(w, W):
                for i in range(m):
                    u[i] += Fraction(coef, s) * wv[i]
            vertices.append(to_x(u, True))
        else:
            u = [ZERO] * m
            for coef, wv in zip(w, W):
                for i in range(m):
                    u[i] += coef * wv[i]
            rec.append(_integer_row(to_x(u, False)))
    if not vertices:
        return PolyhedronV(n)
    return PolyhedronV(n, tuple(sorted(set(vertices))), tuple(sorted(set(rec))), lineality)


def linear_max(P: PolyhedronH | PolyhedronV, c: Sequence):
    """``max c.v`` over P; ``INFINITY`` when unbounded above."""
    V = P if isinstance(P, PolyhedronV) else vertices_and_rays(P)
    if V.is_empty:
        raise MicpError("empty polyhedron")
    c = vec(c)
    if any(dot(c, l) != 0 for l in V.lineality) or any(dot(c, r) > 0 for r in V.rays):
        return INFINITY
    return max(dot(c, v) for v in V.vertices)


def v_contained_in(V: PolyhedronV, P: PolyhedronH) -> bool:
    """Whether the polyhedron generated by V lies inside P."""
    if V.is_empty:
        return True
    if not all(P.contains(v) for v in V.vertices):
        return False
    rec = PolyhedronH(P.dim, P.A, (ZERO,) * len(P.A), P.E, (ZERO,) * len(P.E))
    if not all(rec.contains(r) for r in V.rays):
        return False
    return all(rec.contains(l) and rec.contains(tuple(-x for x in l)) for l in V.lineality)


def same_polyhedron(P: PolyhedronH, Q: PolyhedronH) -> bool:
    """Exact set equality by mutual V-in-H containment."""
    if P.dim != Q.dim:
        return False
    return v_contained_in(vertices_and_rays(P), Q) and v_contained_in(vertices_and_rays(Q), P)


def polyhedron_from_v(V: PolyhedronV) -> PolyhedronH:
    """H-representation of a V-described polyhedron by polar double description.

    Valid inequalities ``a.x <= beta`` form the cone ``a.v <= beta``,
    ``a.r <= 0``, ``a.l = 0``.  Restricting ``a`` to the span of the
    generator directions makes that cone pointed; its extreme rays are the
    facets, and vectors orthogonal to the span give the equalities.
    """
    n = V.dim
    if V.is_empty:
        return PolyhedronH.empty(n)
    v0 = V.vertices[0]
    dirs = [tuple(a - b for a, b in zip(v, v0)) for v in V.vertices[1:]]
    dirs += [vec(r) for r in V.rays] + [vec(l) for l in V.lineality]
    dirs = [d for d in dirs if any(d)]
    E = [tuple(u) for u in nullspace(dirs, n)] if dirs else [
        tuple(ONE if i == j else ZERO for i in range(n)) for j in range(n)]
    f = [dot(u, v0) for u in E]
    if not dirs:
        return PolyhedronH(n, (), (), tuple(E), tuple(f))
    r, piv = rref(dirs)
    basis = [tuple(row) for row in r[: len(piv)]]
    m = len(basis)
    G = []
    for v in V.vertices:
        G.append(_integer_row([dot(b, v) for b in basis] + [-ONE]))
    for ray in V.rays:
        G.append(_integer_row([dot(b, vec(ray)) for b in basis] + [ZERO]))
    for l in V.lineality:
        row = _integer_row([dot(b, vec(l)) for b in basis] + [ZERO])
        if any(row):
            G.append(row)
            G.append(tuple(-x for x in row))
    G = [g for g in dict.fromkeys(G) if any(g)]
    A, b = [], []
    for ray in _extreme_rays(G, m + 1):
        c, beta = ray[:m], ray[m]
        a = tuple(sum((ci * bt[i] for ci, bt in zip(c, basis)), ZERO) for i in range(n))
        if any(a):
            A.append(a)
            b.append(Fraction(beta))
    return PolyhedronH(n, tuple(A), tuple(b), tuple(E), tuple(f))
