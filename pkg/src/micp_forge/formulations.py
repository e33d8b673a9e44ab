"""MICP formulations ``S = proj_x(M cap (R^{n+p} x Z^d))`` and their builders.

Variables of ``M`` are ordered as the x-block (n), the y-block (p) and the
z-block (d).  Binary variables are integer variables bounded by ``0 <= z <= 1``
rows inside ``M``.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .convex import (
    Cone,
    ConicSet,
    INFINITY,
    Nonneg,
    PolyhedronH,
    PolyhedronV,
    RotatedSecondOrder,
    Zero,
    conic_hull,
    fm_project,
    interval_of,
    linear_max,
    polyhedron_from_v,
    recession_cone,
    vertices_and_rays,
)
from .errors import MicpError
from .rational import ONE, ZERO, as_fraction, dot, is_unimodular, matmul, vec


@dataclass(frozen=True)
class MicpFormulation:
    M: ConicSet
    n: int
    p: int
    d: int
    provenance: str = ""

    def __post_init__(self):
        if min(self.n, self.p, self.d) < 0:
            raise MicpError("block sizes must be nonnegative")
        if self.n + self.p + self.d != self.M.ambient_dim:
            raise MicpError("n + p + d must equal the ambient dimension of M")

    @property
    def x_index(self) -> range:
        return range(0, self.n)

    @property
    def y_index(self) -> range:
        return range(self.n, self.n + self.p)

    @property
    def z_index(self) -> range:
        return range(self.n + self.p, self.n + self.p + self.d)

    @property
    def is_polyhedral(self) -> bool:
        return self.M.is_polyhedral

    def contains(self, x: Sequence, y: Sequence, z: Sequence) -> bool:
        """Membership of the full point ``(x, y, z)`` in M (z need not be integral)."""
        return self.M.contains(tuple(x) + tuple(y) + tuple(z))


class _Builder:
    """Accumulates cone blocks of affine rows over a fixed variable list."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.blocks: list[tuple[Cone, list]] = []

    def row(self, coeffs: dict, const=0):
        r = [ZERO] * self.nvars
        for j, c in coeffs.items():
            r[j] += as_fraction(c)
        return tuple(r), as_fraction(const)

    def add(self, kind: str, rows: list):
        if rows:
            self.blocks.append((Cone(kind, len(rows)), rows))

    def add_set(self, S: ConicSet, columns: Sequence[int], scale: int | None = None):
        """Embed S on ``columns``; with ``scale`` the constant term multiplies that column."""
        E = S.embed(self.nvars, columns)
        r = 0
        for cone in S.cones:
            rows = []
            for i in range(r, r + cone.dim):
                coeffs = list(E.A[i])
                if scale is None:
                    rows.append((tuple(coeffs), E.b[i]))
                else:
                    coeffs[scale] += E.b[i]
                    rows.append((tuple(coeffs), ZERO))
            self.blocks.append((cone, rows))
            r += cone.dim

    def build(self) -> ConicSet:
        return ConicSet.from_blocks(self.nvars, self.blocks)


def _check_sets(sets, n):
    sets = list(sets)
    if not sets:
        raise MicpError("empty input")
    if n is None:
        n = sets[0].ambient_dim
    for S in sets:
        if S.ambient_dim < n:
            raise MicpError("every set must have at least n coordinates")
    return sets, n


def _lattice_directions(m: int, count: int = 26):
    out = []
    for d in itertools.product((-1, 0, 1), repeat=m):
        if any(d):
            out.append(d)
            if len(out) == count:
                break
    return out


def recession_mismatch(sets: Sequence[ConicSet]) -> list[tuple[int, tuple]]:
    """Sampled lattice directions on which the recession cones disagree."""
    bad = []
    dims = {S.ambient_dim for S in sets}
    if len(dims) != 1:
        return [(-1, ())]
    cones = [recession_cone(S) for S in sets]
    for d in _lattice_directions(dims.pop()):
        flags = [C.contains(d) for C in cones]
        if len(set(flags)) > 1:
            bad.append((flags.index(not flags[0]), d))
    return bad


def union_basic(sets: Sequence[ConicSet], n: int | None = None, check_recession: bool = True) -> MicpFormulation:
    """Disjunctive union of sets sharing a recession cone, one binary per set.

    ``x = sum x^i``, ``(x^i, y^i, z_i)`` in the conic hull of set i,
    ``sum z_i = 1``, ``0 <= z <= 1``.
    """
    sets, n = _check_sets(sets, n)
    if check_recession:
        bad = recession_mismatch(sets)
        if bad:
            warnings.warn(f"recession cones differ on sampled directions {bad[:3]}", stacklevel=2)
    k = len(sets)
    p_list = [S.ambient_dim - n for S in sets]
    p = sum(S.ambient_dim for S in sets)
    nvars = n + p + k
    zc = n + p
    B = _Builder(nvars)
    offsets, off = [], n
    for S in sets:
        offsets.append(off)
        off += S.ambient_dim
    B.add("Zero", [B.row({**{i: 1}, **{offsets[j] + i: -1 for j in range(k)}}) for i in range(n)])
    for j, S in enumerate(sets):
        cols = list(range(offsets[j], offsets[j] + S.ambient_dim))
        B.add_set(conic_hull(S), cols + [zc + j])
    _binary_simplex(B, [zc + j for j in range(k)])
    return MicpFormulation(B.build(), n, p, k, f"union_basic(k={k}, p={p_list})")


def _binary_simplex(B: _Builder, zcols: Sequence[int]):
    B.add("Zero", [B.row({c: 1 for c in zcols}, -1)])
    rows = []
    for c in zcols:
        rows.append(B.row({c: 1}))
        rows.append(B.row({c: -1}, 1))
    B.add("Nonneg", rows)


def _union_lifted(sets, n, ideal: bool) -> MicpFormulation:
    sets, n = _check_sets(sets, n)
    k = len(sets)
    offsets, off = [], n
    for S in sets:
        offsets.append(off)
        off += S.ambient_dim + 1
    p = off - n
    nvars = n + p + k
    zc = n + p
    B = _Builder(nvars)
    B.add("Zero", [B.row({**{i: 1}, **{offsets[j] + i: -1 for j in range(k)}}) for i in range(n)])
    for j, S in enumerate(sets):
        o = offsets[j]
        cols = list(range(o, o + S.ambient_dim))
        tcol = o + S.ambient_dim
        B.add_set(conic_hull(S), cols + [zc + j])
        normed = cols[:n] if ideal else cols
        rows = [B.row({zc + j: 1}), B.row({tcol: 1})] + [B.row({c: 1}) for c in normed]
        B.blocks.append((RotatedSecondOrder(len(rows)), rows))
    _binary_simplex(B, [zc + j for j in range(k)])
    name = "union_ideal" if ideal else "union_projected"
    return MicpFormulation(B.build(), n, p, k, f"{name}(k={k})")


def union_projected(sets: Sequence[ConicSet], n: int | None = None) -> MicpFormulation:
    """Union of projections without a recession-cone assumption.

    Each block ``(x^i, y^i, t_i)`` adds ``||(x^i, y^i)||^2 <= z_i t_i``.
    """
    return _union_lifted(sets, n, ideal=False)


def union_ideal(sets: Sequence[ConicSet], n: int | None = None) -> MicpFormulation:
    """Like :func:`union_projected` but only ``||x^i||^2 <= z_i t_i``; ideal."""
    return _union_lifted(sets, n, ideal=True)


def union_rational(F1: MicpFormulation, F2: MicpFormulation) -> MicpFormulation:
    """Union of two formulations that keeps their index sets as a product.

    Layout: ``x | x1 y1 x2 y2 t | z1 z2 z'``; ``z' = 0`` selects ``x = x1`` and
    ``z' = 1`` selects ``x = x2``.  Only ``z'`` receives ``[0, 1]`` bounds, the
    index sets of F1 and F2 are left as they are.
    """
    if F1.n != F2.n:
        raise MicpError("dimension mismatch: F1.n != F2.n")
    n = F1.n
    a1 = n + F1.p
    a2 = n + F2.p
    p = a1 + a2 + 1
    d = F1.d + F2.d + 1
    nvars = n + p + d
    o1, o2, tcol = n, n + a1, n + a1 + a2
    z1, z2, zp = n + p, n + p + F1.d, n + p + F1.d + F2.d
    B = _Builder(nvars)
    cols1 = list(range(o1, o1 + a1)) + list(range(z1, z1 + F1.d))
    cols2 = list(range(o2, o2 + a2)) + list(range(z2, z2 + F2.d))
    B.add_set(F1.M, cols1)
    B.add_set(F2.M, cols2)
    rows = [B.row({zp: 1}), B.row({tcol: 1})] + [B.row({i: 1, o1 + i: -1}) for i in range(n)]
    B.blocks.append((RotatedSecondOrder(n + 2), rows))
    rows = [B.row({zp: -1}, 1), B.row({tcol: 1})] + [B.row({i: 1, o2 + i: -1}) for i in range(n)]
    B.blocks.append((RotatedSecondOrder(n + 2), rows))
    B.add("Nonneg", [B.row({tcol: 1}), B.row({zp: 1}), B.row({zp: -1}, 1)])
    prov = f"union_rational({F1.provenance or '?'}, {F2.provenance or '?'})"
    return MicpFormulation(B.build(), n, p, d, prov)


def combine(op: str, F1: MicpFormulation, F2: MicpFormulation) -> MicpFormulation:
    """Intersection, product or Minkowski sum of two formulations."""
    if op in ("intersection", "minkowski_sum") and F1.n != F2.n:
        raise MicpError("dimension mismatch: operation needs equal n")
    d = F1.d + F2.d
    if op == "intersection":
        n = F1.n
        p = F1.p + F2.p
        nvars = n + p + d
        cols1 = list(range(n)) + list(range(n, n + F1.p)) + list(range(n + p, n + p + F1.d))
        cols2 = list(range(n)) + list(range(n + F1.p, n + p)) + list(range(n + p + F1.d, nvars))
        B = _Builder(nvars)
        B.add_set(F1.M, cols1)
        B.add_set(F2.M, cols2)
    elif op == "product":
        n = F1.n + F2.n
        p = F1.p + F2.p
        nvars = n + p + d
        cols1 = list(range(F1.n)) + list(range(n, n + F1.p)) + list(range(n + p, n + p + F1.d))
        cols2 = list(range(F1.n, n)) + list(range(n + F1.p, n + p)) + list(range(n + p + F1.d, nvars))
        B = _Builder(nvars)
        B.add_set(F1.M, cols1)
        B.add_set(F2.M, cols2)
    elif op == "minkowski_sum":
        n = F1.n
        # y-block: x1, y1, x2, y2
        p = 2 * n + F1.p + F2.p
        nvars = n + p + d
        o1 = n
        o2 = n + n + F1.p
        cols1 = list(range(o1, o1 + n + F1.p)) + list(range(n + p, n + p + F1.d))
        cols2 = list(range(o2, o2 + n + F2.p)) + list(range(n + p + F1.d, nvars))
        B = _Builder(nvars)
        B.add_set(F1.M, cols1)
        B.add_set(F2.M, cols2)
        B.add("Zero", [B.row({i: 1, o1 + i: -1, o2 + i: -1}) for i in range(n)])
    else:
        raise MicpError(f"unknown operation {op!r}")
    return MicpFormulation(B.build(), n, p, d, f"{op}({F1.provenance or '?'}, {F2.provenance or '?'})")


def reindex_unimodular(F: MicpFormulation, U: Sequence[Sequence[int]]) -> MicpFormulation:
    """Preimage of M under ``z = U w``; slice at w equals slice of F at ``U w``."""
    if len(U) != F.d or any(len(r) != F.d for r in U):
        raise MicpError("U must be d x d")
    if not is_unimodular(U):
        raise MicpError("U is not unimodular")
    if F.d == 0:
        return F
    zs = F.n + F.p
    Az = [row[zs:] for row in F.M.A]
    newz = matmul(Az, U)
    A = tuple(tuple(row[:zs]) + tuple(nz) for row, nz in zip(F.M.A, newz))
    M = ConicSet(F.M.ambient_dim, A, F.M.b, F.M.cones)
    return MicpFormulation(M, F.n, F.p, F.d, f"reindex({F.provenance})")


def relax_first_integer(F: MicpFormulation) -> MicpFormulation:
    """Drop integrality of the first z variable by moving it to the y-block."""
    if F.d == 0:
        raise MicpError("formulation has no integer variables")
    # the first z column sits right after the y-block, so only the partition moves
    return MicpFormulation(F.M, F.n, F.p + 1, F.d - 1, f"relax({F.provenance})")


# ---------------------------------------------------------------------------
# slices


@dataclass
class SliceFamily:
    """Nonempty slices of a formulation over a finite z-window."""

    window: list
    slices: dict = field(default_factory=dict)

    @property
    def index_points(self) -> list:
        return sorted(self.slices)


class _Slicer:
    """Slice evaluation with structural reductions and cached projections.

    For a fixed z the continuous part is simplified by two exact rules:
    a rotated or plain second-order block whose product/radius row is the
    constant 0 forces its norm rows to vanish, and a y-variable that only
    ever loosens its rows when increased (positive coefficient in
    inequalities, product row of a block whose partner is a positive
    constant, radius row) lets those rows be dropped.  When only polyhedral
    rows remain, the reduction pattern is projected once onto (x, z) and
    reused for every z with the same pattern.
    """

    def __init__(self, F: MicpFormulation):
        self.F = F
        self.nxy = F.n + F.p
        M = F.M
        self.blocks = [(cone, list(range(r, r + cone.dim))) for cone, r in M.blocks()]
        self.xy_const = [all(x == 0 for x in M.A[i][: self.nxy]) for i in range(M.rows)]
        self.z_rows = {}
        self.z_int = {}
        for i in range(M.rows):
            zc = [(j, c) for j, c in enumerate(M.A[i][self.nxy:]) if c != 0]
            self.z_rows[i] = zc
            # scaled integer copy: same sign, cheap to evaluate
            L = math.lcm(M.b[i].denominator, *(c.denominator for _, c in zc))
            self.z_int[i] = (int(M.b[i] * L), [(j, int(c * L)) for j, c in zc], L)
        self.const_rows = [i for i in range(M.rows) if self.xy_const[i]]
        # integer matrix for vectorised sign keys when entries are small
        big = max([abs(self.z_int[i][0]) for i in self.const_rows]
                  + [abs(c) for i in self.const_rows for _, c in self.z_int[i][1]], default=0)
        self._key_mat = None
        if self.const_rows and big < 2 ** 24 and F.d:
            Z = np.zeros((len(self.const_rows), F.d), dtype=np.int64)
            for r, i in enumerate(self.const_rows):
                for j, c in self.z_int[i][1]:
                    Z[r, j] = c
            self._key_mat = (Z, np.array([self.z_int[i][0] for i in self.const_rows], dtype=np.int64))
        self._sig_cache: dict = {}
        self._proj_cache: dict = {}

    def _zval(self, i: int, z) -> Fraction:
        c0, zc, L = self.z_int[i]
        return Fraction(c0 + sum(c * z[j] for j, c in zc), L)

    def _zsign(self, i: int, z) -> int:
        c0, zc, _ = self.z_int[i]
        v = c0 + sum(c * z[j] for j, c in zc)
        return (v > 0) - (v < 0)

    def reduce(self, z):
        """Return the reduced block list or None when the slice is empty."""
        if self._key_mat is not None and max(map(abs, z), default=0) < 2 ** 24:
            Z, c0 = self._key_mat
            key = np.sign(Z @ np.array(z, dtype=np.int64) + c0).tobytes()
        else:
            key = tuple(self._zsign(i, z) for i in self.const_rows)
        # values only matter through signs except inside constant conic blocks
        nonpoly_const = []
        for cone, rows in self.blocks:
            if not cone.polyhedral and all(self.xy_const[i] for i in rows):
                nonpoly_const.extend(self._zval(i, z) for i in rows)
        key = (key, tuple(nonpoly_const))
        if key in self._sig_cache:
            return self._sig_cache[key]
        result = self._reduce_uncached(z)
        self._sig_cache[key] = result
        return result

    def _reduce_uncached(self, z):
        M = self.F.M
        nxy = self.nxy
        val = {i: self._zval(i, z) for i in range(M.rows) if self.xy_const[i]}
        blocks = []
        for cone, rows in self.blocks:
            if cone.polyhedral:
                for i in rows:
                    if self.xy_const[i]:
                        v = val[i]
                        if (cone.kind == "Zero" and v != 0) or (cone.kind == "Nonneg" and v < 0):
                            return None
                    else:
                        blocks.append((cone.kind, [i]))
            else:
                if all(self.xy_const[i] for i in rows):
                    if not cone.contains([val[i] for i in rows]):
                        return None
                    continue
                blocks.append((cone.kind, list(rows)))
        changed = True
        while changed:
            changed = False
            out = []
            for kind, rows in blocks:
                if kind in ("SecondOrder", "RotatedSecondOrder"):
                    heads = rows[:1] if kind == "SecondOrder" else rows[:2]
                    rest = rows[len(heads):]
                    consts = [h for h in heads if self.xy_const[h]]
                    if any(val[h] < 0 for h in consts):
                        return None
                    if any(val[h] == 0 for h in consts):
                        for h in heads:
                            if not self.xy_const[h]:
                                out.append(("Nonneg", [h]))
                        for i in rest:
                            if self.xy_const[i]:
                                if val[i] != 0:
                                    return None
                            else:
                                out.append(("Zero", [i]))
                        changed = True
                        continue
                out.append((kind, rows))
            blocks = out
            free = self._upward_free(blocks, val)
            if free is not None:
                j, drop = free
                blocks = [b for idx, b in enumerate(blocks) if idx not in drop]
                changed = True
        return tuple((kind, tuple(rows)) for kind, rows in blocks)

    def _upward_free(self, blocks, val):
        M = self.F.M
        for j in range(self.F.n, self.nxy):
            drop = set()
            ok = True
            seen = False
            for idx, (kind, rows) in enumerate(blocks):
                coefs = [M.A[i][j] for i in rows]
                if not any(coefs):
                    continue
                seen = True
                if kind == "Nonneg":
                    if coefs[0] > 0:
                        drop.add(idx)
                        continue
                    ok = False
                elif kind == "SecondOrder":
                    if coefs[0] > 0 and not any(coefs[1:]):
                        drop.add(idx)
                        continue
                    ok = False
                elif kind == "RotatedSecondOrder":
                    if any(coefs[2:]):
                        ok = False
                    elif coefs[0] > 0 and coefs[1] == 0 and self.xy_const[rows[1]] and val[rows[1]] > 0:
                        drop.add(idx)
                        continue
                    elif coefs[1] > 0 and coefs[0] == 0 and self.xy_const[rows[0]] and val[rows[0]] > 0:
                        drop.add(idx)
                        continue
                    else:
                        ok = False
                else:
                    ok = False
                if not ok:
                    break
            if ok and seen:
                return j, drop
        return None

    def _projected(self, structure):
        if structure in self._proj_cache:
            return self._proj_cache[structure]
        M = self.F.M
        if any(kind not in ("Zero", "Nonneg") for kind, _ in structure):
            self._proj_cache[structure] = None
            return None
        A, b, E, f = [], [], [], []
        for kind, rows in structure:
            for i in rows:
                if kind == "Zero":
                    E.append(M.A[i])
                    f.append(-M.b[i])
                else:
                    A.append(tuple(-x for x in M.A[i]))
                    b.append(M.b[i])
        P = PolyhedronH(M.ambient_dim, A, b, E, f)
        keep = list(self.F.x_index) + list(self.F.z_index)
        proj = fm_project(P, keep)
        # store sparse rows: (x coefficients, z coefficient pairs, rhs)
        def split(rows, rhs):
            out = []
            for r, c in zip(rows, rhs):
                zc = [(j, r[self.F.n + j]) for j in range(self.F.d) if r[self.F.n + j] != 0]
                L = math.lcm(c.denominator, *(v.denominator for _, v in zc))
                out.append((r[: self.F.n], [(j, int(v * L)) for j, v in zc], int(c * L), L))
            return out

        entry = (split(proj.A, proj.b), split(proj.E, proj.f))
        self._proj_cache[structure] = entry
        return entry

    def slice(self, z):
        if len(z) != self.F.d:
            raise MicpError(f"z must have {self.F.d} components")
        if not all(type(v) is int for v in z):
            if any(as_fraction(v).denominator != 1 for v in z):
                raise MicpError("z must be integral")
            z = tuple(int(v) for v in z)
        structure = self.reduce(z)
        if structure is None:
            return None
        entry = self._projected(structure)
        n = self.F.n
        if entry is None:
            if self._fixed_infeasible(structure, z):
                return None
            return self._conic_slice(structure, z)
        ineq, eq = entry
        A, b, E, f = [], [], [], []
        for rows, outA, outb, is_eq in ((ineq, A, b, False), (eq, E, f, True)):
            for xr, zc, c, L in rows:
                rhs = Fraction(c - sum(coef * z[j] for j, coef in zc), L)
                if any(xr):
                    outA.append(xr)
                    outb.append(rhs)
                elif (is_eq and rhs != 0) or (not is_eq and rhs < 0):
                    return None
        P = PolyhedronH(n, A, b, E, f)
        if P.is_empty():
            return None
        return P

    def _fixed_infeasible(self, structure, z) -> bool:
        """Propagate equality rows that pin one continuous variable; test blocks left constant."""
        M = self.F.M
        nxy = self.nxy
        fixed: dict[int, Fraction] = {}

        def residual(i):
            free = [(j, M.A[i][j]) for j in range(nxy) if M.A[i][j] != 0 and j not in fixed]
            const = self._zval(i, z) + sum((M.A[i][j] * v for j, v in fixed.items()), ZERO)
            return free, const

        progress = True
        while progress:
            progress = False
            for kind, rows in structure:
                if kind != "Zero":
                    continue
                for i in rows:
                    free, const = residual(i)
                    if len(free) == 1:
                        j, c = free[0]
                        fixed[j] = -const / c
                        progress = True
        if not fixed:
            return False
        for kind, rows in structure:
            vals = []
            for i in rows:
                free, const = residual(i)
                if free:
                    break
                vals.append(const)
            else:
                if not Cone(kind, len(rows)).contains(vals):
                    return True
        return False

    def _conic_slice(self, structure, z) -> ConicSet:
        M = self.F.M
        nxy = self.nxy
        blocks = []
        for kind, rows in structure:
            rws = [(M.A[i][:nxy], self._zval(i, z)) for i in rows]
            blocks.append((Cone(kind, len(rws)), rws))
        return ConicSet.from_blocks(nxy, blocks)


def slice_set(F: MicpFormulation, z: Sequence):
    """The z-projected set at integer z.

    Polyhedral reductions give a :class:`PolyhedronH` over the x-block (the
    exact projection).  Otherwise the reduced slice ``B_z`` is returned as a
    :class:`ConicSet` over ``(x, y)``.  An empty slice gives ``None``.
    """
    return _slicer(F).slice(z)


_SLICERS: dict = {}


def _slicer(F: MicpFormulation) -> _Slicer:
    key = id(F)
    hit = _SLICERS.get(key)
    if hit is not None and hit[0] is F:
        return hit[1]
    s = _Slicer(F)
    if len(_SLICERS) > 64:
        _SLICERS.clear()
    _SLICERS[key] = (F, s)
    return s


def _pure_z_rows(F: MicpFormulation):
    """Polyhedral rows of M that only involve z: ``(kind, coeffs, const)``."""
    out = []
    nxy = F.n + F.p
    for cone, r in F.M.blocks():
        if not cone.polyhedral:
            continue
        for i in range(r, r + cone.dim):
            if all(x == 0 for x in F.M.A[i][:nxy]):
                out.append((cone.kind, F.M.A[i][nxy:], F.M.b[i]))
    return out


def iter_window(F: MicpFormulation, window: Sequence[tuple[int, int]]):
    """Integer z in the box ``window`` that satisfy all pure-z rows of M.

    Depth-first with interval pruning on every row that involves only z.
    """
    if len(window) != F.d:
        raise MicpError(f"window must give bounds for {F.d} integer variables")
    d = F.d
    if d == 0:
        yield ()
        return
    rows = []
    for kind, a, c in _pure_z_rows(F):
        L = math.lcm(c.denominator, *(v.denominator for v in a))
        rows.append((kind, [int(v * L) for v in a], int(c * L)))
    lo = [int(a) for a, _ in window]
    hi = [int(b) for _, b in window]
    # suffix bounds of each row over variables depth..d-1
    smin, smax = [], []
    for kind, a, c in rows:
        mn = [0] * (d + 1)
        mx = [0] * (d + 1)
        for j in range(d - 1, -1, -1):
            v1, v2 = a[j] * lo[j], a[j] * hi[j]
            mn[j] = mn[j + 1] + min(v1, v2)
            mx[j] = mx[j + 1] + max(v1, v2)
        smin.append(mn)
        smax.append(mx)
    z = [0] * d
    partial = [c for _, _, c in rows]
    # only rows touching the variable just fixed can change status
    touched = [list(range(len(rows)))] + [[k for k, r in enumerate(rows) if r[1][j]] for j in range(d)]

    def feasible(depth):
        for k in touched[depth]:
            kind = rows[k][0]
            top = partial[k] + smax[k][depth]
            if top < 0:
                return False
            if kind == "Zero" and partial[k] + smin[k][depth] > 0:
                return False
        return True

    if not feasible(0):
        return
    here = [[(k, rows[k][1][j]) for k in touched[j + 1]] for j in range(d)]
    # explicit stack: depth is the variable being set, z[depth] its current value
    depth = 0
    z[0] = lo[0] - 1
    while depth >= 0:
        if z[depth] >= lo[depth]:
            for k, a in here[depth]:
                partial[k] -= a * z[depth]
        z[depth] += 1
        if z[depth] > hi[depth]:
            depth -= 1
            continue
        for k, a in here[depth]:
            partial[k] += a * z[depth]
        if not feasible(depth + 1):
            continue
        if depth == d - 1:
            yield tuple(z)
            continue
        depth += 1
        z[depth] = lo[depth] - 1


def default_window(F: MicpFormulation) -> list[tuple[int, int]]:
    """Integer bounding box of the projection of a polyhedral outer relaxation onto z."""
    if F.d == 0:
        return []
    M = F.M
    A, b, E, f = [], [], [], []
    for cone, r in M.blocks():
        rows = range(r, r + cone.dim)
        if cone.kind == "Zero":
            for i in rows:
                E.append(M.A[i])
                f.append(-M.b[i])
        elif cone.kind == "Nonneg":
            for i in rows:
                A.append(tuple(-x for x in M.A[i]))
                b.append(M.b[i])
        else:
            heads = 1 if cone.kind == "SecondOrder" else 2
            for i in list(rows)[:heads]:
                A.append(tuple(-x for x in M.A[i]))
                b.append(M.b[i])
    P = PolyhedronH(M.ambient_dim, A, b, E, f)
    Pz = fm_project(P, list(F.z_index))
    if Pz.is_empty():
        raise MicpError("relaxed index set is empty")
    V = vertices_and_rays(Pz)
    window = []
    for j in range(F.d):
        e = [ZERO] * F.d
        e[j] = ONE
        hi = linear_max(V, e)
        lo = linear_max(V, [-x for x in e])
        if hi == INFINITY or lo == INFINITY:
            raise MicpError("relaxed index set is unbounded; pass an explicit window")
        window.append((math.ceil(-lo), math.floor(hi)))
    return window


def enumerate_slices(F: MicpFormulation, window: Sequence[tuple[int, int]] | None = None) -> SliceFamily:
    """All nonempty slices for integer z in the window (default: bounding box of the relaxation)."""
    if window is None:
        window = default_window(F)
    window = [(int(a), int(b)) for a, b in window]
    sl = _slicer(F)
    fam = SliceFamily(window)
    for z in iter_window(F, window):
        S = sl.slice(z)
        if S is not None:
            fam.slices[z] = S
    return fam


# ---------------------------------------------------------------------------
# constructive witnesses


def _norm2(v) -> Fraction:
    return sum((as_fraction(x) ** 2 for x in v), ZERO)


def union_witness(kind: str, sets: Sequence[ConicSet], i: int, point: Sequence, n: int | None = None) -> tuple:
    """Full variable vector of a union formulation for ``point`` in set ``i``.

    ``point`` lies in ``sets[i]`` (all of its coordinates, x first).  The chosen
    block carries the point, every other block is zero, ``z = e_i`` and the
    lifting variable of block i is the squared norm it has to dominate.
    """
    sets, n = _check_sets(sets, n)
    point = vec(point)
    k = len(sets)
    out = list(point[:n])
    for j, S in enumerate(sets):
        blk = list(point) if j == i else [ZERO] * S.ambient_dim
        out.extend(blk)
        if kind in ("projected", "ideal"):
            if j == i:
                out.append(_norm2(point if kind == "projected" else point[:n]))
            else:
                out.append(ZERO)
        elif kind != "basic":
            raise MicpError(f"unknown union kind {kind!r}")
    out.extend(ONE if j == i else ZERO for j in range(k))
    return tuple(out)


def union_rational_witness(F1: MicpFormulation, F2: MicpFormulation, side: int, w1: Sequence, w2: Sequence) -> tuple:
    """Witness for the rational union from full feasible points of M1 and M2."""
    n = F1.n
    w1, w2 = vec(w1), vec(w2)
    x = w1[:n] if side == 1 else w2[:n]
    other = w2[:n] if side == 1 else w1[:n]
    t = _norm2(a - b for a, b in zip(x, other))
    zprime = ZERO if side == 1 else ONE
    return (
        tuple(x)
        + tuple(w1[: n + F1.p])
        + tuple(w2[: n + F2.p])
        + (t,)
        + tuple(w1[n + F1.p:])
        + tuple(w2[n + F2.p:])
        + (zprime,)
    )


def ideal_split(sets: Sequence[ConicSet], point: Sequence, n: int | None = None) -> list[tuple[Fraction, tuple]]:
    """Write a relaxation point of :func:`union_ideal` as ``sum z_i beta^i``.

    Each ``beta^i`` has ``z = e_i``; blocks with ``z_i = 0`` must already be
    zero and are skipped.
    """
    sets, n = _check_sets(sets, n)
    point = vec(point)
    k = len(sets)
    offsets, off = [], n
    for S in sets:
        offsets.append(off)
        off += S.ambient_dim + 1
    zc = off
    parts = []
    for i, S in enumerate(sets):
        zi = point[zc + i]
        if zi == 0:
            continue
        beta = [ZERO] * len(point)
        o = offsets[i]
        blk = [v / zi for v in point[o: o + S.ambient_dim + 1]]
        beta[o: o + S.ambient_dim + 1] = blk
        beta[:n] = blk[:n]
        beta[zc + i] = ONE
        parts.append((zi, tuple(beta)))
    return parts


# ---------------------------------------------------------------------------
# idealness


@dataclass(frozen=True)
class IdealReport:
    ideal: bool | None
    witness: tuple | None
    reduced_dim: int
    note: str = ""


def perspective_core(F: MicpFormulation) -> tuple[PolyhedronH, list[int]]:
    """Polyhedral M' obtained by projecting out perspective lifting variables.

    A rotated block ``||w||^2 <= r(z) * t`` whose ``t`` is a single variable
    used nowhere else (except rows ``t >= 0``) projects to ``r(z) >= 0`` as long
    as the polyhedral part already forces ``w = 0`` when ``r(z) = 0``; this is
    verified exactly.  Returns M' over the remaining variables and their
    original indices.
    """
    M = F.M
    poly_rows = []  # (kind, row index)
    conic = []
    for cone, r in M.blocks():
        if cone.polyhedral:
            poly_rows.extend((cone.kind, i) for i in range(r, r + cone.dim))
        else:
            conic.append((cone, r))
    nonneg_rows = {i for kind, i in poly_rows if kind == "Nonneg"}
    eliminated: list[int] = []
    extra: list[int] = []  # rows r(z) >= 0
    checks = []
    for cone, r in conic:
        if cone.kind != "RotatedSecondOrder":
            raise MicpError("idealness check requires a polyhedral formulation")
        head, trow = r, r + 1
        nz = [j for j, c in enumerate(M.A[trow]) if c != 0]
        if len(nz) != 1 or M.A[trow][nz[0]] <= 0 or M.b[trow] != 0:
            # try the other product row as the lifting variable
            head, trow = r + 1, r
            nz = [j for j, c in enumerate(M.A[trow]) if c != 0]
            if len(nz) != 1 or M.A[trow][nz[0]] <= 0 or M.b[trow] != 0:
                raise MicpError("idealness check requires a polyhedral formulation")
        t = nz[0]
        for i in range(M.rows):
            if i == trow or M.A[i][t] == 0:
                continue
            # only sign rows t >= 0 may mention the lifting variable
            sign_row = (
                i in nonneg_rows and M.A[i][t] > 0 and M.b[i] == 0
                and all(M.A[i][j] == 0 for j in range(M.ambient_dim) if j != t)
            )
            if not sign_row:
                raise MicpError("idealness check requires a polyhedral formulation")
        eliminated.append(t)
        extra.append(head)
        checks.append((head, list(range(r + 2, r + cone.dim))))
    keep = [j for j in range(M.ambient_dim) if j not in eliminated]
    A, b, E, f = [], [], [], []
    for kind, i in poly_rows:
        if any(M.A[i][t] != 0 for t in eliminated):
            continue  # rows t >= 0
        row = tuple(M.A[i][j] for j in keep)
        if kind == "Zero":
            E.append(row)
            f.append(-M.b[i])
        else:
            A.append(tuple(-x for x in row))
            b.append(M.b[i])
    for i in extra:
        A.append(tuple(-M.A[i][j] for j in keep))
        b.append(M.b[i])
    core = PolyhedronH(len(keep), A, b, E, f)
    for head, rest in checks:
        h = tuple(M.A[head][j] for j in keep)
        face = PolyhedronH(core.dim, core.A, core.b, core.E + (h,), core.f + (-M.b[head],))
        if face.is_empty():
            continue
        V = vertices_and_rays(face)
        for i in rest:
            row = [M.A[i][j] for j in keep]
            hi = linear_max(V, row)
            lo = linear_max(V, [-x for x in row])
            if hi != -M.b[i] or lo != M.b[i]:
                raise MicpError("idealness check requires a polyhedral formulation")
    return core, keep


def check_ideal(F: MicpFormulation) -> IdealReport:
    """Decide whether every minimal face of M has integral z (polyhedral M)."""
    if F.d == 0:
        return IdealReport(True, None, F.M.ambient_dim, "no integer variables")
    if F.M.is_polyhedral:
        P, keep = F.M.to_polyhedron(), list(range(F.M.ambient_dim))
    else:
        P, keep = perspective_core(F)
    zpos = [keep.index(j) for j in F.z_index]
    V = vertices_and_rays(P)
    if V.is_empty:
        return IdealReport(True, None, P.dim, "empty relaxation")
    if any(any(l[j] != 0 for j in zpos) for l in V.lineality):
        return IdealReport(None, None, P.dim, "lineality moves z; indeterminate")
    for v in V.vertices:
        if any(v[j].denominator != 1 for j in zpos):
            full = [None] * F.M.ambient_dim
            for pos, j in enumerate(keep):
                full[j] = v[pos]
            return IdealReport(False, tuple(full), P.dim, "fractional minimal face")
    return IdealReport(True, None, P.dim, "")


# ---------------------------------------------------------------------------
# bounded decomposition


@dataclass
class BoundedDecomposition:
    pieces: list  # [(z, PolyhedronH over x)]
    rays_x: list  # x-components of the integer rays
    rays: list

    def translates(self, max_multiplier: int):
        """Pieces shifted by every ``sum m_j r_x^j`` with ``0 <= m_j <= max_multiplier``."""
        out = []
        for mult in itertools.product(range(max_multiplier + 1), repeat=len(self.rays_x)):
            for z, P in self.pieces:
                s = [ZERO] * P.dim
                for m, r in zip(mult, self.rays_x):
                    for i in range(P.dim):
                        s[i] += m * r[i]
                out.append(translate(P, s))
        return out


def translate(P: PolyhedronH, s: Sequence) -> PolyhedronH:
    s = vec(s)
    return PolyhedronH(P.dim, P.A, tuple(bi + dot(r, s) for r, bi in zip(P.A, P.b)),
                       P.E, tuple(fi + dot(r, s) for r, fi in zip(P.E, P.f)))


def decompose_bounded(V: PolyhedronV, n: int, p: int, d: int, max_points: int = 10_000) -> BoundedDecomposition:
    """Finite pieces plus integer rays for ``M = conv(vertices) + cone(rays)``.

    Builds ``C + B`` with ``B`` the box of ray combinations with coefficients
    in ``[0, 1]``, takes every integer z in it, and projects the slice onto x.
    """
    if d < 1:
        raise MicpError("decomposition needs d >= 1")
    if V.dim != n + p + d:
        raise MicpError("dimension mismatch")
    if V.lineality:
        raise MicpError("lineality is not supported; pass rays in both directions")
    if V.is_empty:
        raise MicpError("empty polyhedron")
    rays = [tuple(int(x) for x in r) for r in V.rays]
    if any(any(as_fraction(x).denominator != 1 for x in r) for r in V.rays):
        raise MicpError("non-integral input")
    pts = []
    for J in itertools.product((0, 1), repeat=len(rays)):
        for v in V.vertices:
            pts.append(tuple(v[i] + sum(r[i] for r, use in zip(rays, J) if use) for i in range(V.dim)))
    pts = sorted(set(pts))
    CB = polyhedron_from_v(PolyhedronV(V.dim, pts))
    zs = list(range(n + p, V.dim))
    lo, hi = [], []
    for j in zs:
        vals = [q[j] for q in pts]
        lo.append(math.ceil(min(vals)))
        hi.append(math.floor(max(vals)))
    count = 1
    for a, b2 in zip(lo, hi):
        count *= max(0, b2 - a + 1)
    if count > max_points:
        raise MicpError("z-range of the compact part is beyond desk scale")
    pieces = []
    for z in itertools.product(*(range(a, b2 + 1) for a, b2 in zip(lo, hi))):
        S = CB.substitute({j: Fraction(v) for j, v in zip(zs, z)})
        S = fm_project(S, list(range(n)))
        if not S.is_empty():
            pieces.append((tuple(z), S))
    rays_x = [r[:n] for r in rays]
    return BoundedDecomposition(pieces, rays_x, rays)


def formulation_from_v(V: PolyhedronV, n: int, p: int, d: int) -> MicpFormulation:
    """Polyhedral formulation whose M is the polyhedron generated by V."""
    P = polyhedron_from_v(V)
    return MicpFormulation(ConicSet.from_polyhedron(P), n, p, d, "from_v")


def interval_union(polys: Sequence[PolyhedronH]) -> list[tuple]:
    """Merge 1D polyhedra into disjoint closed intervals ``(lo, hi)``; None = unbounded."""
    ivs = []
    for P in polys:
        if P.dim != 1:
            raise MicpError("interval_union needs 1D sets")
        if P.is_empty():
            continue
        ivs.append(interval_of(P))
    ivs.sort(key=lambda t: (t[0] is not None, t[0] if t[0] is not None else 0))
    merged: list[list] = []
    for lo, hi in ivs:
        if merged:
            plo, phi = merged[-1]
            if phi is None or (lo is not None and lo <= phi) or lo is None:
                if phi is not None and (hi is None or hi > phi):
                    merged[-1][1] = hi
                continue
        merged.append([lo, hi])
    return [tuple(m) for m in merged]
