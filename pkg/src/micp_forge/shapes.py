"""Exact shape comparisons for families of rational polytopes.

Volumes, translation and homothety tests and the Brunn-Minkowski gap are
computed in rational arithmetic for dimensions 1 to 3.  ``classify_family``
inspects an indexed family ``{A_z}`` with equal volumes and checks that
members in one parity class are translates of each other.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .convex import PolyhedronH, PolyhedronV, polyhedron_from_v, vertices_and_rays
from .errors import MicpError
from .lower_bounds import parity_classes
from .rational import ZERO, as_fraction, det, rank, vec

MAX_SHAPE_DIM = 3


def _points(P) -> list[tuple]:
    if isinstance(P, PolyhedronH):
        P = vertices_and_rays(P)
    if isinstance(P, PolyhedronV):
        if P.rays or P.lineality:
            raise MicpError("shape must be bounded")
        pts = P.vertices
    else:
        pts = P
    pts = sorted({vec(p) for p in pts})
    if not pts:
        raise MicpError("empty shape")
    if len({len(p) for p in pts}) != 1:
        raise MicpError("mixed dimensions")
    if len(pts[0]) > MAX_SHAPE_DIM:
        raise MicpError(f"shapes are supported up to dimension {MAX_SHAPE_DIM}")
    return pts


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _hull_2d(pts: list[tuple]) -> list[tuple]:
    """Counter-clockwise hull vertices (monotone chain), starting at the lex-min point."""
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _affine_rank(pts: list[tuple]) -> int:
    if len(pts) <= 1:
        return 0
    return rank([tuple(a - b for a, b in zip(p, pts[0])) for p in pts[1:]])


def _plane(a, b, c):
    u = [b[k] - a[k] for k in range(3)]
    v = [c[k] - a[k] for k in range(3)]
    nrm = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
    return nrm, sum(nrm[k] * a[k] for k in range(3))


def _dot3(n, p) -> Fraction:
    return n[0] * p[0] + n[1] * p[1] + n[2] * p[2]


def _hull_triangles(pts: list[tuple]) -> list[tuple]:
    """Outward-oriented boundary triangles of a full-dimensional 3D hull (incremental)."""
    a = pts[0]
    b = next(p for p in pts if p != a)
    c = next(p for p in pts if any(_plane(a, b, p)[0]))
    nrm, off = _plane(a, b, c)
    d = next(p for p in pts if _dot3(nrm, p) != off)
    if _dot3(nrm, d) > off:
        b, c = c, b
    faces = [(a, b, c), (a, d, b), (b, d, c), (c, d, a)]
    planes = {f: _plane(*f) for f in faces}
    for p in pts:
        if p in (a, b, c, d):
            continue
        visible = [f for f in faces if _dot3(planes[f][0], p) > planes[f][1]]
        if not visible:
            continue
        edges = set()
        for f in visible:
            edges.update(((f[0], f[1]), (f[1], f[2]), (f[2], f[0])))
        horizon = [e for e in edges if (e[1], e[0]) not in edges]
        vis = set(visible)
        faces = [f for f in faces if f not in vis]
        for u, v in horizon:
            f = (u, v, p)
            planes[f] = _plane(*f)
            faces.append(f)
    return faces


def _facets_3d(pts: list[tuple]) -> list[tuple[tuple, Fraction, list[tuple]]]:
    """Supporting planes ``n.x = c`` with all points on ``n.x <= c`` and their points."""
    facets = {}
    for f in _hull_triangles(pts):
        nrm, off = _plane(*f)
        scale = max(abs(x) for x in nrm)
        key = (tuple(x / scale for x in nrm), off / scale)
        if key not in facets:
            facets[key] = [p for p in pts if _dot3(key[0], p) == key[1]]
    return [(k[0], k[1], on) for k, on in facets.items()]


def hull_vertices(P) -> list[tuple]:
    """Extreme points of the convex hull, sorted lexicographically."""
    pts = _points(P)
    n = len(pts[0])
    if n == 1:
        return sorted({pts[0], pts[-1]})
    if n == 2:
        return sorted(_hull_2d(pts))
    if _affine_rank(pts) < 3:
        V = vertices_and_rays(polyhedron_from_v(PolyhedronV(3, tuple(pts))))
        return sorted(V.vertices)
    ext = set()
    for nrm, off, on in _facets_3d(pts):
        # extreme points of a facet are the 2D hull in facet coordinates
        drop = max(range(3), key=lambda k: abs(nrm[k]))
        keep = [k for k in range(3) if k != drop]
        proj = {tuple(p[k] for k in keep): p for p in on}
        for q in _hull_2d(sorted(proj)):
            ext.add(proj[q])
    return sorted(ext)


def volume(P) -> Fraction:
    """Exact n-dimensional volume (n <= 3) of the convex hull of P."""
    pts = _points(P)
    n = len(pts[0])
    if n == 1:
        return pts[-1][0] - pts[0][0]
    if _affine_rank(pts) < n:
        return ZERO
    if n == 2:
        h = _hull_2d(pts)
        area = sum(h[i][0] * h[(i + 1) % len(h)][1] - h[(i + 1) % len(h)][0] * h[i][1] for i in range(len(h)))
        return abs(area) / 2
    # signed cones from the lowest point over the outward boundary triangles
    apex = pts[0]
    total = ZERO
    for f in _hull_triangles(pts):
        total += det([[q[k] - apex[k] for k in range(3)] for q in f])
    return total / 6


def minkowski_sum(P, Q) -> list[tuple]:
    a, b = hull_vertices(P), hull_vertices(Q)
    return hull_vertices([tuple(x + y for x, y in zip(p, q)) for p in a for q in b])


def scale_shape(P, s) -> list[tuple]:
    s = as_fraction(s)
    return [tuple(s * x for x in p) for p in hull_vertices(P)]


def translate_shape(P, v) -> list[tuple]:
    v = vec(v)
    return [tuple(x + y for x, y in zip(p, v)) for p in hull_vertices(P)]


def translation_equivalent(P, Q):
    """``(True, v)`` with ``Q = P + v``, or ``(False, None)``."""
    a, b = hull_vertices(P), hull_vertices(Q)
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        return False, None
    v = tuple(y - x for x, y in zip(a[0], b[0]))
    if sorted(tuple(x + t for x, t in zip(p, v)) for p in a) == b:
        return True, v
    return False, None


def rational_root(q: Fraction, n: int):
    """Exact n-th root of a nonnegative rational, or None when irrational."""
    q = as_fraction(q)
    if q < 0:
        raise MicpError("negative radicand")
    out = []
    for part in (q.numerator, q.denominator):
        r = _iroot(part, n)
        if r ** n != part:
            return None
        out.append(r)
    return Fraction(out[0], out[1])


def _iroot(a: int, n: int) -> int:
    """floor(a ** (1/n)) for a nonnegative integer a."""
    if a < 2:
        return a
    x = 1 << ((a.bit_length() + n - 1) // n)
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    while x ** n > a:
        x -= 1
    while (x + 1) ** n <= a:
        x += 1
    return x


@dataclass(frozen=True)
class Homothety:
    equivalent: bool
    scale: Fraction | None = None
    translation: tuple | None = None
    outcome: str = ""


def homothety_equivalent(P, Q) -> Homothety:
    """Whether ``Q = s P + v`` for some ``s > 0``.

    For rational polytopes the vertex differences force s to be rational, so
    a volume ratio without a rational n-th root is reported as the separate
    outcome ``irrational-ratio`` (not homothetic).
    """
    a, b = hull_vertices(P), hull_vertices(Q)
    n = len(a[0])
    va, vb = volume(a), volume(b)
    if va == 0 or vb == 0:
        raise MicpError("homothety test needs full-dimensional shapes")
    s = rational_root(vb / va, n)
    if s is None:
        return Homothety(False, None, None, "irrational-ratio")
    ok, v = translation_equivalent(scale_shape(a, s), b)
    if ok:
        return Homothety(True, s, v, "homothetic")
    return Homothety(False, s, None, "not-homothetic")


def _root_bounds(q: Fraction, n: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational bracket of ``q ** (1/n)`` of width ``2 ** -bits``."""
    scale = 1 << bits
    lo = _iroot((q.numerator * scale ** n) // q.denominator, n)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


def _gap_is_zero(a: Fraction, b: Fraction, m: Fraction, n: int) -> bool:
    """Exact test of ``2 m^(1/n) == a^(1/n) + b^(1/n)``."""
    if n == 1:
        return 2 * m == a + b
    if n == 2:
        c = 4 * m - a - b
        return c >= 0 and c * c == 4 * a * b
    if n == 3:
        return 216 * a * b * m == (8 * m - a - b) ** 3
    raise MicpError(f"dimension {n} not supported")


def brunn_minkowski_gap(P, Q) -> Fraction:
    """Rational certificate for ``Vol((P+Q)/2)^(1/n) - (Vol P^(1/n) + Vol Q^(1/n))/2``.

    The result is exactly 0 when the gap vanishes; otherwise it is a rational
    number strictly between 0 and the true gap, so it has the gap's sign.
    """
    a, b = hull_vertices(P), hull_vertices(Q)
    n = len(a[0])
    if len(b[0]) != n:
        raise MicpError("dimension mismatch")
    va, vb = volume(a), volume(b)
    vm = volume(minkowski_sum(a, b)) / 2 ** n
    if _gap_is_zero(va, vb, vm, n):
        return ZERO
    bits = 16
    while True:
        ml, mh = _root_bounds(vm, n, bits)
        al, ah = _root_bounds(va, n, bits)
        bl, bh = _root_bounds(vb, n, bits)
        lo = ml - (ah + bh) / 2
        hi = mh - (al + bl) / 2
        if lo > 0:
            return lo
        if hi < 0:
            return hi
        bits *= 2


def support_value(P, c) -> Fraction:
    """``max_{x in P} c.x``."""
    c = vec(c)
    return max(sum((ci * xi for ci, xi in zip(c, p)), ZERO) for p in hull_vertices(P))


def contains_shape(outer, inner) -> bool:
    """Whether the hull of ``inner`` lies in the hull of ``outer``."""
    o = hull_vertices(outer)
    n = len(o[0])
    if _affine_rank(o) < n:
        H = polyhedron_from_v(PolyhedronV(n, tuple(o)))
        return all(H.contains(p) for p in hull_vertices(inner))
    H = facets(o)
    return all(all(sum(a * x for a, x in zip(nrm, p)) <= off for nrm, off in H) for p in hull_vertices(inner))


def facets(P) -> list[tuple[tuple, Fraction]]:
    """Facet inequalities ``(normal, offset)`` of a full-dimensional hull."""
    pts = hull_vertices(P)
    n = len(pts[0])
    if n == 1:
        return [((Fraction(1),), pts[-1][0]), ((Fraction(-1),), -pts[0][0])]
    if n == 2:
        h = _hull_2d(pts)
        out = []
        for i in range(len(h)):
            p, q = h[i], h[(i + 1) % len(h)]
            nrm = (q[1] - p[1], p[0] - q[0])
            out.append((nrm, nrm[0] * p[0] + nrm[1] * p[1]))
        return out
    return [(nrm, off) for nrm, off, _ in _facets_3d(pts)]


@dataclass
class IndexedFamily:
    """Polytopes ``A_z`` indexed by integer vectors z."""

    members: dict

    def __post_init__(self):
        self.members = {tuple(int(v) for v in z): hull_vertices(P) for z, P in self.members.items()}
        if not self.members:
            raise MicpError("empty family")
        if len({len(z) for z in self.members}) != 1:
            raise MicpError("index vectors must have a uniform length")

    @property
    def index_points(self) -> list[tuple]:
        return sorted(self.members)


@dataclass
class FamilyReport:
    verdict: str
    volumes: dict
    classes: list = field(default_factory=list)
    translations: dict = field(default_factory=dict)
    homothety_classes: list = field(default_factory=list)
    representatives: list = field(default_factory=list)
    violation: tuple | None = None
    diagnostics: list = field(default_factory=list)


def midpoint_violation(F: IndexedFamily):
    """First triple (z, z', mid) with ``(A_z + A_z')/2`` not inside ``A_mid``."""
    pts = F.index_points
    for z, w in itertools.combinations(pts, 2):
        if any((a + b) % 2 for a, b in zip(z, w)):
            continue
        mid = tuple((a + b) // 2 for a, b in zip(z, w))
        if mid not in F.members:
            continue
        avg = scale_shape(minkowski_sum(F.members[z], F.members[w]), Fraction(1, 2))
        if not contains_shape(F.members[mid], avg):
            return z, w, mid
    return None


def classify_family(F: IndexedFamily) -> FamilyReport:
    """Compare the members of an indexed family.

    Verdicts: ``theorem-consistent`` (equal volumes, members of a parity
    class are translates), ``hypothesis-violated`` (a midpoint triple shows
    the family does not come from one convex set), ``volumes-differ`` (the
    equal-volume hypothesis is unmet; homothety classes are reported) and
    ``counterexample-candidate`` (none of the above explains a failed
    translation inside a parity class).
    """
    vols = {z: volume(P) for z, P in F.members.items()}
    classes = parity_classes(F.index_points)
    report = FamilyReport("", vols, classes)
    report.violation = midpoint_violation(F)
    if len(set(vols.values())) > 1:
        groups: list[list[tuple]] = []
        for z in F.index_points:
            for g in groups:
                if vols[g[0]] > 0 and vols[z] > 0 and homothety_equivalent(F.members[g[0]], F.members[z]).equivalent:
                    g.append(z)
                    break
            else:
                groups.append([z])
        report.homothety_classes = groups
        report.verdict = "volumes-differ"
        return report
    failures = []
    for cls in classes:
        base = cls[0]
        for z in cls[1:]:
            ok, v = translation_equivalent(F.members[base], F.members[z])
            if ok:
                report.translations[z] = (base, v)
            else:
                failures.append((base, z))
    reps: list[tuple] = []
    for z in F.index_points:
        if not any(translation_equivalent(F.members[r], F.members[z])[0] for r in reps):
            reps.append(z)
    report.representatives = reps
    if report.violation is not None:
        report.verdict = "hypothesis-violated"
        report.diagnostics = failures
    elif failures:
        report.verdict = "counterexample-candidate"
        report.diagnostics = failures
    else:
        report.verdict = "theorem-consistent"
    return report


def render_svg(F: IndexedFamily, size: int = 480) -> str:
    """Plain SVG drawing of a 2D family, one outlined polygon per member."""
    if any(len(z_pts[0]) != 2 for z_pts in F.members.values()):
        raise MicpError("rendering supports 2D families only")
    allpts = [p for P in F.members.values() for p in P]
    xs = [float(p[0]) for p in allpts]
    ys = [float(p[1]) for p in allpts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    k = (size - 20) / span

    def tr(p):
        return 10 + (float(p[0]) - min(xs)) * k, size - 10 - (float(p[1]) - min(ys)) * k

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">']
    for z in F.index_points:
        ring = _hull_2d(F.members[z])
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(tr, ring))
        hue = (sum(v % 2 << i for i, v in enumerate(z)) * 97) % 360
        parts.append(f'<polygon points="{pts}" fill="none" stroke="hsl({hue},70%,40%)"><title>z={list(z)}</title></polygon>')
    parts.append("</svg>")
    return "\n".join(parts)


def monte_carlo_volume(P, samples: int = 1_000_000, seed: int = 0) -> float:
    """Hit-or-miss volume estimate over the bounding box (floating point)."""
    import numpy as np

    pts = hull_vertices(P)
    n = len(pts[0])
    H = facets(pts)
    lo = np.array([float(min(p[k] for p in pts)) for k in range(n)])
    hi = np.array([float(max(p[k] for p in pts)) for k in range(n)])
    rng = np.random.default_rng(seed)
    X = lo + (hi - lo) * rng.random((samples, n))
    N = np.array([[float(a) for a in nrm] for nrm, _ in H])
    c = np.array([float(off) for _, off in H])
    inside = np.all(X @ N.T <= c + 1e-12, axis=1)
    return float(inside.mean() * np.prod(hi - lo))
