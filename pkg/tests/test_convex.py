import itertools
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from micp_forge.convex import (
    INFINITY,
    Cone,
    ConicSet,
    PolyhedronH,
    PolyhedronV,
    ball,
    box,
    conic_hull,
    fm_project,
    halfline,
    interval,
    interval_of,
    linear_max,
    membership,
    point,
    polyhedron_from_v,
    recession_cone,
    recession_equalize,
    same_polyhedron,
    vertices_and_rays,
)
from micp_forge.errors import DeskScaleError, MicpError
from micp_forge.fixtures import s_epsilon_formulation
from oracles import rand_q

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=6)


def test_fm_projection_example():
    # x <= z, z <= x + 1, 0 <= z <= 2 in variables (x, z)
    P = PolyhedronH(2, [(1, -1), (-1, 1), (0, -1), (0, 1)], [0, 1, 0, 2])
    proj = fm_project(P, [0])
    assert interval_of(proj) == (-1, 2)


def test_fm_unit_square_unchanged():
    P = box([0, 0], [1, 1]).to_polyhedron()
    assert same_polyhedron(fm_project(P, [0, 1]), P)


def _random_system(rng):
    rows, rhs = [], []
    for _ in range(rng.randint(3, 6)):
        a = (rng.randint(-2, 2), rng.randint(-2, 2), rng.choice((-2, -1, 1, 2)))
        rows.append(a)
        rhs.append(Q(rng.randint(-4, 8), 2))
    # keep everything inside a box so the grid oracle is complete
    for j in range(3):
        e = [0, 0, 0]
        e[j] = 1
        rows.append(tuple(e))
        rhs.append(Q(3))
        rows.append(tuple(-x for x in e))
        rhs.append(Q(3))
    return PolyhedronH(3, rows, rhs)


def test_fm_against_grid_witness_oracle():
    rng = random.Random(11)
    zgrid = [Q(k, 64) for k in range(-3 * 64, 3 * 64 + 1)]
    for _ in range(6):
        P = _random_system(rng)
        proj = fm_project(P, [0, 1])
        for _ in range(40):
            x, y = Q(rng.randint(-24, 24), 8), Q(rng.randint(-24, 24), 8)
            # z-bounds are multiples of 1/16 here, so the 1/64 grid sees every witness
            oracle = any(P.contains((x, y, z)) for z in zgrid)
            assert proj.contains((x, y)) == oracle


@given(st.integers(0, 10_000))
def test_fm_idempotent_and_permutation_invariant(seed):
    rng = random.Random(seed)
    P = _random_system(rng)
    once = fm_project(P, [0, 1])
    assert same_polyhedron(fm_project(once, [0, 1]), once)
    # swap x and y, project, swap back
    Ps = PolyhedronH(3, [(r[1], r[0], r[2]) for r in P.A], P.b)
    back = fm_project(Ps, [0, 1])
    back = PolyhedronH(2, [(r[1], r[0]) for r in back.A], back.b, [(r[1], r[0]) for r in back.E], back.f)
    assert same_polyhedron(back, once)


def test_fm_row_cap():
    rng = random.Random(5)
    rows = [tuple(rng.choice((-1, 1)) for _ in range(8)) for _ in range(40)]
    P = PolyhedronH(8, rows, [1] * 40)
    with pytest.raises(DeskScaleError):
        fm_project(P, [0], row_cap=50)


def test_emptiness_survives_fm_blowup():
    from scipy.optimize import linprog

    # the 6-cube's dual has 64 facets: eliminating everything exceeds the FM cap
    rows = list(itertools.product((1, -1), repeat=6))
    P = PolyhedronH(6, rows, [1] * len(rows))
    with pytest.raises(DeskScaleError):
        fm_project(P, [])
    rng = random.Random(6)
    for _ in range(20):
        shift = rand_q(rng, -2, 2)
        Q6 = PolyhedronH(6, rows + [(1, 0, 0, 0, 0, 0)], [1] * len(rows) + [shift])
        lp = linprog([0] * 6, A_ub=[list(map(float, r)) for r in Q6.A], b_ub=[float(b) for b in Q6.b],
                     bounds=[(None, None)] * 6)
        # shift = -1 touches a vertex; the float LP agrees there as well
        assert Q6.is_empty() == (lp.status == 2), shift


def test_vertices_examples():
    V = vertices_and_rays(box([0, 0], [1, 1]).to_polyhedron())
    assert sorted(V.vertices) == [(0, 0), (0, 1), (1, 0), (1, 1)] and not V.rays
    V = vertices_and_rays(halfline(0).to_polyhedron())
    assert V.vertices == ((0,),) and V.rays == ((1,),)
    with pytest.raises(DeskScaleError, match="desk-scale limit"):
        vertices_and_rays(PolyhedronH(9, [], []))


def test_vertices_round_trip_random():
    rng = random.Random(2)
    for _ in range(25):
        P = _random_system(rng)
        if P.is_empty():
            continue
        V = vertices_and_rays(P)
        for v in V.vertices:
            assert P.contains(v)
            tight = [r for r, b in zip(P.A, P.b) if sum(a * x for a, x in zip(r, v)) == b]
            from micp_forge.rational import rank

            assert rank(tight) == 3
        # random convex combinations stay inside
        for _ in range(10):
            w = [Q(rng.randint(0, 5)) for _ in V.vertices]
            if sum(w) == 0:
                continue
            s = sum(w)
            pt = tuple(sum(wi * v[k] for wi, v in zip(w, V.vertices)) / s for k in range(3))
            assert P.contains(pt)
        assert same_polyhedron(polyhedron_from_v(V), P)


def test_lineality_reported():
    P = PolyhedronH(2, [(0, 1), (0, -1)], [1, 0])  # 0 <= y <= 1, x free
    V = vertices_and_rays(P)
    assert len(V.lineality) == 1 and V.lineality[0][1] == 0


def test_linear_max():
    sq = box([0, 0], [1, 1]).to_polyhedron()
    assert linear_max(sq, (1, 1)) == 2
    assert linear_max(halfline(0).to_polyhedron(), (1,)) == INFINITY
    with pytest.raises(MicpError, match="empty polyhedron"):
        linear_max(PolyhedronH.empty(1), (1,))


def test_linear_max_against_grid():
    rng = random.Random(8)
    for _ in range(10):
        P = _random_system(rng)
        if P.is_empty():
            continue
        c = tuple(rand_q(rng, -3, 3) for _ in range(3))
        best = linear_max(P, c)
        V = vertices_and_rays(P)
        assert best in [sum(a * x for a, x in zip(c, v)) for v in V.vertices]
        for pt in itertools.product([Q(k, 2) for k in range(-6, 7)], repeat=3):
            if P.contains(pt):
                assert sum(a * x for a, x in zip(c, pt)) <= best


def test_membership_examples():
    disk = ball((0, 0), 1)
    assert membership(disk, (1, 0))
    assert not membership(disk, (1, 1))
    R = ConicSet(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [0, 0, 0], [Cone("RotatedSecondOrder", 3)])
    # rows are (z, t, x): x^2 <= z t
    assert membership(R, (1, 1, 1))
    assert not membership(R, (1, Q(9, 10), 1))
    with pytest.raises(MicpError):
        membership(disk, (1,))


def test_recession_cone_examples():
    assert recession_cone(interval(0, 1)).contains((0,))
    assert not recession_cone(interval(0, 1)).contains((1,))
    C = recession_cone(halfline(1))
    assert C.contains((0,)) and C.contains((5,)) and not C.contains((-1,))


def test_recession_cone_of_irrational_strip():
    K = s_epsilon_formulation("2/5").M
    # drop x and keep the (z1, z2) part of the strip
    strip = ConicSet(2, [r[1:] for r in K.A[1:]], K.b[1:], K.cones[1:])
    C = recession_cone(strip)
    assert C.contains((0, 0))
    for d in [(1, 1), (1, Q(7, 5)), (5, 7), (12, 17), (70, 99)]:
        assert not C.contains(d)
    # moving along (1, 1) leaves the strip for large steps, along (70, 99) much later
    start = (Q(0), Q(0))
    outside = [k for k in range(12) if not strip.contains(tuple(s + 2 ** k * x for s, x in zip(start, (1, 1))))]
    assert outside and outside[0] <= 3


def test_conic_hull_examples():
    H = conic_hull(interval(0, 1))
    for x, z, ok in [(0, 0, True), (1, 1, True), (2, 1, False), (Q(1, 2), 1, True), (1, 0, False), (0, -1, False)]:
        assert H.contains((x, z)) == ok
    H = conic_hull(point((0,)))
    assert H.contains((0, 5)) and not H.contains((1, 5))
    H = conic_hull(ball((0, 0), 1))
    for z in (Q(1, 2), Q(1), Q(2)):
        assert H.contains((z, 0, z)) and not H.contains((z + Q(1, 100), 0, z))


def _random_conic_set(rng):
    kind = rng.choice(["box", "ball", "halfline"])
    if kind == "box":
        lo = [rand_q(rng, -3, 0), rand_q(rng, -3, 0)]
        return box(lo, [l + rand_q(rng, 0, 3) for l in lo])
    if kind == "ball":
        return ball((rand_q(rng, -2, 2), rand_q(rng, -2, 2)), rand_q(rng, 0, 3))
    return ConicSet.from_polyhedron(PolyhedronH(2, [(-1, 0), (0, 1), (0, -1)], [0, 1, 1]))


def test_conic_hull_slices_and_recession():
    rng = random.Random(4)
    for _ in range(200):
        T = _random_conic_set(rng)
        H = conic_hull(T)
        R = recession_cone(T)
        p = tuple(rand_q(rng, -3, 3) for _ in range(2))
        lam = Q(rng.randint(1, 9), rng.randint(1, 4))
        if T.contains(p):
            assert H.contains(tuple(lam * x for x in p) + (lam,))
        assert H.contains(p + (Q(0),)) == R.contains(p)


def test_recession_equalize():
    L = recession_equalize(halfline(0))
    assert L.contains((3, 9)) and not L.contains((3, 8))
    for s in range(-4, 20):
        assert not recession_cone(L).contains((1, s))
    P = recession_equalize(point((0,)))
    assert P.contains((0, 7)) and not P.contains((Q(1, 2), 7))
    # halfline and point give lifted sets with the same recession directions
    dirs = [(a, b) for a in range(-3, 4) for b in range(-3, 4)]
    assert [recession_cone(L).contains(d) for d in dirs] == [recession_cone(P).contains(d) for d in dirs]


def test_polyhedron_from_v():
    V = PolyhedronV(2, [(0, 0), (1, 0), (0, 1)], [(1, 1)])
    P = polyhedron_from_v(V)
    assert P.contains((5, 5)) and P.contains((Q(1, 2), Q(1, 2))) and not P.contains((-1, 0))
