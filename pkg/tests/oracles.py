"""Independent reference computations used to check the library.

Nothing here calls into the code under test except for plain data types.
"""
import itertools
from fractions import Fraction

import networkx as nx
import numpy as np


def rand_q(rng, lo=-5, hi=5, dens=(1, 2, 3, 4)):
    d = rng.choice(dens)
    return Fraction(rng.randint(lo * d, hi * d), d)


def rand_interval(rng, lo=-5, hi=5):
    a, b = sorted((rand_q(rng, lo, hi), rand_q(rng, lo, hi)))
    return a, b


def merge_intervals(ivs):
    """Union of closed bounded intervals as sorted disjoint intervals."""
    out = []
    for a, b in sorted(ivs):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def box_vertices(lo, hi):
    return sorted(itertools.product(*zip(lo, hi)))


def brute_intcone(gens, bound):
    """Breadth-first closure of {0} under adding generators, capped at bound."""
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if g and y <= bound and y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def brute_eventual_period(members, bound, max_period):
    """Smallest t whose t-shift agrees on [bound//2, bound - t], by direct comparison."""
    s = set(members)
    for t in range(1, max_period + 1):
        if all((x in s) == (x + t in s) for x in range(bound // 2, bound - t + 1)):
            return t
    return None


def max_clique_size(points, member):
    G = nx.Graph()
    G.add_nodes_from(range(len(points)))
    for i, j in itertools.combinations(range(len(points)), 2):
        mid = tuple((a + b) / 2 for a, b in zip(points[i], points[j]))
        if not member(mid):
            G.add_edge(i, j)
    return max((len(c) for c in nx.find_cliques(G)), default=0)


def float_area(pts):
    from shapely.geometry import MultiPoint

    return MultiPoint([(float(x), float(y)) for x, y in pts]).convex_hull.area


def float_volume_3d(pts):
    from scipy.spatial import ConvexHull

    return ConvexHull(np.array([[float(c) for c in p] for p in pts])).volume


def rand_polygon(rng, k=None, span=6, dens=(1, 2)):
    k = k or rng.randint(3, 7)
    while True:
        pts = [(rand_q(rng, -span, span, dens), rand_q(rng, -span, span, dens)) for _ in range(k)]
        if float_area(pts) > 1e-9:
            return pts


def rand_unimodular(rng, d, steps=8):
    U = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(steps):
        i, j = rng.sample(range(d), 2) if d > 1 else (0, 0)
        if i == j:
            U = [[-x for x in r] for r in U]
            continue
        k = rng.randint(-2, 2)
        for r in U:
            r[i] += k * r[j]
    return U


def int_det(M):
    import sympy

    return int(sympy.Matrix(M).det())

