"""Lower bounds from midpoints, piecewise linear graphs and equal-volume families.

Run:  python demos/shapes_and_bounds.py
"""
from fractions import Fraction as Q

from micp_forge.convex import vertices_and_rays
from micp_forge.fixtures import figure2_pwl
from micp_forge.formulations import enumerate_slices
from micp_forge.lower_bounds import even_parity_cube, primes_up_to, strongest_witness
from micp_forge.pwl import decomposition_window, pwl_decompose
from micp_forge.shapes import IndexedFamily, brunn_minkowski_gap, classify_family

# every MICP formulation of the even parity cube needs n - 1 integer variables
for n in range(2, 7):
    W = strongest_witness(even_parity_cube(n))
    print(f"parity cube n={n}: w={W.w} -> at least {W.bound} integer variables")

W = strongest_witness(primes_up_to(50))
print("primes <= 50:", [str(p[0]) for p in W.points], "bound", W.bound)

# 1, 0, 3/2, 3, 9/2, ...: one head segment joined to a slope-3/2 tail
dec = pwl_decompose(figure2_pwl())
head = [(s.i, str(s.x), str(s.c)) for s in dec.head.segments]
print("\nfigure2_pwl: head (start, value, slope)", head, "tail period", dec.period.t)
segments = set()
for S in enumerate_slices(dec.formulation, decomposition_window(dec, 4)).slices.values():
    segments.add(tuple(sorted(vertices_and_rays(S).vertices)))
for a, b in sorted(segments):
    print(f"  segment ({a[0]}, {a[1]}) -- ({b[0]}, {b[1]})")

# squares stay homothetic; equal-area rectangles violate the midpoint test
square = [(0, 0), (1, 0), (1, 1), (0, 1)]
flat = [(0, 0), (2, 0), (2, Q(1, 2)), (0, Q(1, 2))]
print("\nBM gap square/square:", brunn_minkowski_gap(square, square))
print("BM gap square/flat rectangle > 0:", brunn_minkowski_gap(square, flat) > 0)
rects = IndexedFamily({(k,): [(0, 0), (2 ** k, 0), (2 ** k, Q(1, 2 ** k)), (0, Q(1, 2 ** k))] for k in range(3)})
print("equal-area rectangles:", classify_family(rects).verdict)
