"""Three ways to write the union of two intervals, and which of them is ideal.

Run:  python demos/unions_and_idealness.py
"""
from fractions import Fraction as Q

from micp_forge.convex import interval, interval_of, vertices_and_rays
from micp_forge.formulations import (
    check_ideal,
    enumerate_slices,
    perspective_core,
    union_basic,
    union_ideal,
    union_projected,
)
from micp_forge.lpformat import emit_lp

sets = [interval(0, 1), interval(2, Q(7, 2))]

for name, build in (("basic", union_basic), ("projected", union_projected), ("ideal", union_ideal)):
    F = build(sets)
    fam = enumerate_slices(F, [(0, 1), (0, 1)])
    pieces = ", ".join(f"z={z}: [{lo}, {hi}]" for z, (lo, hi) in sorted((z, interval_of(S)) for z, S in fam.slices.items()))
    print(f"{name:9s} n={F.n} p={F.p} d={F.d}  {pieces}")

# every vertex of the ideal relaxation has 0/1 selectors
F = union_ideal(sets)
core, keep = perspective_core(F)
zpos = [keep.index(j) for j in F.z_index]
print("\nideal relaxation vertices (selector part):")
for v in vertices_and_rays(core).vertices:
    print("  ", [str(v[j]) for j in zpos])
print("check_ideal:", check_ideal(F))

# the basic formulation is polyhedral and exports as an LP file
print("\nLP for the basic union:\n")
print(emit_lp(union_basic(sets)))
