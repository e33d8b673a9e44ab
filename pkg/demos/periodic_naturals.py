"""Sets of naturals: numerical semigroups, periodicity and the irrational strip.

Run:  python demos/periodic_naturals.py
"""
import numpy as np

from micp_forge.fixtures import s_epsilon
from micp_forge.naturals import (
    PeriodicNaturalSet,
    detect_periodicity,
    intcone_normal_form,
    members_from_slices,
    milp_window,
    polyhedral_milp,
    to_milp,
)

# intcone(6, 10, 15): the chicken-nugget semigroup, conductor 30
P = intcone_normal_form([6, 10, 15])
print("intcone(6,10,15):", P.triple)

# compile {0} u {4, 6, 8, ...} and read it back from the integer slices
P = PeriodicNaturalSet((0,), (4,), 2)
F = to_milp(P)
bits = members_from_slices(F, milp_window(P, 40), 40)
print("\nslices of to_milp({0} u 4+2N):", [int(x) for x in np.flatnonzero(bits)])
print("re-detected:", detect_periodicity(bits, 5).triple)

# the exceptional point sits in an occupied residue, so a pure MILP exists
G = polyhedral_milp(P)
print("polyhedral rewrite:", G.provenance, "polyhedral =", G.is_polyhedral)

# {x : frac(sqrt2 x) near 0}: no period up to 500 on a window of 10^5
res = detect_periodicity(s_epsilon("2/5", 100_000), 500)
print("\ns_epsilon(2/5):", res.__class__.__name__, "max_period", res.max_period,
      "certified on [0,", res.certified_bound, "]")
