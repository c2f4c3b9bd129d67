"""Normal crossing configurations and what blow-ups do to their duals.

The incidence model records components and strata only; the dual complex
is read off directly.  Blowing up a stratum removes its open star, while
a transversal center away from the strata changes nothing at all.
"""

from sncresolve.dual_complex import homology, remove_open_star
from sncresolve.snc_model import (CenterDescriptor, blowup_center,
                                  check_center, coordinate_germ,
                                  dual_complex_of, from_index_sets)

# The germ of three coordinate hyperplanes x1*x2*x3 = 0.  Its strata are
# the three planes, three pairwise lines, and the origin: seven in all.
germ = coordinate_germ(3)
print("components:", sorted(germ.components))
print("strata:", len(germ.strata))

simplex = dual_complex_of(germ)
print("dual complex:", simplex.cell_counts(), "-> the 2-simplex")
print("betti:", homology(simplex).betti)

# Blow up the origin: the deepest stratum disappears, and with it the
# top cell of the dual complex.  What remains is the boundary circle.
origin = next(s for s in germ.strata if len(s.indices) == 3)
blown, dual_after = blowup_center(
    germ, CenterDescriptor("stratum", stratum_id=origin.id))
print("\nafter blowing up the origin:", dual_after.cell_counts())
print("betti:", homology(dual_after).betti)
print("same as open-star removal:",
      dual_after == remove_open_star(simplex, origin.id))

# Blow up a point elsewhere on one plane: all seven strata survive and
# the dual complex is untouched (a thrifty modification).
plane = next(s for s in germ.strata if len(s.indices) == 1)
center = CenterDescriptor("nonstratum", host_stratum=plane.id,
                          codim_in_host=2, transversal=True)
verdict = check_center(germ, center)
print("\nnon-stratum center compatible:", verdict.compatible)
for assumption in verdict.assumptions:
    print("  assumes:", assumption)
kept, dual_kept = blowup_center(germ, center)
print("strata kept:", len(kept.strata), "| dual unchanged:", dual_kept == simplex)

# The famous counterexample shape: a diagonal line meets all three
# planes transversally yet its intersection with their union is a fat
# point.  Without the caller's transversality assertion the center is
# refused.
diagonal = CenterDescriptor("nonstratum", host_stratum=plane.id,
                            codim_in_host=1, transversal=False)
verdict = check_center(germ, diagonal)
print("\ndiagonal-style center compatible:", verdict.compatible)
for reason in verdict.reasons:
    print("  because:", reason)

# A circle of three components (no triple point) is not rationally
# acyclic; its dual complex already shows the loop.
cycle = from_index_sets(["E1", "E2", "E3"],
                        [{"E1", "E2"}, {"E2", "E3"}, {"E1", "E3"}])
print("\ncycle of three planes, betti:", homology(dual_complex_of(cycle)).betti)
