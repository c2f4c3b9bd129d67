"""Dual complexes and their exact homology.

A walk through the combinatorial side of the library: building
Delta-complexes cell by cell, validating them, and reading off Betti
numbers, torsion, and the Euler characteristic from exact integer
linear algebra.
"""

from sncresolve.dual_complex import (Cell, DualComplex, homology,
                                     is_q_acyclic, remove_open_star,
                                     to_dot, validate)

# A 2-simplex: three vertices, three edges, one triangle.  Each k-cell
# lists its k+1 facets in order; the order fixes the boundary signs.
cells = [
    Cell.of("v0", 0), Cell.of("v1", 0), Cell.of("v2", 0),
    Cell.of("e01", 1, ("v1", "v0")),   # facet 0 drops the first vertex
    Cell.of("e02", 1, ("v2", "v0")),
    Cell.of("e12", 1, ("v2", "v1")),
    Cell.of("f", 2, ("e12", "e02", "e01")),
]
simplex = DualComplex(cells)
print("violations:", validate(simplex))

report = homology(simplex)
print("2-simplex betti:", report.betti, "euler:", report.euler)
print("contractible, so rationally acyclic:", is_q_acyclic(simplex))

# Removing the open star of the 2-cell leaves its boundary: a circle.
circle = remove_open_star(simplex, "f")
print("\nafter removing the face:", circle.cell_counts(), "cells per dim")
print("circle betti:", homology(circle).betti)
print("still rationally acyclic?", is_q_acyclic(circle))

# A non-simplicial example: the projective plane glued from two
# triangles over three edges and two vertices.  Torsion is computed
# exactly from Smith normal forms, so the order-two class is visible.
rp2 = DualComplex([
    Cell.of("v", 0), Cell.of("w", 0),
    Cell.of("a", 1, ("w", "v")),
    Cell.of("b", 1, ("w", "v")),
    Cell.of("c", 1, ("w", "w")),
    Cell.of("U", 2, ("c", "a", "b")),
    Cell.of("L", 2, ("c", "b", "a")),
])
report = homology(rp2)
print("\nprojective plane betti:", report.betti)
print("torsion per dimension:", report.torsion)
print("torsion is invisible rationally, so Q-acyclic:", is_q_acyclic(rp2))

# The 1-skeleton renders as DOT for quick visual checks.
print("\nDOT of the circle:")
print(to_dot(circle))
