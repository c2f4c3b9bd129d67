"""Unordered Delta-complexes with exact integer homology.

Cells carry ordered facet lists; the position of a facet fixes its sign in
the boundary operator, so any complex accepted by ``validate`` has
well-defined chain groups with boundary-squared zero.  Homology is
computed from Smith normal forms over arbitrary-precision integers, so
Betti numbers and torsion coefficients are exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class InvalidComplexError(ValueError):
    """Operation requires a complex that passes validation."""


@dataclass(frozen=True)
class Cell:
    """A single cell: k+1 ordered facets for a k-cell, none for a vertex."""

    id: str
    dim: int
    facets: tuple = ()
    label: frozenset | None = None

    @staticmethod
    def of(id, dim, facets=(), label=None) -> "Cell":
        return Cell(str(id), int(dim), tuple(str(f) for f in facets),
                    frozenset(str(x) for x in label) if label is not None else None)


@dataclass(frozen=True)
class Violation:
    rule: str
    cell: str | None
    detail: str

    def __str__(self):
        where = f" [{self.cell}]" if self.cell else ""
        return f"{self.rule}{where}: {self.detail}"


class DualComplex:
    """A finite unordered Delta-complex, indexed by cell id."""

    def __init__(self, cells=()):
        by_id = {}
        for cell in cells:
            if cell.id in by_id:
                raise ValueError(f"duplicate cell id {cell.id!r}")
            by_id[cell.id] = cell
        self._cells = by_id

    @property
    def cells(self) -> dict:
        return dict(self._cells)

    def __contains__(self, cell_id) -> bool:
        return cell_id in self._cells

    def __getitem__(self, cell_id) -> Cell:
        return self._cells[cell_id]

    def __len__(self) -> int:
        return len(self._cells)

    def __eq__(self, other):
        if not isinstance(other, DualComplex):
            return NotImplemented
        return self._cells == other._cells

    def __hash__(self):
        return hash(frozenset(self._cells.items()))

    def dimension(self) -> int:
        return max((c.dim for c in self._cells.values()), default=-1)

    def cells_of_dim(self, k: int) -> list:
        return sorted((c for c in self._cells.values() if c.dim == k),
                      key=lambda c: c.id)

    def cell_counts(self) -> list:
        return [len(self.cells_of_dim(k)) for k in range(self.dimension() + 1)]

    def closure_ids(self, cell_id: str) -> set:
        """The cell plus every iterated facet below it."""
        seen = set()
        stack = [cell_id]
        while stack:
            cid = stack.pop()
            if cid in seen:
                continue
            seen.add(cid)
            stack.extend(self._cells[cid].facets)
        return seen

    def __repr__(self):
        return f"DualComplex({'/'.join(str(n) for n in self.cell_counts()) or 'empty'})"


def validate(complex: DualComplex) -> list:
    """All structural violations of the complex; empty means valid.

    Checks facet counts, dangling or wrong-dimension facets, the
    facets-of-facets compatibility that makes boundary-squared vanish, and
    (when labels are present) that facet i drops the i-th smallest label.
    """
    out = []
    cells = complex.cells
    for cell in sorted(cells.values(), key=lambda c: (c.dim, c.id)):
        if cell.dim < 0:
            out.append(Violation("dimension", cell.id, f"negative dimension {cell.dim}"))
            continue
        expected = 0 if cell.dim == 0 else cell.dim + 1
        if len(cell.facets) != expected:
            out.append(Violation(
                "facet count", cell.id,
                f"a {cell.dim}-cell needs {expected} facets, found {len(cell.facets)}"))
            continue
        dangling = False
        for fid in cell.facets:
            if fid not in cells:
                out.append(Violation("dangling facet", cell.id,
                                     f"facet {fid!r} does not exist"))
                dangling = True
            elif cells[fid].dim != cell.dim - 1:
                out.append(Violation(
                    "facet dimension", cell.id,
                    f"facet {fid!r} has dimension {cells[fid].dim}, expected {cell.dim - 1}"))
                dangling = True
        if dangling:
            continue
        # Compatibility: dropping face j then face i (i < j) must agree
        # with dropping face i then face j-1.
        if cell.dim >= 2:
            for j in range(cell.dim + 1):
                for i in range(j):
                    fj = cells[cell.facets[j]]
                    fi = cells[cell.facets[i]]
                    if len(fj.facets) > i and len(fi.facets) > j - 1:
                        if fj.facets[i] != fi.facets[j - 1]:
                            out.append(Violation(
                                "facet compatibility", cell.id,
                                f"facets {j} then {i} reach {fj.facets[i]!r} but "
                                f"facets {i} then {j - 1} reach {fi.facets[j - 1]!r}"))
        if cell.label is not None and cell.dim >= 1:
            if len(cell.label) == cell.dim + 1:
                ordered = sorted(cell.label)
                for i, fid in enumerate(cell.facets):
                    flabel = cells[fid].label
                    want = frozenset(ordered[:i] + ordered[i + 1:])
                    if flabel is not None and flabel != want:
                        out.append(Violation(
                            "label mismatch", cell.id,
                            f"facet {i} should drop {ordered[i]!r}, but carries "
                            f"label {sorted(flabel)}"))
            else:
                out.append(Violation(
                    "label size", cell.id,
                    f"label has {len(cell.label)} entries on a {cell.dim}-cell"))
    return out


def _require_valid(complex: DualComplex):
    violations = validate(complex)
    if violations:
        raise InvalidComplexError(
            "; ".join(str(v) for v in violations[:5])
            + ("" if len(violations) <= 5 else f" (+{len(violations) - 5} more)"))


def boundary_matrix(complex: DualComplex, k: int) -> list:
    """Integer matrix of the k-th boundary map, rows (k-1)-cells, cols k-cells.

    Signs alternate with facet position; repeated facets accumulate.
    """
    rows = complex.cells_of_dim(k - 1)
    cols = complex.cells_of_dim(k)
    index = {c.id: i for i, c in enumerate(rows)}
    mat = [[0] * len(cols) for _ in rows]
    for j, cell in enumerate(cols):
        for pos, fid in enumerate(cell.facets):
            mat[index[fid]][j] += 1 if pos % 2 == 0 else -1
    return mat


def smith_invariant_factors(matrix: list) -> list:
    """Nonzero diagonal of the Smith normal form, in divisibility order.

    Pure integer row/column reduction with a divisibility fix-up; exact
    over arbitrary-precision integers.
    """
    a = [row[:] for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    factors = []
    t = 0
    while t < min(m, n):
        # Find the smallest nonzero entry in the remaining block.
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]

        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # Pivot must divide the rest of the block for correct invariant factors.
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            continue
        factors.append(abs(a[t][t]))
        t += 1
    return factors


@dataclass(frozen=True)
class HomologyReport:
    """Betti numbers, torsion coefficients per dimension, Euler characteristic."""

    betti: tuple
    torsion: tuple  # per dimension, tuple of invariant factors > 1
    euler: int

    def __post_init__(self):
        alt = sum((-1) ** k * b for k, b in enumerate(self.betti))
        if alt != self.euler:
            raise ValueError(
                f"euler {self.euler} != alternating betti sum {alt}")

    def to_json_obj(self) -> dict:
        return {"betti": list(self.betti),
                "torsion": [list(t) for t in self.torsion],
                "euler": self.euler}


def homology(complex: DualComplex) -> HomologyReport:
    """Integral homology via Smith normal forms of the boundary matrices."""
    _require_valid(complex)
    top = complex.dimension()
    if top < 0:
        return HomologyReport((), (), 0)
    counts = complex.cell_counts()
    factors = {}
    for k in range(1, top + 1):
        factors[k] = smith_invariant_factors(boundary_matrix(complex, k))
    ranks = {k: len(factors.get(k, [])) for k in range(0, top + 2)}
    betti = []
    torsion = []
    for k in range(top + 1):
        betti.append(counts[k] - ranks.get(k, 0) - ranks.get(k + 1, 0))
        torsion.append(tuple(d for d in factors.get(k + 1, []) if d > 1))
    euler = sum((-1) ** k * counts[k] for k in range(top + 1))
    return HomologyReport(tuple(betti), tuple(torsion), euler)


def is_q_acyclic(complex: DualComplex) -> bool:
    """True iff every rational Betti number above degree zero vanishes."""
    report = homology(complex)
    return all(b == 0 for b in report.betti[1:])


def remove_open_star(complex: DualComplex, cell_id: str) -> DualComplex:
    """Drop the named cell and every cell whose closure contains it."""
    if cell_id not in complex:
        raise KeyError(f"unknown cell id {cell_id!r}")
    keep = []
    for cell in complex.cells.values():
        if cell_id not in complex.closure_ids(cell.id):
            keep.append(cell)
    return DualComplex(keep)


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

def to_json_obj(complex: DualComplex) -> dict:
    cells = []
    for cell in sorted(complex.cells.values(), key=lambda c: (c.dim, c.id)):
        entry = {"id": cell.id, "dim": cell.dim, "facets": list(cell.facets)}
        if cell.label is not None:
            entry["label"] = sorted(cell.label)
        cells.append(entry)
    return {"cells": cells}


def from_json_obj(obj: dict) -> DualComplex:
    if not isinstance(obj, dict) or "cells" not in obj:
        raise ValueError("complex document needs a 'cells' array")
    cells = []
    for entry in obj["cells"]:
        cells.append(Cell.of(entry["id"], entry["dim"], entry.get("facets", ()),
                             entry.get("label")))
    return DualComplex(cells)


def canonical_json(complex: DualComplex) -> str:
    return json.dumps(to_json_obj(complex), sort_keys=True, separators=(",", ":"))


def to_dot(complex: DualComplex) -> str:
    """DOT rendering of the 1-skeleton (vertices and edges only)."""
    lines = ["graph skeleton {"]
    for cell in complex.cells_of_dim(0):
        label = ",".join(sorted(cell.label)) if cell.label else cell.id
        lines.append(f'  "{cell.id}" [label="{label}"];')
    for cell in complex.cells_of_dim(1):
        a, b = cell.facets
        lines.append(f'  "{a}" -- "{b}" [label="{cell.id}"];')
    lines.append("}")
    return "\n".join(lines)
