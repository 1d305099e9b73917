"""Regular subdivisions of the hypersimplex induced by height vectors.

Cells are stored as frozensets of vertices (k-subsets of [n]).  The
primary path refines blade plates; :func:`lower_hull_oracle` recomputes
the same subdivision from scratch as the vertex set of the polyhedron
``{a : <a, e_I> <= pi_I}``.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import networkx as nx

from ..blades import HeightVector, expand_in_planar_basis, height_of_dosp
from ..combinatorics import DOSP, dosp_of_subset, subsets
from ..exact import Q, rank, solve
from ..tropical import is_positive_tropical_plucker
from .cones import cone_from_generators, extreme_rays

__all__ = [
    "Subdivision", "plate_vertices", "blade_combination", "height_of_combination",
    "subdivision_from_height", "lower_hull_oracle", "OracleSizeError",
    "CertificateError", "is_matroid_vertex_set", "is_matroid_by_edges",
    "is_matroidal", "is_positroidal", "dual_graph", "is_coarsest",
    "secondary_dimension", "affine_rank",
]

ORACLE_LIMIT = 250


class OracleSizeError(ValueError):
    """The hypersimplex is too large for the lower-hull oracle."""


class CertificateError(ArithmeticError):
    """A refinement cell failed the lower-hull certificate."""


def _e(I, n):
    v = [0] * n
    for i in I:
        v[i - 1] = 1
    return v


def affine_rank(cell, n):
    """Rank of the vertex vectors; equals 1 + dimension of the cell."""
    return rank([_e(I, n) for I in cell], n) if cell else 0


@dataclass(frozen=True)
class Subdivision:
    k: int
    n: int
    cells: tuple
    height: HeightVector
    method: str = "plates"

    @staticmethod
    def build(k, n, cells, height, method):
        cells = sorted({frozenset(c) for c in cells}, key=lambda c: sorted(c))
        return Subdivision(k, n, tuple(cells), height, method)

    def __len__(self):
        return len(self.cells)

    def same_cells(self, other):
        return set(self.cells) == set(other.cells)

    def to_json(self):
        return {"k": self.k, "n": self.n,
                "cells": [[list(I) for I in sorted(c)] for c in self.cells]}


def plate_vertices(d, j):
    """Vertices of plate j: x_{S_j} >= r_j, x_{S_j}+x_{S_{j+1}} >= r_j+r_{j+1}, ..."""
    m = d.d
    out = []
    for I in subsets(d.k, d.n):
        Is = set(I)
        tot = need = 0
        ok = True
        for t in range(m - 1):
            b = (j - 1 + t) % m
            tot += sum(1 for i in d.blocks[b] if i in Is)
            need += d.r[b]
            if tot < need:
                ok = False
                break
        if ok:
            out.append(I)
    return frozenset(out)


def blade_combination(v):
    """Write a height as a combination of subset blades (lineality dropped)."""
    if isinstance(v, HeightVector):
        exp = expand_in_planar_basis(v)
        return [(c, dosp_of_subset(J, v.n)) for J, c in sorted(exp.nonzero().items())]
    out = []
    for c, b in v:
        if not isinstance(b, DOSP):
            raise TypeError("combination entries must be (coefficient, DOSP)")
        out.append((Q(c), b))
    return out


def height_of_combination(comb, k, n):
    h = HeightVector.zero(k, n)
    for c, b in comb:
        h = h + c * height_of_dosp(b)
    return h


def _certify(cells, h, k, n):
    """Replace refinement cells by the lower-hull cells they sit in."""
    verts = subsets(k, n)
    vals = {I: h[I] for I in verts}
    out = set()
    for cell in cells:
        cl = sorted(cell)
        a = solve([_e(I, n) for I in cl], [vals[I] for I in cl])
        if a is None:
            raise CertificateError("height is not affine on a refinement cell")
        true = []
        for I in verts:
            lhs = sum(a[i - 1] for i in I)
            if lhs > vals[I]:
                raise CertificateError("affine extension of a cell rises above the height")
            if lhs == vals[I]:
                true.append(I)
        out.add(frozenset(true))
    return out


def subdivision_from_height(pi, k=None, n=None, fallback=True):
    """Regular subdivision of the hypersimplex induced by a blade combination.

    ``pi`` is a list of ``(coefficient, DOSP)`` pairs or a HeightVector,
    which is first expanded in the planar basis.  Plates of all blades are
    intersected, full-dimensional pieces kept, and each piece replaced by
    the lower-hull cell certified from its affine function.  If that
    certificate fails (the height is not convex on the refinement) the
    oracle takes over when ``fallback`` is set.
    """
    comb = blade_combination(pi)
    if isinstance(pi, HeightVector):
        k, n = pi.k, pi.n
        h = pi
    else:
        if comb:
            k, n = comb[0][1].k, comb[0][1].n
        if k is None:
            raise ValueError("empty combination needs explicit k and n")
        h = height_of_combination(comb, k, n)
    cells = [frozenset(subsets(k, n))]
    for c, b in comb:
        if c == 0 or b.d == 1:
            continue
        plates = [plate_vertices(b, j) for j in range(1, b.d + 1)]
        nxt = set()
        for cell in cells:
            for p in plates:
                piece = cell & p
                if len(piece) >= n and affine_rank(piece, n) == n:
                    nxt.add(piece)
        cells = list(nxt)
    try:
        final = _certify(cells, h, k, n)
    except CertificateError:
        if not fallback:
            raise
        return lower_hull_oracle(h)
    covered = set().union(*final)
    if len(covered) != len(subsets(k, n)):
        raise CertificateError("cells do not cover every vertex")
    return Subdivision.build(k, n, final, h, "plates")


def lower_hull_oracle(pi):
    """Maximal cells from the vertices of ``{a in Q^n : <a, e_I> <= pi_I}``.

    Vertex enumeration runs on the homogenized cone in Q^{n+1} with the
    double description code; each vertex's tight set is a maximal cell.
    """
    k, n = pi.k, pi.n
    verts = subsets(k, n)
    if len(verts) > ORACLE_LIMIT:
        raise OracleSizeError(f"C({n},{k}) = {len(verts)} exceeds {ORACLE_LIMIT}")
    # (a, t) with t*pi_I - <a, e_I> >= 0 and t >= 0
    A = []
    for I in verts:
        row = [Fraction(0)] * (n + 1)
        for i in I:
            row[i - 1] = Fraction(-1)
        row[n] = pi[I]
        A.append(row)
    A.append([0] * n + [1])
    cells = []
    for r in extreme_rays(A, n + 1):
        if r[n] <= 0:
            continue
        t = r[n]
        tight = frozenset(I for I in verts if t * pi[I] == sum(r[i - 1] for i in I))
        if affine_rank(tight, n) == n:
            cells.append(tight)
    return Subdivision.build(k, n, cells, pi, "oracle")


def is_matroid_vertex_set(cell):
    """Basis exchange: for A, B and a in A-B some b in B-A has A-a+b in the set."""
    S = set(cell)
    for A in S:
        As = set(A)
        for B in S:
            if A == B:
                continue
            Bs = set(B)
            for a in As - Bs:
                base = As - {a}
                if not any(tuple(sorted(base | {b})) in S for b in Bs - As):
                    return False
    return True


def is_matroid_by_edges(cell, n):
    """Edge test: every edge of conv(e_I) is parallel to some e_i - e_j."""
    cl = sorted(cell)
    if len(cl) <= 1:
        return True
    cone = cone_from_generators([_e(I, n) for I in cl], n)
    pos = {r: i for i, r in enumerate(cone.rays)}
    idx = [pos[tuple(_e(I, n))] for I in cl]
    full = (1 << len(cone.rays)) - 1
    for x, y in combinations(range(len(cl)), 2):
        if len(set(cl[x]) ^ set(cl[y])) == 2:
            continue
        bits = (1 << idx[x]) | (1 << idx[y])
        face = full
        for m in cone.incidence:
            if (m & bits) == bits:
                face &= m
        if face == bits:
            return False
    return True


def is_matroidal(sub):
    return all(is_matroid_vertex_set(c) for c in sub.cells)


def is_positroidal(sub):
    return is_matroidal(sub) and is_positive_tropical_plucker(sub.height)


def dual_graph(sub):
    """Cells as nodes 0..m-1; an edge where two cells share a facet."""
    G = nx.Graph()
    for i, c in enumerate(sub.cells):
        G.add_node(i, cell=sorted(c))
    for i, j in combinations(range(len(sub.cells)), 2):
        common = sub.cells[i] & sub.cells[j]
        if len(common) >= sub.n - 1 and affine_rank(common, sub.n) == sub.n - 1:
            G.add_edge(i, j)
    return G


def secondary_dimension(sub):
    """Dimension of the space of vertex heights affine on every cell."""
    n = sub.n
    m = len(sub.cells)
    where = {}
    for ci, c in enumerate(sub.cells):
        for I in c:
            where.setdefault(I, []).append(ci)
    rows = []
    for I, cs in where.items():
        for other in cs[1:]:
            row = [0] * (m * n)
            for i in I:
                row[cs[0] * n + i - 1] += 1
                row[other * n + i - 1] -= 1
            rows.append(row)
    return m * n - (rank(rows, m * n) if rows else 0)


def is_coarsest(pi):
    """True when the induced subdivision is nontrivial and admits no coarsening."""
    sub = pi if isinstance(pi, Subdivision) else subdivision_from_height(pi)
    return len(sub.cells) > 1 and secondary_dimension(sub) == sub.n + 1
