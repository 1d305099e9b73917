"""Exact polyhedral cones by the double description method.

Rays and facet normals are primitive integer vectors.  A cone is stored
in coordinates of its own linear span, so lower-dimensional cones in a
big ambient space (heights modulo lineality, say) are handled the same
way as full-dimensional ones.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from ..exact import inverse, nullspace, primitive, rank, rref

__all__ = [
    "ConeError", "extreme_rays", "Cone", "cone_from_generators",
    "cone_from_inequalities", "face_lattice", "f_vector", "face_f_vector",
]


class ConeError(ValueError):
    """Empty, degenerate or non-pointed cone input."""


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b) if x and y)


def _popcount(m):
    return bin(m).count("1")


def extreme_rays(A, dim):
    """Extreme rays of the pointed cone ``{x : a.x >= 0 for a in A}``.

    ``A`` holds rational rows of length ``dim`` and must have rank
    ``dim``.  Returns sorted primitive integer rays.
    """
    rows = []
    seen = set()
    for a in A:
        if len(a) != dim:
            raise ConeError("inequality of the wrong length")
        p = primitive(a)
        if any(p) and p not in seen:
            seen.add(p)
            rows.append(p)
    if dim == 0:
        return []
    if rank(rows, dim) < dim:
        raise ConeError("cone contains a line")
    # initial simplicial cone from the first independent rows
    basis = []
    for i, a in enumerate(rows):
        if rank([rows[j] for j in basis] + [a], dim) > len(basis):
            basis.append(i)
            if len(basis) == dim:
                break
    Binv = inverse([list(rows[i]) for i in basis])
    rays, tight = [], []
    full = 0
    for i in basis:
        full |= 1 << i
    for t in range(dim):
        col = [Binv[r][t] for r in range(dim)]
        rays.append(primitive(col))
        tight.append(full & ~(1 << basis[t]))
    done = set(basis)
    for c, a in enumerate(rows):
        if c in done:
            continue
        vals = [_dot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        zer = [i for i, v in enumerate(vals) if v == 0]
        bit = 1 << c
        new_rays, new_tight = [], []
        if neg:
            for p in pos:
                for q in neg:
                    Z = tight[p] & tight[q]
                    if _popcount(Z) < dim - 2:
                        continue
                    if any((tight[r] & Z) == Z for r in range(len(rays)) if r != p and r != q):
                        continue
                    v = [vals[p] * y - vals[q] * x for x, y in zip(rays[p], rays[q])]
                    new_rays.append(primitive(v))
                    new_tight.append(Z | bit)
        keep = pos + zer
        rays = [rays[i] for i in keep] + new_rays
        tight = [tight[i] | (bit if vals[i] == 0 else 0) for i in keep] + new_tight
    return sorted(set(rays))


@dataclass
class Cone:
    """Pointed polyhedral cone with both descriptions.

    ``basis`` rows span the cone's linear span (reduced echelon form, pivot
    columns ``pivots``); coordinates of an ambient vector in the span are
    its entries at the pivots.  ``rays`` and ``facets`` are primitive
    integer vectors in span coordinates; ``incidence[f]`` is the bitmask of
    rays on facet ``f``.
    """
    ambient: int
    basis: list
    pivots: list
    rays: list
    facets: list
    incidence: list = field(default_factory=list)

    @property
    def dim(self):
        return len(self.pivots)

    def coords(self, v):
        return [Fraction(v[p]) for p in self.pivots]

    def ambient_ray(self, i):
        r = self.rays[i]
        return primitive([sum(c * b[j] for c, b in zip(r, self.basis)) for j in range(self.ambient)])

    def ambient_rays(self):
        return [self.ambient_ray(i) for i in range(len(self.rays))]

    def contains(self, v):
        """Membership test for an ambient vector."""
        if any(v):
            if rank(self.basis + [list(v)], self.ambient) > self.dim:
                return False
        x = self.coords(v)
        return all(_dot(f, x) >= 0 for f in self.facets)

    def ray_mask(self, f):
        return self.incidence[f]

    def f_vector(self):
        return f_vector(self)


def _span(vectors, ambient):
    R, piv = rref(vectors, ambient)
    return [list(r) for r in R], piv


def cone_from_generators(gens, ambient=None):
    """Cone spanned by nonnegative combinations of ``gens``."""
    gens = [list(g) for g in gens]
    if not gens:
        raise ConeError("no generators")
    if ambient is None:
        ambient = len(gens[0])
    if not any(any(g) for g in gens):
        raise ConeError("all generators are zero")
    basis, piv = _span(gens, ambient)
    m = len(piv)
    G = [[Fraction(g[p]) for p in piv] for g in gens if any(g)]
    if m == 1:
        signs = {1 if x[0] > 0 else -1 for x in G}
        if len(signs) > 1:
            raise ConeError("cone contains a line")
        s = signs.pop()
        return Cone(ambient, basis, piv, [(s,)], [(s,)], [0])
    normals = extreme_rays(G, m)
    # facet normals must span for the primal cone to be pointed
    if rank(normals, m) < m:
        raise ConeError("cone contains a line")
    prim = sorted({primitive(g) for g in G})
    rays = []
    for g in prim:
        t = [f for f in normals if _dot(f, g) == 0]
        if len(t) and rank(t, m) == m - 1:
            rays.append(g)
    rays.sort()
    inc = []
    for f in normals:
        mask = 0
        for i, r in enumerate(rays):
            if _dot(f, r) == 0:
                mask |= 1 << i
        inc.append(mask)
    return Cone(ambient, basis, piv, rays, normals, inc)


def cone_from_inequalities(ineqs, dim, equations=()):
    """Cone ``{x : a.x >= 0, e.x = 0}``; it must be pointed."""
    ineqs = [list(a) for a in ineqs]
    if equations:
        N = nullspace([list(e) for e in equations], dim)
    else:
        N = [[Fraction(int(i == j)) for i in range(dim)] for j in range(dim)]
    if not N:
        raise ConeError("equations leave only the origin")
    A = [[_dot(a, v) for v in N] for a in ineqs]
    rays_t = extreme_rays(A, len(N))
    if not rays_t:
        raise ConeError("cone is the origin")
    rays = [[sum(t[i] * N[i][j] for i in range(len(N))) for j in range(dim)] for t in rays_t]
    return cone_from_generators(rays, dim)


def face_lattice(cone):
    """Faces by dimension as ray bitmasks: ``{dim: set(masks)}`` for 1..dim."""
    m = cone.dim
    top = (1 << len(cone.rays)) - 1
    levels = {m: {top}}
    if m == 1:
        return levels
    facets = set(cone.incidence)
    levels[m - 1] = facets
    for t in range(m - 1, 1, -1):
        nxt = set()
        for F in levels[t]:
            cands = {F & G for G in facets if (F & G) != F}
            cands.discard(0)
            for C in cands:
                if not any(C != D and (C & D) == C for D in cands):
                    nxt.add(C)
        levels[t - 1] = nxt
    return levels


def f_vector(cone):
    """Face counts in dimensions 1..dim (the apex is not counted)."""
    levels = face_lattice(cone)
    return [len(levels[t]) for t in range(1, cone.dim + 1)]


def face_f_vector(levels, F):
    """f-vector of the face with ray mask ``F`` from a precomputed lattice."""
    out = []
    for t in sorted(levels):
        c = sum(1 for G in levels[t] if (G & F) == G)
        if c == 0:
            break
        out.append(c)
    return out
