"""Faces of the Newton polytope of the product of all Plücker minors.

The polytope is a Minkowski sum over J of Newt(p_J), so its face in
direction w is the Minkowski sum of the per-J faces.
"""

from dataclasses import dataclass
from fractions import Fraction

from ..combinatorics import subsets
from ..exact import rank
from ..tropical import build_monomial_table
from .cones import cone_from_generators, face_lattice

__all__ = [
    "NewtonFace", "newton_face", "minkowski_vertices", "polytope_lattice",
    "polytope_f_vector", "product_f_vector", "newton_dimension",
    "simultaneously_minimized", "codim_faces", "FACE_LIMIT",
]

FACE_LIMIT = 5000


def _argmin(exps, w):
    vals = [sum(a * b for a, b in zip(e, w) if a) for e in exps]
    m = min(vals)
    return tuple(e for e, v in zip(exps, vals) if v == m)


@dataclass(frozen=True)
class NewtonFace:
    k: int
    n: int
    w: tuple
    pieces: dict  # J -> tuple of minimizing exponent vectors
    dim: int
    f_vector: tuple = None


def _dimension(pieces, size):
    diffs = []
    for pts in pieces.values():
        p0 = pts[0]
        diffs.extend([a - b for a, b in zip(p, p0)] for p in pts[1:])
    return rank(diffs, size) if diffs else 0


def newton_face(k, n, w=None, with_f_vector=False):
    """The face of N_{k,n} minimizing the linear functional ``w``."""
    T = build_monomial_table(k, n)
    size = (k - 1) * (n - k)
    if hasattr(w, "entries"):
        w = w.entries
    w = tuple(Fraction(x) for x in (w if w is not None else (0,) * size))
    pieces = {J: _argmin(T.exponents(J), w) for J in subsets(k, n)}
    dim = _dimension(pieces, size)
    fv = None
    if with_f_vector:
        fv = tuple(polytope_f_vector(minkowski_vertices(pieces.values())))
    return NewtonFace(k, n, w, pieces, dim, fv)


def newton_dimension(k, n):
    return newton_face(k, n).dim


def _vertices(points):
    pts = sorted(set(points))
    if len(pts) <= 1:
        return pts
    cone = cone_from_generators([(1,) + p for p in pts])
    keep = set(cone.ambient_rays())
    return [p for p in pts if (1,) + p in keep]


def minkowski_vertices(polys, limit=FACE_LIMIT):
    """Vertices of a Minkowski sum, pruning after every summand."""
    cur = [()]
    for P in polys:
        P = _vertices([tuple(p) for p in P])
        if cur == [()]:
            cur = P
            continue
        cand = {tuple(a + b for a, b in zip(x, y)) for x in cur for y in P}
        if len(cand) > limit:
            raise ValueError(f"Minkowski sum has more than {limit} candidate points")
        cur = _vertices(cand)
    return cur


def polytope_lattice(vertices):
    """Homogenized cone over the vertices and its face lattice.

    Cone faces of dimension t are polytope faces of dimension t-1.
    """
    cone = cone_from_generators([(1,) + tuple(v) for v in vertices])
    return cone, face_lattice(cone)


def polytope_f_vector(vertices):
    """(f_0, f_1, ..., f_dim) of conv(vertices); a point gives (1,)."""
    if len(vertices) == 1:
        return [1]
    cone, levels = polytope_lattice(vertices)
    return [len(levels[t]) for t in range(1, cone.dim + 1)]


def product_f_vector(*fvs):
    """f-vector of a product of polytopes, top entry included."""
    out = [1]
    for fv in fvs:
        new = [0] * (len(out) + len(fv) - 1)
        for a, x in enumerate(out):
            for b, y in enumerate(fv):
                new[a + b] += x * y
        out = new
    return out


def simultaneously_minimized(k, n, roots):
    """Whether the linear forms dual to ``roots`` share a minimizing face.

    They do exactly when the face in direction sum(roots) lies in every
    individual minimizing face, checked per Plücker coordinate.
    """
    T = build_monomial_table(k, n)
    vecs = [tuple(r.entries) if hasattr(r, "entries") else tuple(r) for r in roots]
    tot = tuple(sum(c) for c in zip(*vecs))
    for J in subsets(k, n):
        exps = T.exponents(J)
        common = set(_argmin(exps, tot))
        for v in vecs:
            if not common <= set(_argmin(exps, v)):
                return False
    return True


def codim_faces(vertices, codim):
    """Faces of conv(vertices) of the given codimension, each as a vertex list."""
    cone, levels = polytope_lattice(vertices)
    rays = cone.ambient_rays()
    target = cone.dim - codim
    out = []
    for F in sorted(levels.get(target, ())):
        out.append([rays[i][1:] for i in range(len(rays)) if F >> i & 1])
    return out, levels, cone
