"""The fan on which y -> F(y; s) = sum_J s_J trop(p_J)(y) is linear.

Coordinates are gauge fixed by y_{i,1} = 0, leaving the grid positions
with column index b >= 2.  Maximal cones are normal cones at vertices of
the Newton polytope of the product of all minors; a cone is identified
by the minimizing monomial of every minor.  Cones are found by walking
across facets, and each is split into simplicial cones by a pulling
triangulation.
"""

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from ..blades import expand_in_planar_basis
from ..combinatorics import subsets
from ..exact import det, primitive, rank
from ..polyhedra.cones import extreme_rays
from ..tropical import GridVector, build_monomial_table, proj_rt, trop_plucker

__all__ = [
    "FAN_GUARD", "FanGuardError", "LinearFan", "Simplex", "build_fan", "build_star",
    "free_positions", "to_grid", "from_grid", "ray_of_height",
]

FAN_GUARD = 6


class FanGuardError(ValueError):
    """The fan dimension exceeds the configured guard."""


def free_positions(k, n):
    w = n - k
    return [i * w + b for i in range(k - 1) for b in range(1, w)]


def to_grid(r, k, n):
    v = [0] * ((k - 1) * (n - k))
    for p, x in zip(free_positions(k, n), r):
        v[p] = x
    return GridVector(k, n, tuple(v))


def from_grid(y):
    g = y.gauge_fixed()
    return tuple(g.entries[p] for p in free_positions(y.k, y.n))


@lru_cache(maxsize=None)
def _restricted_exponents(k, n):
    T = build_monomial_table(k, n)
    free = free_positions(k, n)
    out = []
    for J in subsets(k, n):
        exps = set()
        for m in T.monomials[J]:
            e = T.exponent(m)
            exps.add(tuple(e[p] for p in free))
        out.append(sorted(exps))
    return tuple(out)


@dataclass(frozen=True)
class Simplex:
    """A simplicial cone: ray indices into the fan and |det| of its rays."""
    rays: tuple
    volume: int


@dataclass
class LinearFan:
    """Maximal cones (as ray-index tuples) with a simplicial refinement.

    ``rays`` are primitive integer vectors in gauge-fixed coordinates and
    ``heights[i]`` is trop(rays[i]).  ``star_of`` is set when only the
    cones around one ray were collected.
    """
    k: int
    n: int
    rays: list
    cones: list
    simplices: list
    star_of: tuple = None
    heights: list = field(default_factory=list)

    @property
    def dim(self):
        return (self.k - 1) * (self.n - self.k - 1)

    def ray_index(self, r):
        return self._index[tuple(r)]

    def planar(self, i):
        """Planar-basis coefficients of the height of ray i."""
        if self._planar[i] is None:
            self._planar[i] = expand_in_planar_basis(self.heights[i]).nonzero()
        return self._planar[i]

    def __post_init__(self):
        self._index = {tuple(r): i for i, r in enumerate(self.rays)}
        self._planar = [None] * len(self.rays)


def _lex_argmin(exps, funcs):
    best = None
    bkey = None
    for e in exps:
        key = tuple(sum(a * b for a, b in zip(e, f) if a) for f in funcs)
        if bkey is None or key < bkey:
            best, bkey = e, key
    return best


def _vertex_key(E, funcs):
    # lexicographic tie-breaking by standard basis makes the argmin unique
    D = len(E[0][0])
    full = list(funcs) + [tuple(int(i == j) for j in range(D)) for i in range(D)]
    return tuple(_lex_argmin(exps, full) for exps in E)


def _cone_of(E, key, D):
    rows = set()
    for exps, v in zip(E, key):
        for e in exps:
            if e != v:
                rows.add(primitive([a - b for a, b in zip(e, v)]))
    rows = sorted(rows)
    rays = extreme_rays(rows, D)
    facets = {}
    for a in rows:
        mask = 0
        for i, r in enumerate(rays):
            if sum(x * y for x, y in zip(a, r)) == 0:
                mask |= 1 << i
        if mask in facets or bin(mask).count("1") < D - 1:
            continue
        if rank([rays[i] for i in range(len(rays)) if mask >> i & 1], D) == D - 1:
            facets[mask] = a
    return rays, facets


def _walk(k, n, start, stay):
    """Breadth-first walk over maximal cones.

    ``start`` is a list of functionals for the first lexicographic argmin;
    ``stay(rays, mask)`` decides whether to cross the facet ``mask``.
    """
    E = _restricted_exponents(k, n)
    D = (k - 1) * (n - k - 1)
    first = _vertex_key(E, start)
    seen = {first}
    queue = deque([first])
    found = []
    while queue:
        key = queue.popleft()
        rays, facets = _cone_of(E, key, D)
        found.append((key, rays))
        for mask, a in sorted(facets.items()):
            if not stay(rays, mask):
                continue
            centre = [sum(rays[i][t] for i in range(len(rays)) if mask >> i & 1)
                      for t in range(D)]
            nxt = _vertex_key(E, [centre, [-x for x in a]])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return found


def _facets_of_face(F, d, cone_facets, rays, cache):
    out = set()
    for G in cone_facets:
        C = F & G
        if C == F or C in out:
            continue
        key = C
        if key not in cache:
            cache[key] = rank([rays[i] for i in range(len(rays)) if C >> i & 1])
        if cache[key] == d - 1:
            out.add(C)
    return [C for C in out if not any(C != B and (C & B) == C for B in out)]


def _pull(F, d, order, cone_facets, rays, cache):
    if bin(F).count("1") == d:
        return [F]
    v = next(i for i in order if F >> i & 1)
    out = []
    for C in _facets_of_face(F, d, cone_facets, rays, cache):
        if C >> v & 1:
            continue
        for s in _pull(C, d - 1, order, cone_facets, rays, cache):
            out.append(s | (1 << v))
    return out


def _assemble(k, n, found, first_rays=(), star_of=None):
    D = (k - 1) * (n - k - 1)
    allrays = sorted({r for _, rays in found for r in rays})
    pri = {tuple(r): t for t, r in enumerate(first_rays)}
    allrays.sort(key=lambda r: (pri.get(r, len(pri)), r))
    index = {r: i for i, r in enumerate(allrays)}
    cones, simplices = [], []
    for key, rays in found:
        gids = [index[r] for r in rays]
        cones.append(tuple(sorted(gids)))
        local_order = sorted(range(len(rays)), key=lambda i: gids[i])
        _, facets = _cone_of(_restricted_exponents(k, n), key, D)
        cache = {}
        for m in _pull((1 << len(rays)) - 1, D, local_order, list(facets), rays, cache):
            sel = [i for i in range(len(rays)) if m >> i & 1]
            vol = abs(det([list(rays[i]) for i in sel]))
            simplices.append(Simplex(tuple(sorted(gids[i] for i in sel)), int(vol)))
    heights = [trop_plucker(to_grid(r, k, n)) for r in allrays]
    return LinearFan(k, n, allrays, cones, simplices, star_of, heights)


def _check_guard(k, n, guard):
    D = (k - 1) * (n - k - 1)
    if D < 1:
        raise ValueError(f"({k},{n}) has a zero-dimensional fan")
    if guard is not None and D > guard:
        raise FanGuardError(f"fan dimension {D} exceeds guard {guard}")
    return D


def build_fan(k, n, guard=FAN_GUARD):
    """All maximal cones of the linearity fan with a pulling triangulation."""
    D = _check_guard(k, n, guard)
    start = [[(7 * t + 3) % 11 + 1 for t in range(D)]]
    found = _walk(k, n, start, lambda rays, mask: True)
    return _assemble(k, n, found)


def ray_of_height(h):
    """Gauge-fixed primitive grid direction whose tropicalization is ``h``.

    Raises ValueError when ``h`` is not, modulo lineality, a positive
    multiple of trop of its own projection.
    """
    y = proj_rt(h)
    r = primitive(from_grid(y))
    pi = trop_plucker(to_grid(r, h.k, h.n))
    a = expand_in_planar_basis(pi).nonzero()
    b = expand_in_planar_basis(h).nonzero()
    if set(a) != set(b) or not a:
        raise ValueError("height is not the tropicalization of a grid ray")
    J0 = next(iter(a))
    lam = b[J0] / a[J0]
    if lam <= 0 or any(b[J] != lam * a[J] for J in a):
        raise ValueError("height is not the tropicalization of a grid ray")
    return r


def build_star(k, n, heights, guard=None):
    """Maximal cones containing the ray of ``heights[0]``.

    The remaining heights only fix the order in which rays are pulled, so
    every simplex containing any of them lists them first.
    """
    D = _check_guard(k, n, guard)
    firsts = [ray_of_height(h) for h in heights]
    r0 = firsts[0]
    generic = [(7 * t + 3) % 11 + 1 for t in range(D)]
    found = _walk(k, n, [list(r0), generic],
                  lambda rays, mask: any(rays[i] == r0 for i in range(len(rays)) if mask >> i & 1))
    for _, rays in found:
        if r0 not in rays:
            raise ArithmeticError("star walk left the star")
    return _assemble(k, n, found, firsts, r0)
