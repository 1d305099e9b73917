"""Factorization channels and their propagator sets.

A channel is an ordered partition of [n] into k cyclic intervals.  From
it we build the blade collections X(S), N_S and X-hat(S), the cones they
generate, the k = 4 propagator tables, the eight gamma rows and the
three-split vectors.
"""

from dataclasses import dataclass
from itertools import combinations

from .blades import (
    HeightVector, KinematicForm, eta_of_dosp, expand_in_planar_basis,
    height_of_dosp, height_of_subset, kn_space,
)
from .combinatorics import (
    DOSP, cyc, incompatibility_graph, is_cyclic_interval, is_noncrossing,
    parse_dosp,
)
from .exact import rank
from .polyhedra.cones import cone_from_generators, cone_from_inequalities, extreme_rays
from .polyhedra.subdivisions import is_coarsest, subdivision_from_height
from .tropical import GridVector, positive_root_vector, trop_plucker

__all__ = [
    "ChannelSpec", "x_collection", "n_collection", "hatx_collection",
    "PropagatorSet", "factorization_cone", "cone_generators",
    "octahedral_cone", "SpanFan", "positive_fan_in_span", "k4_channel_tables", "K4_DICTIONARY", "TYPE_I", "TYPE_II",
    "eight_gamma_rows", "split3_vector", "ray_from_noncrossing", "RayResult",
    "five_blade_relation", "reversed_channel", "AdjacencyError", "CrossingError",
]


class AdjacencyError(ValueError):
    """Two indices of a triple are cyclically adjacent."""


class CrossingError(ValueError):
    """A collection contains a crossing pair."""


@dataclass(frozen=True)
class ChannelSpec:
    """Ordered partition of [n] into cyclic-interval blocks, in cyclic order."""
    n: int
    blocks: tuple

    @classmethod
    def make(cls, blocks, n=None):
        blocks = [tuple(b) for b in blocks]
        if n is None:
            n = max(x for b in blocks for x in b)
        if sorted(x for b in blocks for x in b) != list(range(1, n + 1)):
            raise ValueError("blocks must partition [1..n]")
        for b in blocks:
            if not is_cyclic_interval(b, n):
                raise ValueError(f"block {b} is not a cyclic interval")
        # consecutive blocks must follow each other around the circle
        d = DOSP.make(blocks, [1] * len(blocks), n)
        for a, b in zip(d.blocks, d.blocks[1:] + d.blocks[:1]):
            if len(d.blocks) > 1 and cyc(a[-1] + 1, n) != b[0]:
                raise ValueError("blocks are not in cyclic order")
        return cls(n, d.blocks)

    @classmethod
    def parse(cls, text, n=None):
        """``"18|23|45|67"``, or comma-separated labels inside blocks."""
        blocks = []
        for part in text.replace(" ", "").split("|"):
            if "," in part:
                blocks.append(tuple(int(x) for x in part.split(",")))
            else:
                blocks.append(tuple(int(ch) for ch in part))
        return cls.make(blocks, n)

    @property
    def k(self):
        return len(self.blocks)

    @property
    def d(self):
        return sum(1 for b in self.blocks if len(b) >= 2)

    def dosp(self):
        return DOSP.make(self.blocks, [1] * self.k, self.n)

    def lump(self, parts):
        """DOSP whose blocks are unions of the given runs of block indices."""
        blocks = [tuple(x for i in run for x in self.blocks[i % self.k]) for run in parts]
        return DOSP.make(blocks, [len(run) for run in parts], self.n)

    def label(self):
        sep = "," if self.n >= 10 else ""
        return "|".join(sep.join(str(x) for x in b) for b in self.blocks)


def reversed_channel(S):
    """The DOSP with the blocks of S in reversed cyclic order, all r = 1."""
    blocks = [S.blocks[0]] + list(reversed(S.blocks[1:]))
    return DOSP.make(blocks, [1] * S.k, S.n)


def x_collection(S):
    """Runs (S_a)_1 ... (S_b)_1 followed by the lumped rest, runs of length 1..k-2."""
    k = S.k
    out = []
    for L in range(1, k - 1):
        for a in range(k):
            parts = [[a + t] for t in range(L)] + [[a + t for t in range(L, k)]]
            out.append(S.lump(parts))
    return out


def hatx_collection(S, type_delta_only=True):
    """All lumpings of cyclically adjacent blocks into at least two parts."""
    k = S.k
    out = []
    seen = set()
    for r in range(2, k + 1):
        for cuts in combinations(range(k), r):
            parts = []
            for i, c in enumerate(cuts):
                end = cuts[(i + 1) % r] if i + 1 < r else cuts[0] + k
                parts.append(list(range(c, end)))
            d = S.lump(parts)
            if d in seen:
                continue
            if type_delta_only and not d.is_type_delta():
                continue
            seen.add(d)
            out.append(d)
    return out


@dataclass(frozen=True)
class PropagatorSet:
    """Distinct nonzero kinematic forms with the partitions that produced them."""
    forms: tuple
    labels: tuple

    def __len__(self):
        return len(self.forms)

    def relation_rank(self):
        return rank([list(f.coeffs) for f in self.forms]) if self.forms else 0

    def relations(self):
        """Basis of linear relations sum c_i f_i = 0 among the forms."""
        from .exact import nullspace
        if not self.forms:
            return []
        cols = [list(f.coeffs) for f in self.forms]
        A = [[c[i] for c in cols] for i in range(len(cols[0]))]
        return nullspace(A, len(cols))

    def to_json(self):
        return [{"label": lab, "form": f.to_json()} for lab, f in zip(self.labels, self.forms)]


def n_collection(S):
    """Distinct nonzero blades of X(S), compared as canonical forms."""
    forms, labels = [], []
    seen = set()
    for d in x_collection(S):
        f = eta_of_dosp(d)
        if not any(f.coeffs) or f in seen:
            continue
        seen.add(f)
        forms.append(f)
        labels.append(d.label())
    return PropagatorSet(tuple(forms), tuple(labels))


def five_blade_relation(S):
    """Both sides of eta(I,J,K) + eta(I,K,J) = eta(I,JK) + eta(IJ,K) + eta(KI,J)."""
    if S.k != 3:
        raise ValueError("the five-blade relation needs three blocks")
    lhs = eta_of_dosp(S.dosp()) + eta_of_dosp(reversed_channel(S))
    rhs = (eta_of_dosp(S.lump([[0], [1, 2]])) + eta_of_dosp(S.lump([[0, 1], [2]]))
           + eta_of_dosp(S.lump([[2, 0], [1]])))
    return lhs, rhs


def _quotient_vectors(heights):
    return [list(h.canonical_coeffs()) for h in heights]


def cone_generators(S, kind="I"):
    """Heights generating the factorization cone of a channel.

    k = 3 with all blocks of size >= 2: both cyclic orders of S and the three
    lumped blades (a bipyramid).  k = 4 with all blocks >= 2: the eighteen
    type I (or II) forms.  Otherwise: h_S together with N_S.
    """
    if S.k == 3 and S.d == 3:
        ds = [S.dosp(), reversed_channel(S)] + x_collection(S)
        return [height_of_dosp(d) for d in ds]
    if S.k == 4 and S.d == 4:
        return list(_k4_heights(S, kind))
    hs = [height_of_dosp(S.dosp())]
    seen = {KinematicForm.from_height(hs[0])}
    for d in x_collection(S):
        h = height_of_dosp(d)
        f = KinematicForm.from_height(h)
        if any(f.coeffs) and f not in seen:
            seen.add(f)
            hs.append(h)
    return hs


def factorization_cone(S, kind="I"):
    """Cone in heights modulo lineality spanned by :func:`cone_generators`.

    ``kind="span"`` instead takes the positive part of the span of eta_S
    and X(S), cut out by the three-term relations; for k = 3, 4 this is
    the same cone.
    """
    if kind == "span":
        hs = [height_of_dosp(d) for d in [S.dosp()] + x_collection(S)]
        cone, undecided = octahedral_cone(hs)
        if undecided:
            raise ValueError("the span meets several cones of the positive Dressian")
        return cone
    return cone_from_generators(_quotient_vectors(cone_generators(S, kind)))


def octahedral_cone(heights):
    """Heights in the span of ``heights`` satisfying every three-term relation.

    Work in an independent basis of the span modulo lineality.  Each
    octahedral relation reads min(X, Y) = 0 with X, Y linear on the span;
    when one of them vanishes identically the relation becomes "the other
    >= 0".  Returns ``(cone, undecided)``: the cone of canonical height
    vectors cut out by those inequalities, and the number of relations
    where neither side vanishes (then the cone alone does not describe
    the positive part of the span).
    """
    k, n = heights[0].k, heights[0].n
    idx = kn_space(k, n).index
    basis = []
    for h in heights:
        v = list(h.canonical_coeffs())
        if rank(basis + [v]) > len(basis):
            basis.append(v)
    m = len(basis)
    ineqs = []
    undecided = 0
    seen = set()
    for L in combinations(range(1, n + 1), k - 2):
        rest = [x for x in range(1, n + 1) if x not in set(L)]
        for a, b, c, d in combinations(rest, 4):
            def col(*xs):
                return idx[tuple(sorted(L + xs))]
            ac, bd, ab, cd, ad, bc = (col(a, c), col(b, d), col(a, b), col(c, d),
                                      col(a, d), col(b, c))
            X = [v[ab] + v[cd] - v[ac] - v[bd] for v in basis]
            Y = [v[ad] + v[bc] - v[ac] - v[bd] for v in basis]
            zx, zy = not any(X), not any(Y)
            if zx and zy:
                continue
            if zx or zy:
                row = tuple(Y if zx else X)
                if row not in seen:
                    seen.add(row)
                    ineqs.append(list(row))
            else:
                undecided += 1
    inner = cone_from_inequalities(ineqs, m)
    rays = [[sum(t[i] * basis[i][j] for i in range(m)) for j in range(len(basis[0]))]
            for t in inner.ambient_rays()]
    return cone_from_generators(rays), undecided


def _span_basis(heights):
    basis = []
    for h in heights:
        v = list(h.canonical_coeffs())
        if rank(basis + [v]) > len(basis):
            basis.append(v)
    return basis


def _octahedral_pairs(basis, k, n):
    idx = kn_space(k, n).index
    for L in combinations(range(1, n + 1), k - 2):
        rest = [x for x in range(1, n + 1) if x not in set(L)]
        for a, b, c, d in combinations(rest, 4):
            def col(*xs):
                return idx[tuple(sorted(L + xs))]
            ac, bd, ab, cd, ad, bc = (col(a, c), col(b, d), col(a, b), col(c, d),
                                      col(a, d), col(b, c))
            X = [v[ab] + v[cd] - v[ac] - v[bd] for v in basis]
            Y = [v[ad] + v[bc] - v[ac] - v[bd] for v in basis]
            yield X, Y


@dataclass(frozen=True)
class SpanFan:
    """The positive tropical Grassmannian intersected with a linear span.

    ``rays`` are canonical height vectors; ``cones`` are maximal cones as
    sorted tuples of ray indices.
    """
    k: int
    n: int
    rays: tuple
    cones: tuple

    def cone(self, i):
        return cone_from_generators([self.rays[j] for j in self.cones[i]])


def positive_fan_in_span(heights):
    """All positive tropical Plücker vectors in the span of ``heights``.

    Each three-term relation min(X, Y) = 0 is equivalent to X, Y >= 0 and
    X Y = 0.  So the set is the union of those faces of the cone
    P = {X >= 0, Y >= 0 for every relation} that lie in {X = 0} or in
    {Y = 0} for every relation.  Its rays are the rays of P meeting every
    relation in this way, and its maximal cones are the maximal ray sets
    consistent with one side of every relation.
    """
    k, n = heights[0].k, heights[0].n
    basis = _span_basis(heights)
    m = len(basis)
    rels = list(_octahedral_pairs(basis, k, n))
    R = extreme_rays([r for X, Y in rels for r in (X, Y) if any(r)], m)

    def dot(a, b):
        return sum(x * y for x, y in zip(a, b))

    mixed = [(X, Y) for X, Y in rels if any(X) and any(Y)]
    valid = [i for i, r in enumerate(R)
             if all(dot(X, r) == 0 or dot(Y, r) == 0 for X, Y in mixed)]
    sets = [frozenset(valid)]
    for X, Y in mixed:
        zx = frozenset(i for i in valid if dot(X, R[i]) == 0)
        zy = frozenset(i for i in valid if dot(Y, R[i]) == 0)
        new = set()
        for s in sets:
            if s <= zx or s <= zy:
                new.add(s)
            else:
                new.add(s & zx)
                new.add(s & zy)
        sets = [s for s in new if s and not any(s < t for t in new)]
    pos = {i: j for j, i in enumerate(valid)}
    width = len(basis[0])
    rays = tuple(tuple(sum(R[i][a] * basis[a][c] for a in range(m)) for c in range(width))
                 for i in valid)
    cones = tuple(sorted(tuple(sorted(pos[i] for i in s)) for s in sets))
    return SpanFan(k, n, rays, cones)


# reference channel (18|23|45|67) at (4,8): eta_J for the subsets used in
# the two propagator tables, written as decorated ordered set partitions
K4_DICTIONARY = {
    (1, 2, 3, 5): "123678_3|45_1",
    (1, 3, 5, 7): "18_1|23_1|45_1|67_1",
    (1, 3, 5, 8): "1678_2|23_1|45_1",
    (1, 3, 6, 7): "18_1|23_1|4567_2",
    (1, 3, 7, 8): "145678_3|23_1",
    (1, 4, 5, 7): "18_1|2345_2|67_1",
    (1, 5, 6, 7): "18_1|234567_3",
    (2, 3, 5, 7): "1238_2|45_1|67_1",
    (2, 3, 6, 7): "1238_2|4567_2",
    (3, 4, 5, 7): "123458_3|67_1",
    (1, 4, 5, 8): "1678_2|2345_2",
}

_REF_BLOCKS = ((8, 1), (2, 3), (4, 5), (6, 7))


def _row(*terms):
    return {J: c for c, J in terms}


TYPE_I = [
    _row((1, (1, 2, 3, 5))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 2, 3, 5)), (1, (1, 3, 6, 7)), (1, (1, 4, 5, 7))),
    _row((1, (1, 3, 5, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 3, 6, 7)), (1, (1, 4, 5, 7))),
    _row((1, (1, 3, 5, 8))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 3, 6, 7)), (1, (2, 3, 5, 7))),
    _row((1, (1, 3, 6, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 4, 5, 7)), (1, (2, 3, 5, 7))),
    _row((1, (1, 3, 7, 8))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 6, 7)), (1, (1, 4, 5, 7)), (1, (2, 3, 5, 7))),
    _row((1, (1, 4, 5, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 7, 8)), (1, (1, 4, 5, 7)), (1, (2, 3, 5, 7))),
    _row((1, (1, 5, 6, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 5, 6, 7)), (1, (2, 3, 5, 7))),
    _row((1, (2, 3, 5, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 3, 6, 7)), (1, (3, 4, 5, 7))),
    _row((1, (3, 4, 5, 7))),
    _row((-2, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 3, 6, 7)), (1, (1, 4, 5, 7)),
         (1, (2, 3, 5, 7))),
]

TYPE_II = [
    _row((1, (1, 2, 3, 5))),
    _row((1, (1, 2, 3, 5)), (-1, (1, 3, 5, 7)), (1, (1, 3, 6, 7)), (1, (1, 4, 5, 7))),
    _row((1, (3, 4, 5, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 3, 6, 7)), (1, (1, 4, 5, 7))),
    _row((1, (1, 3, 5, 8))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 7, 8)), (1, (1, 4, 5, 7)), (1, (2, 3, 5, 7))),
    _row((1, (1, 3, 7, 8))),
    _row((1, (1, 2, 3, 5)), (-1, (1, 3, 5, 8)), (1, (1, 3, 7, 8)), (1, (1, 4, 5, 8))),
    _row((1, (1, 4, 5, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 5, 6, 7)), (1, (2, 3, 5, 7))),
    _row((1, (1, 4, 5, 8))),
    _row((-1, (1, 4, 5, 7)), (1, (1, 4, 5, 8)), (1, (1, 5, 6, 7)), (1, (3, 4, 5, 7))),
    _row((1, (1, 5, 6, 7))),
    _row((-2, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 3, 6, 7)), (1, (1, 4, 5, 7)),
         (1, (2, 3, 5, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 3, 6, 7)), (1, (3, 4, 5, 7))),
    _row((1, (1, 2, 3, 5)), (-1, (1, 3, 5, 7)), (1, (1, 3, 6, 7)), (1, (1, 4, 5, 8)),
         (1, (3, 4, 5, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 5, 8)), (1, (1, 4, 5, 7)), (1, (2, 3, 5, 7))),
    _row((-1, (1, 3, 5, 7)), (1, (1, 3, 7, 8)), (1, (1, 4, 5, 8)), (1, (1, 5, 6, 7)),
         (1, (2, 3, 5, 7))),
]


def _substitute(label, S):
    """Replace the reference blocks 81, 23, 45, 67 by the blocks of S."""
    ref = parse_dosp(label, 8)
    where = {}
    for i, b in enumerate(_REF_BLOCKS):
        for x in b:
            where[x] = i
    blocks, rs = [], []
    for blk, r in zip(ref.blocks, ref.r):
        ids = []
        for x in blk:
            if where[x] not in ids:
                ids.append(where[x])
        blocks.append(tuple(y for i in ids for y in S.blocks[i]))
        rs.append(r)
    return DOSP.make(blocks, rs, S.n)


def _k4_entries(S, table):
    out = []
    for row in table:
        h = HeightVector.zero(4, S.n)
        for J, c in row.items():
            h = h + c * height_of_dosp(_substitute(K4_DICTIONARY[J], S))
        out.append(h)
    return out


def _k4_heights(S, kind):
    if S.k != 4 or S.d != 4:
        raise ValueError("k = 4 tables need four blocks of size at least two")
    return _k4_entries(S, TYPE_I if kind == "I" else TYPE_II)


def k4_channel_tables(S):
    """Type I and type II propagator lists for a four-block channel."""
    out = []
    for table in (TYPE_I, TYPE_II):
        hs = _k4_entries(S, table)
        forms = tuple(KinematicForm.from_height(h) for h in hs)
        labels = tuple(" + ".join(f"{c}*eta{''.join(map(str, J))}" for J, c in row.items())
                       for row in table)
        out.append(PropagatorSet(forms, labels))
    return tuple(out)


def _check_totally_nonfrozen(J, n):
    for a, b in combinations(J, 2):
        if cyc(a + 1, n) == b or cyc(b + 1, n) == a:
            raise AdjacencyError(f"{J} has cyclically adjacent entries")


def eight_gamma_rows(j1, j2, j3, n):
    """The eight simultaneously minimized quadruples of positive roots."""
    _check_totally_nonfrozen((j1, j2, j3), n)

    def g(*xs):
        return tuple(sorted(cyc(x, n) for x in xs))

    base = g(j1, j2, j3)
    A = g(j1, j1 + 1, j3)
    Ap = g(j1, j2, j1 - 1)
    B = g(j1, j2, j2 + 1)
    Bp = g(j2 - 1, j2, j3)
    C = g(j2, j3, j3 + 1)
    Cp = g(j1, j3 - 1, j3)
    return [
        [base, A, B, C],
        [base, Ap, B, C],
        [base, Cp, A, B],
        [base, Cp, Ap, B],
        [base, Bp, A, C],
        [base, Bp, Ap, C],
        [base, Bp, Cp, A],
        [base, Bp, Cp, Ap],
    ]


def _cyc_range(a, b, n):
    """Labels a, a+1, ..., b cyclically; empty when b precedes a."""
    a, b = cyc(a, n), cyc(b, n)
    length = (b - a) % n + 1
    if length > n - 3:
        return []
    return [cyc(a + t, n) for t in range(length)]


def split3_vector(i, j, k, n, terms=False):
    """h_{ijk} plus the three fans of neighbours around it."""
    _check_totally_nonfrozen((i, j, k), n)
    T = [tuple(sorted((i, j, k)))]
    gap = lambda a, b: (b - a) % n
    if gap(k + 2, i - 1) < gap(k, i):
        T += [tuple(sorted((t, j, k))) for t in _cyc_range(k + 2, i - 1, n)]
    if gap(i + 2, j - 1) < gap(i, j):
        T += [tuple(sorted((i, t, k))) for t in _cyc_range(i + 2, j - 1, n)]
    if gap(j + 2, k - 1) < gap(j, k):
        T += [tuple(sorted((i, j, t))) for t in _cyc_range(j + 2, k - 1, n)]
    h = HeightVector.zero(3, n)
    for J in T:
        h = h + height_of_subset(J, n)
    return (h, T) if terms else h


@dataclass(frozen=True)
class RayResult:
    height: HeightVector
    expansion: dict
    is_ray: bool
    cells: int
    complete_graph: bool


def ray_from_noncrossing(collection, n):
    """Tropicalize the sum of positive roots and test for a ray."""
    coll = [tuple(sorted(J)) for J in collection]
    if len(coll) < 2:
        raise ValueError("need at least two subsets")
    for a, b in combinations(coll, 2):
        if not is_noncrossing(a, b, n):
            raise CrossingError(f"{a} and {b} cross")
    k = len(coll[0])
    y = GridVector.zero(k, n)
    for J in coll:
        y = y + positive_root_vector(J, n)
    pi = trop_plucker(y)
    exp = expand_in_planar_basis(pi).nonzero()
    sub = subdivision_from_height([(c, _dosp(J, n)) for J, c in sorted(exp.items())], k, n)
    G = incompatibility_graph(coll, n)
    complete = G.number_of_edges() == len(coll) * (len(coll) - 1) // 2
    return RayResult(pi, exp, is_coarsest(sub), len(sub.cells), complete)


def _dosp(J, n):
    from .combinatorics import dosp_of_subset
    return dosp_of_subset(J, n)
