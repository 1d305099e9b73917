"""Height vectors, kinematic blades and the planar basis.

Everything lives on the space of vectors indexed by the k-subsets of
[n].  The lineality space (spanned by ``sum_{J ∋ j} e^J``) is the same
subspace in both roles: heights are compared modulo it, and kinematic
forms are compared modulo it because momentum conservation pairs it to
zero.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinatorics import (
    cyc, dosp_of_subset, enumerate_nonfrozen, format_subset,
    frozen_subsets, subsets,
)
from .exact import Q, format_q, inverse, rank

__all__ = [
    "KNSpace", "kn_space", "HeightVector", "KinematicForm",
    "L_form", "M_form", "rho_subset", "rho_dosp",
    "height_of_subset", "height_of_dosp", "eta_of_subset", "eta_of_dosp",
    "expand_in_planar_basis", "PlanarExpansion", "pair",
    "is_conserving", "lineality_generator", "SingularBasisError",
]

ZERO = Fraction(0)


class SingularBasisError(ArithmeticError):
    """The planar-basis heights fail to span modulo lineality."""


class KNSpace:
    """Index maps and cached linear algebra for one (k, n).

    Built once per (k, n) and then only read.
    """

    def __init__(self, k, n):
        if not 1 <= k <= n - 1:
            raise ValueError(f"need 1 <= k <= n-1, got ({k},{n})")
        self.k, self.n = k, n
        self.subsets = subsets(k, n)
        self.N = len(self.subsets)
        self.index = {J: i for i, J in enumerate(self.subsets)}
        self.frozen = frozen_subsets(k, n)
        self.nonfrozen = enumerate_nonfrozen(k, n)
        self.lineality = [
            tuple(Fraction(int(j in J)) for J in self.subsets)
            for j in range(1, n + 1)
        ]
        self.pivots = self._choose_pivots()
        G = [[self.lineality[j][p] for j in range(n)] for p in self.pivots]
        self._pivot_inv = inverse(G)
        self._free = [i for i in range(self.N) if i not in set(self.pivots)]
        self._basis_inv = None

    def _choose_pivots(self):
        # frozen coordinates first; when they are dependent on lineality
        # (gcd(k,n) > 1) fill up lexicographically
        chosen, rows = [], []
        cand = [self.index[F] for F in self.frozen]
        cand += [i for i in range(self.N) if i not in set(cand)]
        for p in cand:
            trial = rows + [[self.lineality[j][p] for j in range(self.n)]]
            if rank(trial) == len(trial):
                chosen.append(p)
                rows = trial
                if len(chosen) == self.n:
                    break
        return tuple(chosen)

    def canonical(self, coeffs):
        """Representative modulo lineality vanishing on the pivot coordinates."""
        f = [Q(c) for c in coeffs]
        rhs = [f[p] for p in self.pivots]
        if not any(rhs):
            return tuple(f)
        lam = [sum(a * b for a, b in zip(row, rhs)) for row in self._pivot_inv]
        for j, l in enumerate(lam):
            if l:
                gen = self.lineality[j]
                for i in range(self.N):
                    if gen[i]:
                        f[i] -= l
        return tuple(f)

    def basis_inverse(self):
        """Inverse of the planar-basis matrix on the free coordinates."""
        if self._basis_inv is None:
            cols = [self.canonical(_height_subset_raw(J, self.n))
                    for J in self.nonfrozen]
            H = [[c[i] for c in cols] for i in self._free]
            try:
                self._basis_inv = inverse(H)
            except ZeroDivisionError:
                raise SingularBasisError(
                    f"planar basis is singular at ({self.k},{self.n})") from None
        return self._basis_inv

    def conservation_residual(self, s):
        return [sum(g[i] * s[i] for i in range(self.N) if g[i])
                for g in self.lineality]


@lru_cache(maxsize=None)
def kn_space(k, n):
    return KNSpace(k, n)


def lineality_generator(j, k, n):
    return HeightVector(k, n, kn_space(k, n).lineality[j - 1])


class _Vec:
    """Shared behaviour of subset-indexed exact vectors."""

    __slots__ = ()

    @classmethod
    def from_dict(cls, k, n, data):
        sp = kn_space(k, n)
        c = [ZERO] * sp.N
        for J, v in data.items():
            c[sp.index[tuple(sorted(J))]] += Q(v)
        return cls(k, n, tuple(c))

    @classmethod
    def zero(cls, k, n):
        return cls(k, n, (ZERO,) * kn_space(k, n).N)

    @property
    def space(self):
        return kn_space(self.k, self.n)

    def _check(self, other):
        if not isinstance(other, _Vec) or (self.k, self.n) != (other.k, other.n):
            raise TypeError("operands live in different spaces")

    def __add__(self, other):
        self._check(other)
        return type(self)(self.k, self.n,
                          tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.k, self.n,
                          tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return type(self)(self.k, self.n, tuple(-a for a in self.coeffs))

    def __mul__(self, lam):
        lam = Q(lam)
        return type(self)(self.k, self.n, tuple(lam * a for a in self.coeffs))

    __rmul__ = __mul__

    def __getitem__(self, J):
        return self.coeffs[self.space.index[tuple(sorted(J))]]

    def items(self):
        """Nonzero (J, coefficient) pairs in lexicographic order."""
        return [(J, c) for J, c in zip(self.space.subsets, self.coeffs) if c]

    def canonical_coeffs(self):
        return self.space.canonical(self.coeffs)

    def is_zero_mod_lineality(self):
        return not any(self.canonical_coeffs())

    def equiv(self, other):
        self._check(other)
        return (self - other).is_zero_mod_lineality()

    def format(self, var):
        terms = [(J, c) for J, c in zip(self.space.subsets, self.coeffs) if c]
        return format_linear([(f"{var}{format_subset(J, self.n)}", c) for J, c in terms])

    def to_json(self, key):
        return {"k": self.k, "n": self.n,
                "coeffs": [{key: list(J), "c": format_q(c)} for J, c in self.items()]}


def format_linear(terms):
    """Render ``[(name, coefficient), ...]`` as ``a x - b/c y``."""
    if not terms:
        return "0"
    out = []
    for i, (name, c) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        body = name if a == 1 else f"{format_q(a)} {name}"
        if i == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


@dataclass(frozen=True)
class HeightVector(_Vec):
    """Exact height vector over all k-subsets, stored as given.

    ``==`` is literal equality; use :meth:`equiv` for equality modulo
    lineality.
    """
    k: int
    n: int
    coeffs: tuple

    def to_json(self):
        return _Vec.to_json(self, "J")

    @classmethod
    def from_json(cls, data):
        k, n = data["k"], data["n"]
        return cls.from_dict(k, n, {tuple(t["J"]): Fraction(t["c"]) for t in data["coeffs"]})

    def __str__(self):
        return self.format("h")


@dataclass(frozen=True)
class KinematicForm(_Vec):
    """Linear form on kinematic space, kept in canonical representative.

    Two forms agreeing on every momentum-conserving point compare equal.
    """
    k: int
    n: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", kn_space(self.k, self.n).canonical(self.coeffs))

    @classmethod
    def from_height(cls, h):
        return cls(h.k, h.n, h.coeffs)

    def __call__(self, s):
        return pair(self, s)

    def to_json(self):
        return _Vec.to_json(self, "s")

    @classmethod
    def from_json(cls, data):
        k, n = data["k"], data["n"]
        return cls.from_dict(k, n, {tuple(t["s"]): Fraction(t["c"]) for t in data["coeffs"]})

    def __str__(self):
        return self.format("s")

    def __hash__(self):
        return hash((self.k, self.n, self.coeffs))


# piecewise-linear functions

def L_form(j, x, n):
    """L_j(x) = x_{j+1} + 2 x_{j+2} + ... + (n-1) x_{j-1}."""
    return sum(t * Q(x[cyc(j + t, n) - 1]) for t in range(1, n))


def rho_subset(J, x, n):
    xm = [Q(v) for v in x]
    for j in J:
        xm[j - 1] -= 1
    return min(L_form(j, xm, n) for j in range(1, n + 1))


def M_form(d, j, x):
    """M_j(x) = sum_{t=1}^{d-1} t (x_{S_{j+t}} - r_{j+t}), block indices cyclic mod d.

    ``j`` is 1-based; ``x_S`` is the coordinate sum over block S.
    """
    m = d.d
    tot = ZERO
    for t in range(1, m):
        b = (j - 1 + t) % m
        tot += t * (sum(Q(x[i - 1]) for i in d.blocks[b]) - d.r[b])
    return tot


def rho_dosp(d, x):
    if d.d == 1:
        return ZERO
    return min(M_form(d, j, x) for j in range(1, d.d + 1))


def _indicator(I, n):
    v = [0] * n
    for i in I:
        v[i - 1] = 1
    return v


def _rho_subset_int(J, I, n):
    # integer fast path: x = e_I - e_J
    x = [0] * n
    for i in I:
        x[i - 1] += 1
    for j in J:
        x[j - 1] -= 1
    # L_{j+1}(x) = L_j(x) + n x_j since sum(x) = 0
    cur = sum(t * x[t % n] for t in range(1, n))
    best = cur
    for j in range(1, n):
        cur += n * x[j - 1]
        best = min(best, cur)
    return best


@lru_cache(maxsize=None)
def _height_subset_raw(J, n):
    k = len(J)
    return tuple(-Fraction(_rho_subset_int(J, I, n), n) for I in subsets(k, n))


def height_of_subset(J, n):
    J = tuple(sorted(J))
    return HeightVector(len(J), n, _height_subset_raw(J, n))


def height_of_dosp(d):
    if any(r > len(b) for b, r in zip(d.blocks, d.r)):
        raise ValueError(f"{d.label()}: a decoration exceeds its block size")
    k, n, m = d.k, d.n, d.d
    return HeightVector(k, n, tuple(-Fraction(rho_dosp(d, _indicator(I, n)), m)
                                    for I in subsets(k, n)))


def eta_of_dosp(d):
    return KinematicForm.from_height(height_of_dosp(d))


def eta_of_subset(J, n, via_dosp=False):
    """The planar-basis form; ``via_dosp`` routes through the blade of dosp(J)."""
    if via_dosp:
        return eta_of_dosp(dosp_of_subset(J, n))
    return KinematicForm.from_height(height_of_subset(J, n))


@dataclass(frozen=True)
class PlanarExpansion:
    """``v = sum_J coeffs[J] h_J + lineality``."""
    coeffs: dict
    lineality: HeightVector

    @property
    def n(self):
        return self.lineality.n

    def nonzero(self):
        return {J: c for J, c in self.coeffs.items() if c}

    def format(self, var="h"):
        return format_linear([(f"{var}{format_subset(J, self.n)}", c)
                              for J, c in sorted(self.nonzero().items())])


def _cube_coefficients(can, sp):
    """Alternating sums over the unit cube at J, shifted cyclically.

    Valid when the representative vanishes on every frozen coordinate.
    """
    k, n = sp.k, sp.n
    out = {}
    for J in sp.nonfrozen:
        tot = ZERO
        for mask in range(1 << k):
            I = [cyc(j + 1, n) if mask >> t & 1 else j for t, j in enumerate(J)]
            if len(set(I)) < k:
                continue
            x = can[sp.index[tuple(sorted(I))]]
            if x:
                tot += -x if bin(mask).count("1") % 2 == 0 else x
        out[J] = tot
    return out


def _residual(v, coeffs):
    rest = list(v.coeffs)
    for J, cj in coeffs.items():
        if cj:
            h = _height_subset_raw(J, v.n)
            for i, x in enumerate(h):
                if x:
                    rest[i] -= cj * x
    return HeightVector(v.k, v.n, tuple(rest))


def expand_in_planar_basis(v):
    """Unique expansion of a height (or form) in the planar basis.

    When every pivot is a frozen coordinate the coefficients come from
    local cube sums and are certified by checking that the remainder lies
    in the lineality space; otherwise a dense inverse is used.
    """
    sp = kn_space(v.k, v.n)
    can = sp.canonical(v.coeffs)
    frozen_idx = {sp.index[F] for F in sp.frozen}
    if set(sp.pivots) == frozen_idx:
        coeffs = _cube_coefficients(can, sp)
        rest = _residual(v, coeffs)
        if rest.is_zero_mod_lineality():
            return PlanarExpansion(coeffs, rest)
    inv = sp.basis_inverse()
    rhs = [can[i] for i in sp._free]
    nz = [(j, x) for j, x in enumerate(rhs) if x]
    c = [sum(row[j] * x for j, x in nz) for row in inv]
    coeffs = dict(zip(sp.nonfrozen, c))
    return PlanarExpansion(coeffs, _residual(v, coeffs))


def is_conserving(s, k, n):
    return not any(kn_space(k, n).conservation_residual([Q(x) for x in s]))


def pair(v, s):
    """Pair a height/form with a kinematic point or with another vector.

    A kinematic point is a sequence (or ``{J: value}`` mapping) over all
    k-subsets and must satisfy momentum conservation exactly.
    """
    sp = v.space
    if isinstance(s, _Vec):
        v._check(s)
        vals = s.coeffs
    else:
        if isinstance(s, dict):
            vals = [ZERO] * sp.N
            for J, x in s.items():
                vals[sp.index[tuple(sorted(J))]] = Q(x)
        else:
            vals = [Q(x) for x in s]
        if len(vals) != sp.N:
            raise ValueError(f"kinematic point needs {sp.N} entries")
        if not is_conserving(vals, v.k, v.n):
            raise ValueError("kinematic point violates momentum conservation")
    return sum((a * b for a, b in zip(v.coeffs, vals) if a and b), ZERO)
