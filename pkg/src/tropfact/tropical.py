"""Positive parametrization, tropical Plücker vectors and positive roots.

Grid vectors live on the (k-1) x (n-k) index grid; entry ``(i, b)`` sits
at flat position ``(i-1)(n-k) + (b-1)``.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, permutations

from .blades import HeightVector, expand_in_planar_basis, kn_space
from .combinatorics import is_frozen, subsets
from .exact import Q, format_q

__all__ = [
    "GridVector", "grid_index", "MonomialTable", "build_monomial_table",
    "matrix_entry", "trop_plucker", "three_term_violations",
    "is_positive_tropical_plucker", "positive_root_vector", "gamma_value",
    "proj_rt", "PositivityError",
]


class PositivityError(ArithmeticError):
    """A minor of the positive parametrization has an unexpected coefficient."""


def grid_index(i, b, k, n):
    return (i - 1) * (n - k) + (b - 1)


@dataclass(frozen=True)
class GridVector:
    k: int
    n: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != (self.k - 1) * (self.n - self.k):
            raise ValueError("grid vector has the wrong length")
        object.__setattr__(self, "entries", tuple(Q(x) for x in self.entries))

    @classmethod
    def zero(cls, k, n):
        return cls(k, n, (0,) * ((k - 1) * (n - k)))

    @classmethod
    def from_rows(cls, rows, n=None):
        k = len(rows) + 1
        if n is None:
            n = len(rows[0]) + k
        return cls(k, n, tuple(x for row in rows for x in row))

    def rows(self):
        w = self.n - self.k
        return [self.entries[i * w:(i + 1) * w] for i in range(self.k - 1)]

    def __getitem__(self, ib):
        i, b = ib
        return self.entries[grid_index(i, b, self.k, self.n)]

    def __add__(self, other):
        return GridVector(self.k, self.n, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        return GridVector(self.k, self.n, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __mul__(self, lam):
        lam = Q(lam)
        return GridVector(self.k, self.n, tuple(lam * a for a in self.entries))

    __rmul__ = __mul__

    def gauge_fixed(self):
        """Representative with first column zero (row-constant shifts removed)."""
        out = []
        for row in self.rows():
            out.extend(x - row[0] for x in row)
        return GridVector(self.k, self.n, tuple(out))

    def to_json(self):
        return {"k": self.k, "n": self.n,
                "y": [[format_q(x) for x in row] for row in self.rows()]}

    @classmethod
    def from_json(cls, data):
        return cls.from_rows([[Fraction(x) for x in row] for row in data["y"]], data["n"])


def _poly_mul(a, b):
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = tuple(sorted(ma + mb))
            out[m] = out.get(m, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def matrix_entry(i, j, k, n):
    """m_{i,j} as ``{monomial: coefficient}``; a monomial is a sorted tuple
    of flat grid indices with repetition."""
    out = {}
    for bs in combinations_with_replacement(range(1, j + 1), k - i):
        m = tuple(sorted(grid_index(i + t, b, k, n) for t, b in enumerate(bs)))
        out[m] = out.get(m, 0) + 1
    return out


@dataclass(frozen=True)
class MonomialTable:
    """Monomials of every Plücker coordinate of the positive parametrization.

    ``monomials[J]`` lists sorted tuples of flat grid indices (with
    repetition); ``sign[J]`` is the common sign of the coefficients.
    """
    k: int
    n: int
    monomials: dict
    sign: dict

    def exponent(self, mono):
        v = [0] * ((self.k - 1) * (self.n - self.k))
        for i in mono:
            v[i] += 1
        return tuple(v)

    def exponents(self, J):
        return [self.exponent(m) for m in self.monomials[tuple(J)]]


def _perm_sign(p):
    s = 1
    for a in range(len(p)):
        for b in range(a + 1, len(p)):
            if p[a] > p[b]:
                s = -s
    return s


@lru_cache(maxsize=None)
def build_monomial_table(k, n):
    """Expand every k x k minor of the parametrizing matrix exactly.

    The matrix has the identity in its first k columns; column k+j is
    ``(m_{1,j}, ..., m_{k-1,j}, 1)``.  Every minor must come out with all
    coefficients of absolute value one and a single sign.
    """
    if not 2 <= k <= n - 1:
        raise ValueError(f"need 2 <= k <= n-1, got ({k},{n})")
    one = {(): 1}
    cols = []
    for c in range(1, k + 1):
        cols.append([one if r == c else {} for r in range(1, k + 1)])
    for j in range(1, n - k + 1):
        cols.append([matrix_entry(r, j, k, n) for r in range(1, k)] + [one])
    perms = [(p, _perm_sign(p)) for p in permutations(range(k))]
    monomials, sign = {}, {}
    for J in subsets(k, n):
        tot = {}
        for p, sg in perms:
            term = {(): sg}
            for r in range(k):
                e = cols[J[p[r]] - 1][r]
                if not e:
                    term = None
                    break
                term = _poly_mul(term, e)
            if term:
                for m, c in term.items():
                    tot[m] = tot.get(m, 0) + c
        tot = {m: c for m, c in tot.items() if c}
        signs = {c for c in tot.values()}
        if not tot or not signs <= {1, -1} or len(signs) != 1:
            raise PositivityError(f"minor {J} has coefficients {sorted(signs)}")
        monomials[J] = tuple(sorted(tot))
        sign[J] = signs.pop()
    return MonomialTable(k, n, monomials, sign)


def trop_plucker(y):
    """pi_J = min over monomials m of p_J of <m, y>."""
    T = build_monomial_table(y.k, y.n)
    e = y.entries
    vals = []
    for J in subsets(y.k, y.n):
        vals.append(min(sum((e[i] for i in m), Fraction(0)) for m in T.monomials[J]))
    return HeightVector(y.k, y.n, tuple(vals))


def three_term_violations(pi, first_only=False):
    """All (L, a, b, c, d) whose three-term tropical relation fails."""
    k, n = pi.k, pi.n
    idx = kn_space(k, n).index
    v = pi.coeffs
    bad = []
    for L in combinations(range(1, n + 1), k - 2):
        Ls = set(L)
        rest = [x for x in range(1, n + 1) if x not in Ls]

        def P(*xs):
            return v[idx[tuple(sorted(L + xs))]]

        for a, b, c, d in combinations(rest, 4):
            lhs = P(a, c) + P(b, d)
            if lhs != min(P(a, b) + P(c, d), P(a, d) + P(b, c)):
                bad.append((L, a, b, c, d))
                if first_only:
                    return bad
    return bad


def is_positive_tropical_plucker(pi):
    if pi.k < 2 or pi.n - pi.k < 2:
        return True
    return not three_term_violations(pi, first_only=True)


def positive_root_vector(J, n):
    """0/1 grid vector with row i supported on [j_i-(i-1), j_{i+1}-i-1]."""
    J = tuple(sorted(J))
    k = len(J)
    if is_frozen(J, n):
        raise ValueError(f"{J} is frozen; positive roots need a nonfrozen subset")
    v = [0] * ((k - 1) * (n - k))
    for i in range(1, k):
        for b in range(J[i - 1] - (i - 1), J[i] - i):
            v[grid_index(i, b, k, n)] = 1
    return GridVector(k, n, tuple(v))


def gamma_value(J, alpha):
    v = positive_root_vector(J, alpha.n)
    return sum((a for a, x in zip(alpha.entries, v.entries) if x), Fraction(0))


def proj_rt(pi):
    """Linear map sending h_J to v_J (nonfrozen J) and lineality to zero."""
    exp = expand_in_planar_basis(pi)
    out = [Fraction(0)] * ((pi.k - 1) * (pi.n - pi.k))
    for J, c in exp.coeffs.items():
        if c:
            for i, x in enumerate(positive_root_vector(J, pi.n).entries):
                if x:
                    out[i] += c
    return GridVector(pi.k, pi.n, tuple(out))
