"""Exact rational arithmetic and linear algebra over Q.

Matrices are plain lists of rows; entries are anything :class:`Fraction`
accepts.  Pivoting always takes the smallest eligible row/column index, so
every result here is reproducible bit-for-bit.
"""

from fractions import Fraction
from math import gcd

__all__ = [
    "Q", "parse_q", "format_q", "as_matrix", "rref", "rank", "solve",
    "solve_many", "nullspace", "inverse", "det", "primitive",
    "DimensionError",
]


class DimensionError(ValueError):
    """Raised when matrix and vector shapes do not agree."""


def Q(x):
    """Coerce ``x`` (int, Fraction, or ``"p/q"`` string) to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted")
    return Fraction(x)


def parse_q(text):
    return Fraction(str(text).strip())


def format_q(x):
    """Serialize a rational as ``"p/q"``, or ``"p"`` when q == 1."""
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def as_matrix(rows):
    return [[Q(v) for v in row] for row in rows]


def _width(A, ncols):
    if A:
        w = len(A[0])
        if any(len(row) != w for row in A):
            raise DimensionError("ragged matrix")
        return w
    if ncols is None:
        raise DimensionError("column count of an empty matrix is unknown")
    return ncols


def rref(A, ncols=None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows.
    """
    m = _width(A, ncols)
    R = as_matrix(A)
    pivots = []
    r = 0
    for c in range(m):
        p = None
        for i in range(r, len(R)):
            if R[i][c]:
                p = i
                break
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        row = R[r]
        inv = 1 / row[c]
        if inv != 1:
            row = [v * inv for v in row]
            R[r] = row
        nz = [j for j in range(c, m) if row[j]]
        for i in range(len(R)):
            if i != r:
                f = R[i][c]
                if f:
                    Ri = R[i]
                    for j in nz:
                        Ri[j] -= f * row[j]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R[:r], pivots


def rank(A, ncols=None):
    if not A:
        return 0
    return len(rref(A, ncols)[1])


def solve_many(A, B):
    """Solve ``A X = B`` for several right-hand sides at once.

    ``B`` is a list of vectors.  Returns one solution per vector, or ``None``
    where that system is inconsistent.  Free variables are set to zero.
    """
    nrows = len(A)
    ncols = _width(A, None)
    for b in B:
        if len(b) != nrows:
            raise DimensionError(f"rhs of length {len(b)} for {nrows} rows")
    aug = [list(A[i]) + [b[i] for b in B] for i in range(nrows)]
    R, pivots = rref(aug, ncols + len(B))
    # rows with a pivot past the coefficient block span the left kernel of A
    # applied to B; a nonzero entry there certifies inconsistency
    kernel_rows = [row for row, p in zip(R, pivots) if p >= ncols]
    out = []
    for t in range(len(B)):
        col = ncols + t
        if any(row[col] for row in kernel_rows):
            out.append(None)
            continue
        x = [Fraction(0)] * ncols
        for row, p in zip(R, pivots):
            if p < ncols:
                x[p] = row[col]
        out.append(x)
    return out


def solve(A, b):
    """Return ``x`` with ``A x = b`` exactly, or ``None`` if inconsistent."""
    if A and len(A[0]) == 0:
        return [] if all(Q(v) == 0 for v in b) else None
    if not A:
        if b:
            raise DimensionError("empty matrix with nonempty rhs")
        raise DimensionError("column count of an empty matrix is unknown")
    return solve_many(A, [b])[0]


def nullspace(A, ncols=None):
    """Basis of ``{x : A x = 0}``; one vector per free column."""
    m = _width(A, ncols)
    if not A:
        return [[Fraction(int(i == j)) for i in range(m)] for j in range(m)]
    R, pivots = rref(A, m)
    pivset = set(pivots)
    basis = []
    for f in range(m):
        if f in pivset:
            continue
        x = [Fraction(0)] * m
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def inverse(A):
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionError("inverse of a non-square matrix")
    aug = [list(A[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R[:n]]


def det(A):
    """Determinant by fraction Gaussian elimination."""
    n = len(A)
    M = as_matrix(A)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        piv = M[c][c]
        d *= piv
        for i in range(c + 1, n):
            f = M[i][c] / piv
            if f:
                Mi, Mc = M[i], M[c]
                for j in range(c, n):
                    Mi[j] -= f * Mc[j]
    return d


def primitive(v):
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = [Q(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)
