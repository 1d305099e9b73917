"""CEGM amplitudes from the linearity fan, and their iterated residues.

On a simplicial cone with primitive rays r_1..r_D the integral of
exp(-F) equals |det(r)| / prod F(r_i), and F(r_i; s) is the pairing of
trop(r_i) with the kinematic point s.  Summing over a triangulation of
the fan gives the amplitude as an exact rational function.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod

from ..blades import (
    HeightVector, KinematicForm, expand_in_planar_basis, height_of_dosp, kn_space, pair,
)
from ..combinatorics import DOSP, format_subset
from ..exact import Q, inverse, nullspace, rank
from .fan import FAN_GUARD, build_fan, build_star
from .termsum import PoleError, TermSum

__all__ = [
    "conserving_basis", "random_conserving_point", "dual_point", "evaluate_amplitude",
    "m2_tree_oracle", "planar_trees", "KinematicSlice", "amplitude", "iterated_residue",
    "ResidueResult", "is_zero", "fan_for", "propagator_height",
]


@lru_cache(maxsize=None)
def conserving_basis(k, n):
    """Basis of the kinematic space {s : sum_{J containing j} s_J = 0}."""
    sp = kn_space(k, n)
    A = [[1 if j in J else 0 for J in sp.subsets] for j in range(1, n + 1)]
    return tuple(tuple(v) for v in nullspace(A, sp.N))


def random_conserving_point(k, n, rng, bound=10 ** 6):
    """Exact conserving kinematic point as a tuple over k-subsets."""
    B = conserving_basis(k, n)
    v = [Fraction(0)] * kn_space(k, n).N
    for b in B:
        c = rng.randint(-bound, bound)
        for i, x in enumerate(b):
            if x:
                v[i] += c * x
    return tuple(v)


def dual_point(s, k, n):
    """s^c with s^c_{J^c} = s_J, a point of the (n-k, n) kinematic space."""
    sp, dp = kn_space(k, n), kn_space(n - k, n)
    out = [Fraction(0)] * dp.N
    full = set(range(1, n + 1))
    for J, x in zip(sp.subsets, s):
        out[dp.index[tuple(sorted(full - set(J)))]] = Q(x)
    return tuple(out)


def fan_for(k, n, guard=FAN_GUARD):
    return _cached_fan(k, n, guard)


@lru_cache(maxsize=None)
def _cached_fan(k, n, guard):
    return build_fan(k, n, guard)


def evaluate_amplitude(fan, s):
    """m^{(k)}_n at a conserving point, summed over the fan's simplices."""
    if fan.star_of is not None:
        raise ValueError("a star fan does not carry the whole amplitude")
    vals = [pair(h, s) for h in fan.heights]
    tot = Fraction(0)
    for S in fan.simplices:
        den = prod(vals[i] for i in S.rays)
        if not den:
            raise PoleError("kinematic point lies on a pole")
        tot += Fraction(S.volume) / den
    return tot


def planar_trees(i, j):
    """Triangulations of the polygon i..j as lists of chords (a, b)."""
    if j - i < 2:
        return [[]]
    out = []
    for m in range(i + 1, j):
        for L in planar_trees(i, m):
            for R in planar_trees(m, j):
                chords = list(L) + list(R)
                if m - i >= 2:
                    chords.append((i, m))
                if j - m >= 2:
                    chords.append((m, j))
                out.append(chords)
    return out


def m2_tree_oracle(n, s):
    """Sum over planar cubic trees of prod 1/X_{ab}, X_{ab} = sum_{a<=p<q<b} s_pq."""
    if n < 4:
        raise ValueError("need n >= 4")
    sp = kn_space(2, n)
    if isinstance(s, dict):
        vals = [Fraction(0)] * sp.N
        for J, x in s.items():
            vals[sp.index[tuple(sorted(J))]] = Q(x)
    else:
        vals = [Q(x) for x in s]
    if any(sp.conservation_residual(vals)):
        raise ValueError("kinematic point does not conserve momentum")

    def X(a, b):
        return sum((vals[sp.index[(p, q)]] for p in range(a, b) for q in range(p + 1, b)),
                   Fraction(0))

    tot = Fraction(0)
    for T in planar_trees(1, n):
        den = prod(X(a, b) for a, b in T)
        if not den:
            raise PoleError("kinematic point lies on a pole")
        tot += 1 / den
    return tot


def propagator_height(p, k=None, n=None):
    """Height vector for a propagator given as DOSP, subset, height or form."""
    if isinstance(p, DOSP):
        return height_of_dosp(p)
    if isinstance(p, HeightVector):
        return p
    if isinstance(p, KinematicForm):
        return HeightVector(p.k, p.n, p.coeffs)
    from ..blades import height_of_subset
    return height_of_subset(tuple(p), n)


@dataclass
class KinematicSlice:
    """Coordinates adapted to a list of propagators.

    Variable i < m is the propagator eta_i itself; the others are the
    planar coordinates eta_J completing a basis.  ``fixed`` maps variable
    positions to rationals substituted at build time.
    """
    k: int
    n: int
    propagators: list
    basis_subsets: list
    names: tuple
    change: list = field(repr=False)
    fixed: dict = field(default_factory=dict)
    seed: int = None

    @classmethod
    def build(cls, k, n, propagators, fixed_seed=None, bound=1000):
        sp = kn_space(k, n)
        nf = list(sp.nonfrozen)
        pos = {J: i for i, J in enumerate(nf)}
        rows, names = [], []
        for t, p in enumerate(propagators):
            h = propagator_height(p, k, n)
            c = expand_in_planar_basis(h).nonzero()
            v = [Fraction(0)] * len(nf)
            for J, x in c.items():
                v[pos[J]] = x
            if rank(rows + [v]) == len(rows):
                raise ValueError("propagators are linearly dependent")
            rows.append(v)
            names.append(f"e{t + 1}")
        extra = []
        for J in nf:
            e = [Fraction(int(pos[J] == i)) for i in range(len(nf))]
            if rank(rows + [e]) > len(rows):
                rows.append(e)
                extra.append(J)
                names.append("eta" + format_subset(J, n).replace(",", "_"))
        inv = inverse(rows)
        fixed = {}
        if fixed_seed is not None:
            rng = random.Random(fixed_seed)
            for i in range(len(propagators), len(nf)):
                fixed[i] = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        return cls(k, n, list(propagators), extra, tuple(names), inv, fixed, fixed_seed)

    @property
    def nvars(self):
        return len(self.names)

    def form(self, planar):
        """Affine form in the slice variables for a planar-basis expansion."""
        sp = kn_space(self.k, self.n)
        pos = {J: i for i, J in enumerate(sp.nonfrozen)}
        # c = a . rows  =>  a = c . inv
        a = [Fraction(0)] * self.nvars
        for J, x in planar.items():
            row = self.change[pos[J]]
            for i, y in enumerate(row):
                if y:
                    a[i] += x * y
        const = Fraction(0)
        for i, val in self.fixed.items():
            if a[i]:
                const += a[i] * val
                a[i] = Fraction(0)
        return tuple(a) + (const,)


def amplitude(fan, slice_):
    """Sum of |det| / prod(forms) over the fan's simplices, as a TermSum."""
    out = TermSum.zero(slice_.nvars, slice_.names)
    forms = {}
    for S in fan.simplices:
        fs = []
        for i in S.rays:
            if i not in forms:
                forms[i] = slice_.form(fan.planar(i))
                if not any(forms[i]):
                    raise PoleError("a ray pairs to zero on the slice")
            fs.append(forms[i])
        out.add_term(S.volume, fs)
    return out


def is_zero(ts, samples=4, seed=0, bound=10 ** 9):
    """Exact zero test: syntactic, then exact evaluation at random points.

    A nonzero rational function of this size vanishes at a random point
    of a range of 10^9 with negligible probability.
    """
    if ts.is_syntactically_zero():
        return True
    rng = random.Random(seed)
    done = 0
    tries = 0
    while done < samples:
        tries += 1
        if tries > 50 * samples:
            raise PoleError("could not find a regular sample point")
        pt = [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in range(ts.nvars)]
        try:
            v = ts.evaluate(pt)
        except PoleError:
            continue
        if v:
            return False
        done += 1
    return True


@dataclass
class ResidueResult:
    k: int
    n: int
    order: list
    result: TermSum
    zero: bool
    slice: KinematicSlice
    cones: int
    star: bool


def iterated_residue(k, n, propagators, star=None, guard=FAN_GUARD, fixed_seed=None, fan=None):
    """Res_{last}( ... Res_{second}( Res_{first}(m^{(k)}_n) ) ).

    Propagators are taken in the given order.  Only the cones around the
    first propagator's ray can contribute, so by default (and always
    when the fan is above ``guard``) only that star is built.
    """
    D = (k - 1) * (n - k - 1)
    hs = [propagator_height(p, k, n) for p in propagators]
    if fan is None:
        if star is None:
            star = True
        if star or D > guard:
            fan = build_star(k, n, hs)
        else:
            fan = fan_for(k, n, guard)
    sl = KinematicSlice.build(k, n, hs, fixed_seed)
    ts = amplitude(fan, sl)
    for i in range(len(hs)):
        ts = ts.residue_step(i)
    return ResidueResult(k, n, list(propagators), ts, is_zero(ts), sl, len(fan.cones),
                         fan.star_of is not None)
