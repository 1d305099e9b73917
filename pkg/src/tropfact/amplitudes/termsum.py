"""Sums of c / prod(l_i^p_i) with l_i affine forms in a fixed set of variables.

An affine form is a tuple ``(a_1, ..., a_V, const)`` of Fractions.  Forms
are normalized so their first nonzero entry is 1, the scale being pushed
into the coefficient, which makes equal denominators compare equal.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from ..exact import Q, format_q

__all__ = ["normalize_form", "TermSum", "PoleError"]

ZERO = Fraction(0)
ONE = Fraction(1)


class PoleError(ZeroDivisionError):
    """A denominator vanishes at the evaluation point."""


def normalize_form(f):
    """Return ``(scale, g)`` with ``f = scale * g`` and g's leading entry 1."""
    f = tuple(Q(x) for x in f)
    lead = next((x for x in f if x), None)
    if lead is None:
        raise ZeroDivisionError("zero denominator form")
    return lead, tuple(x / lead for x in f)


def _den_key(dens):
    return tuple(sorted(dens.items()))


@dataclass
class TermSum:
    """``sum coeff / prod form^power``; ``terms`` maps a sorted tuple of
    (form, power) pairs to its coefficient."""
    nvars: int
    terms: dict
    names: tuple = None

    @classmethod
    def zero(cls, nvars, names=None):
        return cls(nvars, {}, names)

    def copy(self):
        return TermSum(self.nvars, dict(self.terms), self.names)

    def add_term(self, coeff, forms):
        """Add ``coeff / prod(forms)``; forms may repeat."""
        coeff = Q(coeff)
        dens = {}
        for f in forms:
            if len(f) != self.nvars + 1:
                raise ValueError("form has the wrong length")
            s, g = normalize_form(f)
            coeff /= s
            dens[g] = dens.get(g, 0) + 1
        self._add(coeff, _den_key(dens))

    def _add(self, coeff, key):
        if not coeff:
            return
        c = self.terms.get(key, ZERO) + coeff
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def __add__(self, other):
        out = self.copy()
        for key, c in other.terms.items():
            out._add(c, key)
        return out

    def __mul__(self, lam):
        lam = Q(lam)
        if not lam:
            return TermSum.zero(self.nvars, self.names)
        return TermSum(self.nvars, {k: c * lam for k, c in self.terms.items()}, self.names)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __len__(self):
        return len(self.terms)

    def is_syntactically_zero(self):
        return not self.terms

    def variables(self):
        used = set()
        for key in self.terms:
            for f, _ in key:
                used.update(i for i in range(self.nvars) if f[i])
        return sorted(used)

    def evaluate(self, point):
        """Exact value at ``point`` (a sequence of nvars rationals)."""
        x = [Q(v) for v in point] + [ONE]
        tot = ZERO
        for key, c in self.terms.items():
            den = ONE
            for f, p in key:
                v = sum((a * b for a, b in zip(f, x) if a), ZERO)
                if not v:
                    raise PoleError("denominator vanishes at the point")
                den *= v ** p
            tot += c / den
        return tot

    def substitute(self, values):
        """Fix variables ``{index: rational}``, folding them into constants."""
        out = TermSum.zero(self.nvars, self.names)
        vals = {i: Q(v) for i, v in values.items()}
        for key, c in self.terms.items():
            coeff = c
            dens = {}
            for f, p in key:
                g = list(f)
                for i, v in vals.items():
                    if g[i]:
                        g[-1] += g[i] * v
                        g[i] = ZERO
                if not any(g):
                    raise PoleError("substitution hits a pole")
                if not any(g[:-1]):
                    # a constant now; fold it into the coefficient
                    coeff /= g[-1] ** p
                    continue
                s, h = normalize_form(g)
                coeff /= s ** p
                dens[h] = dens.get(h, 0) + p
            out._add(coeff, _den_key(dens))
        return out

    def forms(self):
        """Distinct denominator forms in order of first appearance."""
        seen = {}
        for key in sorted(self.terms):
            for f, _ in key:
                seen.setdefault(f, len(seen))
        return list(seen)

    def residue_step(self, var):
        """Coefficient of 1/x_var in the Laurent expansion at x_var = 0.

        Forms identically proportional to x_var give the pole; every other
        form l = l0 + b x_var is expanded as sum_t (-b)^t x_var^t / l0^(t+1).
        """
        out = TermSum.zero(self.nvars, self.names)
        for key, c in self.terms.items():
            order = 0
            rest = []
            for f, p in key:
                if f[var] and not any(f[i] for i in range(self.nvars + 1) if i != var):
                    order += p
                else:
                    rest.append((f, p))
            if order == 0:
                continue
            need = order - 1
            # each factor l^-p contributes sum_t C(p+t-1, t) (-b)^t x^t l0^-(p+t)
            choices = []
            for f, p in rest:
                b = f[var]
                l0 = f[:var] + (ZERO,) + f[var + 1:]
                if not any(l0):
                    raise ArithmeticError("pole form is not proportional to the variable")
                opts = []
                for t in range(need + 1 if b else 1):
                    opts.append((t, _binom(p + t - 1, t) * (-b) ** t, l0, p + t))
                choices.append(opts)
            for combo in product(*choices):
                if sum(o[0] for o in combo) != need:
                    continue
                coeff = c
                dens = {}
                for _, w, l0, q in combo:
                    coeff *= w
                    s, g = normalize_form(l0)
                    coeff /= s ** q
                    dens[g] = dens.get(g, 0) + q
                out._add(coeff, _den_key(dens))
        return out

    def to_json(self):
        return [{"coeff": format_q(c),
                 "den": [{"form": [format_q(x) for x in f], "power": p} for f, p in key]}
                for key, c in sorted(self.terms.items())]

    def format(self):
        names = self.names or tuple(f"x{i}" for i in range(self.nvars))
        parts = []
        for key, c in sorted(self.terms.items()):
            den = " ".join(
                ("(" + _format_form(f, names) + ")") + (f"^{p}" if p > 1 else "")
                for f, p in key)
            parts.append(f"{format_q(c)}/[{den}]" if den else format_q(c))
        return " + ".join(parts) if parts else "0"


def _format_form(f, names):
    out = []
    for a, nm in zip(f, names):
        if a:
            out.append(nm if a == 1 else f"{format_q(a)}*{nm}")
    if f[-1]:
        out.append(format_q(f[-1]))
    return " + ".join(out)


def _binom(a, b):
    from math import comb
    return comb(a, b)
