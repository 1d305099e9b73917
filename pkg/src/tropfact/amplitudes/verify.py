"""Factorization checks on iterated residues.

The residue of m^{(k)}_n along a channel is a rational function of the
surviving planar coordinates.  We split those coordinates into groups on
which the function factorizes (an exact multiplicative identity at random
points), and match each group's factor against a lower-point amplitude by
pairing denominator forms through a graph isomorphism and solving for
signs.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from time import perf_counter

import networkx as nx

from ..blades import eta_of_dosp, height_of_dosp
from ..exact import format_q, inverse, rank
from .amplitude import KinematicSlice, amplitude, fan_for, is_zero, iterated_residue
from .fan import build_star
from .termsum import PoleError

__all__ = [
    "separability_groups", "check_separable", "sub_amplitude", "match_factor",
    "FactorizationReport", "verify_factorization", "channel_propagators",
    "expected_factors", "match_factor_by_value",
]


def _rand(rng, bound=10 ** 6):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _point(ts, rng):
    return [_rand(rng) for _ in range(ts.nvars)]


def _regular_point(ts, rng, tries=200):
    for _ in range(tries):
        pt = _point(ts, rng)
        try:
            if ts.evaluate(pt):
                return pt
        except PoleError:
            continue
    raise PoleError("no regular point found")


def _cross(ts, A, pt, other, rng):
    """R(x_A, x_B) R(y_A, y_B) - R(x_A, y_B) R(y_A, x_B) at random x, y."""
    x = list(pt)
    y = list(other)
    xa_yb = [x[i] if i in A else y[i] for i in range(len(x))]
    ya_xb = [y[i] if i in A else x[i] for i in range(len(x))]
    return ts.evaluate(x) * ts.evaluate(y) - ts.evaluate(xa_yb) * ts.evaluate(ya_xb)


def separability_groups(ts, seed=0, trials=2):
    """Finest grouping of the variables on which ``ts`` is a product.

    Two variables are linked when exchanging one of them between two random
    points breaks R(x)R(y) = R(x')R(y'); groups are connected components.
    """
    rng = random.Random(seed)
    used = ts.variables()
    G = nx.Graph()
    G.add_nodes_from(used)
    for u, v in combinations(used, 2):
        for _ in range(trials):
            try:
                x = _regular_point(ts, rng)
                y = list(x)
                y[u] = _rand(rng)
                y[v] = _rand(rng)
                if _cross(ts, {u}, x, y, rng):
                    G.add_edge(u, v)
                    break
            except PoleError:
                continue
    return [sorted(c) for c in sorted(nx.connected_components(G), key=min)]


def check_separable(ts, groups, seed=1, samples=3):
    """Exact multiplicative identity across every group versus the rest."""
    rng = random.Random(seed)
    for A in groups:
        A = set(A)
        for _ in range(samples):
            x = _regular_point(ts, rng)
            y = _regular_point(ts, rng)
            try:
                if _cross(ts, A, x, y, rng):
                    return False
            except PoleError:
                continue
    return True


def sub_amplitude(k, m):
    """m^{(k)}_m as a TermSum in its planar coordinates (None when trivially 1)."""
    if m <= k + 1:
        return None
    fan = fan_for(k, m, guard=None)
    sl = KinematicSlice.build(k, m, [])
    return amplitude(fan, sl)


def _co_graph(ts):
    fs = ts.forms()
    idx = {f: i for i, f in enumerate(fs)}
    G = nx.Graph()
    G.add_nodes_from(range(len(fs)))
    for key in ts.terms:
        ids = [idx[f] for f, _ in key]
        for a, b in combinations(ids, 2):
            G.add_edge(a, b)
    return fs, G


def _gf2_solve(rows, rhs, nvars):
    rows = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv = []
    r = 0
    for c in range(nvars):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                rows[i] = [a ^ b for a, b in zip(rows[i], rows[r])]
        piv.append(c)
        r += 1
    if any(not any(row[:-1]) and row[-1] for row in rows):
        return None
    sol = [0] * nvars
    for i, c in enumerate(piv):
        sol[c] = rows[i][-1]
    return sol


def match_factor(factor, sub, max_isomorphisms=5000):
    """Look for X_a -> mu_a L_sigma(a) with mu_a = +-1 and a constant kappa
    such that ``factor`` = kappa * ``sub``.

    Returns ``(kappa, sigma, signs)`` or None.  The identification must
    also respect every linear relation among the sub-amplitude's forms.
    """
    fs, G = _co_graph(factor)
    xs, H = _co_graph(sub)
    if len(fs) != len(xs) or len(factor) != len(sub):
        return None
    if any(p != 1 for key in factor.terms for _, p in key):
        return None
    sub_terms = [(frozenset(xs.index(f) for f, _ in key), c) for key, c in sub.terms.items()]
    fac_terms = {frozenset(fs.index(f) for f, _ in key): c for key, c in factor.terms.items()}
    # linear relations among the sub-amplitude forms (homogeneous parts)
    Xmat = [list(x[:-1]) for x in xs]
    from ..exact import nullspace
    rel = nullspace([[Xmat[a][j] for a in range(len(xs))] for j in range(len(Xmat[0]))], len(xs))
    gm = nx.algorithms.isomorphism.GraphMatcher(H, G)
    for count, iso in enumerate(gm.isomorphisms_iter()):
        if count >= max_isomorphisms:
            break
        ratios = []
        ok = True
        for T, c in sub_terms:
            img = frozenset(iso[a] for a in T)
            if img not in fac_terms:
                ok = False
                break
            ratios.append((T, fac_terms[img] / c))
        if not ok:
            continue
        mags = {abs(r) for _, r in ratios}
        if len(mags) != 1:
            continue
        kappa = mags.pop()
        # sign of ratio = sign(kappa) * prod mu_a over the term
        A = [[1 if a in T else 0 for a in range(len(xs))] for T, _ in ratios]
        b = [1 if r < 0 else 0 for _, r in ratios]
        signs = _gf2_solve(A, b, len(xs))
        if signs is None:
            b = [1 - x for x in b]
            signs = _gf2_solve(A, b, len(xs))
            if signs is None:
                continue
            kappa = -kappa
        mu = [-1 if s else 1 for s in signs]
        # relations: sum lam_a X_a = 0 must give sum lam_a mu_a L_sigma(a) = 0
        good = True
        for lam in rel:
            tot = [Fraction(0)] * len(fs[0])
            for a, l in enumerate(lam):
                if l:
                    L = fs[iso[a]]
                    for j, x in enumerate(L):
                        tot[j] += l * mu[a] * x
            if any(tot):
                good = False
                break
        if good:
            return kappa, {a: iso[a] for a in range(len(xs))}, mu
    return None


def _dependent_triples(vecs):
    out = []
    for T in combinations(range(len(vecs)), 3):
        if rank([vecs[i] for i in T]) == 2:
            out.append(T)
    return out


def _triple_graph(vecs):
    G = nx.Graph()
    G.add_nodes_from(range(len(vecs)), kind="form")
    for T in _dependent_triples(vecs):
        G.add_node(T, kind="triple")
        for i in T:
            G.add_edge(i, T)
    return G


def match_factor_by_value(factor, sub, seed=0, max_isomorphisms=2000, samples=3):
    """Look for a linear map y = L x with X_a(L x) = mu_a l_sigma(a)(x) for
    every pole X_a of ``sub`` and factor(x) = kappa * sub(L x).

    Unlike :func:`match_factor` this does not compare individual terms,
    so it works when the two sides come from different triangulations.
    Returns ``(kappa, sigma, signs)`` or None.
    """
    fs = factor.forms()
    xs = sub.forms()
    if len(fs) != len(xs) or any(f[-1] for f in fs) or any(x[-1] for x in xs):
        return None
    F = [list(f[:-1]) for f in fs]
    X = [list(x[:-1]) for x in xs]
    D = sub.nvars
    basis = []
    for a in range(len(X)):
        if rank([X[i] for i in basis] + [X[a]]) > len(basis):
            basis.append(a)
    if len(basis) != D or rank(F) != D:
        return None
    XB_inv = inverse([X[a] for a in basis])
    G, H = _triple_graph(F), _triple_graph(X)
    same_kind = lambda u, v: u["kind"] == v["kind"]
    gm = nx.algorithms.isomorphism.GraphMatcher(H, G, node_match=same_kind)
    rng = random.Random(seed)
    fset = {tuple(f): i for i, f in enumerate(F)}
    for count, iso in enumerate(gm.isomorphisms_iter()):
        if count >= max_isomorphisms:
            break
        sigma = {a: iso[a] for a in range(len(X))}
        for mask in range(1 << D):
            mu_b = [-1 if mask >> t & 1 else 1 for t in range(D)]
            rhs = [[m * x for x in F[sigma[a]]] for m, a in zip(mu_b, basis)]
            L = [[sum(XB_inv[i][j] * rhs[j][c] for j in range(D)) for c in range(len(F[0]))]
                 for i in range(D)]
            mu = {}
            ok = True
            for a in range(len(X)):
                img = [sum(X[a][i] * L[i][c] for i in range(D)) for c in range(len(F[0]))]
                if fset.get(tuple(img)) == sigma[a]:
                    mu[a] = 1
                elif fset.get(tuple(-x for x in img)) == sigma[a]:
                    mu[a] = -1
                else:
                    ok = False
                    break
            if not ok:
                continue
            kappa = None
            for _ in range(samples):
                try:
                    x = _regular_point(factor, rng)
                    y = [sum(L[i][c] * x[c] for c in range(len(x))) for i in range(D)]
                    v = sub.evaluate(y)
                except PoleError:
                    continue
                if not v:
                    ok = False
                    break
                r = factor.evaluate(x) / v
                if kappa is None:
                    kappa = r
                elif r != kappa:
                    ok = False
                    break
            if ok and kappa is not None:
                return kappa, sigma, [mu[a] for a in range(len(X))]
    return None


def channel_propagators(S):
    """The distinct nonzero blades among the channel itself and X(S), S first."""
    from ..factorization import x_collection
    out, seen = [], set()
    for d in [S.dosp()] + x_collection(S):
        f = eta_of_dosp(d)
        if any(f.coeffs) and f not in seen:
            seen.add(f)
            out.append(d)
    return out


def expected_factors(S):
    """Point counts n_l = |S_l| + k - 1 of the conjectured factors."""
    return [len(b) + S.k - 1 for b in S.blocks if len(b) >= 2]


@dataclass
class FactorizationReport:
    channel: str
    k: int
    n: int
    propagators: list
    orders_tried: int
    nonzero_orders: list
    zero_orders: list
    result: object = None
    groups: list = field(default_factory=list)
    separable: bool = None
    expected: list = field(default_factory=list)
    matches: list = field(default_factory=list)
    product_constant: object = None
    seconds: float = 0.0
    seed: int = 0

    def to_json(self):
        return {
            "channel": self.channel, "k": self.k, "n": self.n,
            "propagators": self.propagators, "orders_tried": self.orders_tried,
            "nonzero_count": len(self.nonzero_orders), "zero_count": len(self.zero_orders),
            "nonzero_orders": self.nonzero_orders[:5], "zero_orders": self.zero_orders[:5],
            "groups": self.groups, "separable": self.separable,
            "expected_factors": self.expected, "matches": self.matches,
            "product_constant": None if self.product_constant is None else format_q(self.product_constant),
            "result_terms": None if self.result is None else len(self.result),
            "seconds": round(self.seconds, 3), "seed": self.seed,
        }


def verify_factorization(S, orders=None, seed=0, max_orders=None, guard=6):
    """Iterated residues along a channel, separability and factor matching.

    ``orders`` lists index permutations of :func:`channel_propagators`;
    by default the channel comes first and the rest are permuted, pruning
    any prefix whose partial residue already vanishes.
    """
    t0 = perf_counter()
    k, n = S.k, S.n
    props = channel_propagators(S)
    hs = [height_of_dosp(d) for d in props]
    labels = [d.label() for d in props]
    fans = {}

    def star(first):
        if first not in fans:
            fans[first] = build_star(k, n, [hs[first]])
        return fans[first]

    nonzero, zero = [], []
    result = None
    tried = 0
    if orders is None:
        sl = KinematicSlice.build(k, n, hs)
        ts0 = amplitude(star(0), sl)

        def dfs(prefix, ts):
            nonlocal tried, result
            if max_orders is not None and tried >= max_orders:
                return
            if len(prefix) == len(props):
                tried += 1
                nonzero.append(list(prefix))
                if result is None:
                    result = (ts, sl, list(prefix))
                return
            for j in range(len(props)):
                if j in prefix or (not prefix and j != 0):
                    continue
                nxt = ts.residue_step(j)
                if is_zero(nxt):
                    tried += 1
                    zero.append(prefix + [j])
                    continue
                dfs(prefix + [j], nxt)

        dfs([], ts0)
    else:
        for order in orders:
            tried += 1
            r = iterated_residue(k, n, [hs[i] for i in order], fan=star(order[0]))
            if r.zero:
                zero.append(list(order))
            else:
                nonzero.append(list(order))
                if result is None:
                    result = (r.result, r.slice, list(order))
    rep = FactorizationReport(S.label(), k, n, labels, tried,
                              [[labels[i] for i in o] for o in nonzero],
                              [[labels[i] for i in o] for o in zero], seed=seed,
                              expected=expected_factors(S))
    if result is not None:
        ts, sl, order = result
        rep.result = ts
        groups = separability_groups(ts, seed)
        rep.groups = [[sl.names[i] for i in g] for g in groups]
        rep.separable = check_separable(ts, groups, seed + 1)
        rep.matches, rep.product_constant = _match_groups(ts, groups, S, seed)
    rep.seconds = perf_counter() - t0
    return rep


def _match_groups(ts, groups, S, seed):
    """Match each group's factor with an expected sub-amplitude."""
    rng = random.Random(seed + 7)
    wanted = [m for m in expected_factors(S) if m > S.k + 1]
    base = _regular_point(ts, rng)
    matches = []
    used = set()
    subs = {m: sub_amplitude(S.k, m) for m in set(wanted)}
    for g in groups:
        fixed = {i: base[i] for i in range(ts.nvars) if i not in g}
        part = ts.substitute(fixed)
        found = None
        for t, m in enumerate(wanted):
            if t in used:
                continue
            mt = match_factor(part, subs[m])
            if mt is None:
                mt = match_factor_by_value(part, subs[m], seed)
            if mt is not None:
                found = (t, m, mt)
                break
        if found is None:
            matches.append({"group_size": len(g), "matched": None})
        else:
            used.add(found[0])
            matches.append({"group_size": len(g), "matched": f"m({S.k},{found[1]})",
                            "kappa": format_q(found[2][0])})
    constant = None
    if len(used) == len(wanted) and len(matches) == len(wanted):
        # R = prod_g R(x_g, base) / R(base)^(c-1) and R(x_g, base) = kappa_g m_g
        constant = Fraction(1)
        for mt in matches:
            constant *= Fraction(mt["kappa"])
        if groups:
            constant /= ts.evaluate(base) ** (len(groups) - 1)
    return matches, constant
