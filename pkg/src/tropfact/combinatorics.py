"""k-subsets of [n], decorated ordered set partitions and weak separation.

A k-subset is a sorted tuple of ints in ``1..n``.  Cyclic arithmetic on
labels is always modulo ``n`` with representatives ``1..n``.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb

import networkx as nx

__all__ = [
    "subsets", "cyc", "is_frozen", "frozen_subsets", "enumerate_nonfrozen",
    "cyclic_interval", "is_cyclic_interval", "CyclicDecomposition",
    "cyclic_decomposition", "DOSP", "dosp_of_subset", "subset_of_dosp",
    "is_weakly_separated", "is_noncrossing", "incompatibility_graph",
    "pairwise_weakly_separated", "parse_dosp", "format_subset",
]


def cyc(i, n):
    """Representative of ``i`` modulo ``n`` in ``1..n``."""
    return (i - 1) % n + 1


@lru_cache(maxsize=None)
def subsets(k, n):
    """All k-subsets of [n] in lexicographic order."""
    return tuple(combinations(range(1, n + 1), k))


def cyclic_interval(start, length, n):
    """The cyclic interval ``{start, start+1, ..., start+length-1}`` as a sorted tuple."""
    return tuple(sorted(cyc(start + t, n) for t in range(length)))


def is_cyclic_interval(block, n):
    b = set(block)
    if not b or len(b) == n:
        return bool(b)
    starts = [x for x in b if cyc(x - 1, n) not in b]
    return len(starts) == 1


def is_frozen(J, n):
    return is_cyclic_interval(J, n) and len(J) < n


@lru_cache(maxsize=None)
def frozen_subsets(k, n):
    """The n frozen subsets, ordered by their starting label 1..n."""
    return tuple(cyclic_interval(j, k, n) for j in range(1, n + 1))


@lru_cache(maxsize=None)
def enumerate_nonfrozen(k, n):
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got k={k}, n={n}")
    fr = set(frozen_subsets(k, n))
    out = tuple(J for J in subsets(k, n) if J not in fr)
    assert len(out) == comb(n, k) - n
    return out


def format_subset(J, n=None):
    sep = "," if (n or max(J)) >= 10 else ""
    return sep.join(str(j) for j in J)


def _block_order(block, n):
    """Elements of a block listed in cyclic order from their natural start.

    Cyclic-interval blocks start at the element whose predecessor is
    missing; other blocks are simply sorted.
    """
    b = set(block)
    if len(b) == n:
        return tuple(range(1, n + 1))
    if is_cyclic_interval(b, n):
        start = next(x for x in b if cyc(x - 1, n) not in b)
        return tuple(cyc(start + t, n) for t in range(len(b)))
    return tuple(sorted(b))


@dataclass(frozen=True)
class CyclicDecomposition:
    """Intervals J_1..J_d of J and the gaps C_1..C_d preceding them.

    The concatenation (C_1, J_1, ..., C_d, J_d) runs once around the circle.
    """
    intervals: tuple
    gaps: tuple


def cyclic_decomposition(J, n):
    Js = set(J)
    if not Js or len(Js) == n:
        raise ValueError("decomposition needs a proper nonempty subset")
    starts = sorted(x for x in Js if cyc(x - 1, n) not in Js)
    if 1 in Js:
        # the interval through 1 comes first
        first = next(s for s in starts if 1 in _run(s, Js, n))
        i0 = starts.index(first)
        starts = starts[i0:] + starts[:i0]
    intervals, gaps = [], []
    for s in starts:
        run = _run(s, Js, n)
        gap = []
        x = cyc(s - 1, n)
        while x not in Js:
            gap.append(x)
            x = cyc(x - 1, n)
        intervals.append(tuple(run))
        gaps.append(tuple(reversed(gap)))
    return CyclicDecomposition(tuple(intervals), tuple(gaps))


def _run(s, Js, n):
    run = [s]
    x = cyc(s + 1, n)
    while x in Js and x != s:
        run.append(x)
        x = cyc(x + 1, n)
    return run


@dataclass(frozen=True)
class DOSP:
    """Decorated ordered set partition ((S_1)_{r_1}, ..., (S_d)_{r_d}) of [n].

    Blocks are stored in canonical rotation (the block containing 1 first);
    elements inside a block are listed cyclically.  Construct through
    :meth:`make` to get that normalization.
    """
    n: int
    blocks: tuple
    r: tuple

    @classmethod
    def make(cls, blocks, r, n):
        blocks = [tuple(b) for b in blocks]
        r = tuple(int(x) for x in r)
        if len(blocks) != len(r):
            raise ValueError("one decoration per block is required")
        seen = [x for b in blocks for x in b]
        if sorted(seen) != list(range(1, n + 1)):
            raise ValueError(f"blocks {blocks} do not partition [1..{n}]")
        if any(not b for b in blocks) or any(x < 1 for x in r):
            raise ValueError("blocks must be nonempty, decorations positive")
        i0 = next(i for i, b in enumerate(blocks) if 1 in b)
        blocks = blocks[i0:] + blocks[:i0]
        r = r[i0:] + r[:i0]
        return cls(n, tuple(_block_order(b, n) for b in blocks), r)

    @property
    def k(self):
        return sum(self.r)

    @property
    def d(self):
        return len(self.blocks)

    @property
    def is_degenerate(self):
        return self.d == 1

    def is_type_delta(self):
        return all(1 <= r <= len(b) - 1 for b, r in zip(self.blocks, self.r))

    def block_sets(self):
        return tuple(frozenset(b) for b in self.blocks)

    def label(self):
        sep = " " if self.n >= 10 else ""
        parts = []
        for b, r in zip(self.blocks, self.r):
            parts.append(sep.join(str(x) for x in b) + f"_{r}")
        return "(" + " ".join(parts) + ")"

    def to_json(self):
        return [{"S": list(b), "r": r} for b, r in zip(self.blocks, self.r)]

    @classmethod
    def from_json(cls, data, n=None):
        blocks = [tuple(item["S"]) for item in data]
        if n is None:
            n = max(x for b in blocks for x in b)
        return cls.make(blocks, [item["r"] for item in data], n)

    def __str__(self):
        return self.label()


def parse_dosp(text, n=None):
    """Parse ``"12_1|345_1"`` (digits) or ``"1,2_1|3,4,5_1"`` notation."""
    blocks, rs = [], []
    for part in text.replace(" ", "").strip("()").split("|"):
        body, _, r = part.rpartition("_")
        if not body or not r:
            raise ValueError(f"cannot parse block {part!r}")
        if "," in body:
            b = tuple(int(x) for x in body.split(","))
        else:
            b = tuple(int(ch) for ch in body)
        blocks.append(b)
        rs.append(int(r))
    if n is None:
        n = max(x for b in blocks for x in b)
    return DOSP.make(blocks, rs, n)


def dosp_of_subset(J, n):
    """The decorated ordered set partition attached to a k-subset.

    Each block is a gap of the 0/1 vector e_J followed by the run of ones
    after it, decorated by the length of that run.  Frozen subsets give
    the degenerate one-block partition ([n])_k.
    """
    J = tuple(sorted(J))
    if is_frozen(J, n):
        return DOSP.make([tuple(range(1, n + 1))], [len(J)], n)
    dec = cyclic_decomposition(J, n)
    blocks = [c + j for c, j in zip(dec.gaps, dec.intervals)]
    return DOSP.make(blocks, [len(j) for j in dec.intervals], n)


def subset_of_dosp(d):
    """Inverse of :func:`dosp_of_subset`; the last r_j elements of each block.

    Raises ``ValueError`` if ``d`` is not in the image of the bijection.
    """
    if not d.is_type_delta():
        raise ValueError(f"{d.label()} is not of hypersimplex type")
    J = []
    for b, r in zip(d.blocks, d.r):
        if not is_cyclic_interval(b, d.n):
            raise ValueError(f"{d.label()}: block {b} is not a cyclic interval")
        J.extend(b[-r:])
    J = tuple(sorted(J))
    if dosp_of_subset(J, d.n) != d:
        raise ValueError(f"{d.label()} is not in the image of the bijection")
    return J


def _cyclic_sign_changes(I, J, n):
    Is, Js = set(I), set(J)
    signs = []
    for x in range(1, n + 1):
        a, b = x in Is, x in Js
        if a != b:
            signs.append(1 if a else -1)
    if not signs:
        return 0
    return sum(1 for i in range(len(signs)) if signs[i] != signs[i - 1])


def is_weakly_separated(I, J, n):
    """No cyclic a<b<c<d with e_I - e_J = +,-,+,- there.

    Equivalent to the cyclic sign sequence of e_I - e_J (zeros dropped)
    changing sign at most twice.
    """
    if len(I) != len(J):
        raise ValueError("weak separation compares sets of equal size")
    return _cyclic_sign_changes(I, J, n) <= 2


def is_noncrossing(I, J, n):
    """Noncrossing test, applied literally to every index window a<b."""
    I, J = tuple(sorted(I)), tuple(sorted(J))
    k = len(I)
    if len(J) != k:
        raise ValueError("noncrossing compares sets of equal size")
    for a in range(k):
        for b in range(a + 1, k):
            if is_weakly_separated(I[a:b + 1], J[a:b + 1], n):
                continue
            if I[a + 1:b] != J[a + 1:b]:
                continue
            return False
    return True


def pairwise_weakly_separated(collection, n):
    coll = list(collection)
    return all(is_weakly_separated(coll[i], coll[j], n)
               for i in range(len(coll)) for j in range(i + 1, len(coll)))


def incompatibility_graph(collection, n):
    """Graph on the collection with an edge for each non-weakly-separated pair."""
    coll = [tuple(sorted(J)) for J in collection]
    if len(set(coll)) != len(coll):
        raise ValueError("collection has repeated subsets")
    G = nx.Graph()
    G.add_nodes_from(coll)
    for i in range(len(coll)):
        for j in range(i + 1, len(coll)):
            if not is_weakly_separated(coll[i], coll[j], n):
                G.add_edge(coll[i], coll[j])
    return G
