"""Independent brute-force references, written over frozensets of labels.

None of these touch the package's mask arithmetic, so they can serve as
oracles for it.
"""

from fractions import Fraction
from itertools import combinations


def as_sets(dist):
    """{frozenset(labels): mass} view of a distribution."""
    return {frozenset(g.labels): m for g, m in dist.focal}


def bel(masses, q):
    q = frozenset(q)
    return sum((m for a, m in masses.items() if a <= q), Fraction(0))


def pl(masses, q):
    q = frozenset(q)
    return sum((m for a, m in masses.items() if a & q), Fraction(0))


def combine(g, h):
    """Return (K, unnormalized {set: mass}) by enumerating every focal pair."""
    k = Fraction(0)
    out = {}
    for a, p in g.items():
        for b, q in h.items():
            c = a & b
            if c:
                out[c] = out.get(c, Fraction(0)) + p * q
            else:
                k += p * q
    return k, out


def normalize(unnorm):
    total = sum(unnorm.values(), Fraction(0))
    return {c: m / total for c, m in unnorm.items()}


def count_cells(cells):
    out = {}
    for c in cells:
        out[frozenset(c)] = out.get(frozenset(c), 0) + 1
    return {c: Fraction(n, len(cells)) for c, n in out.items()}


def row_scan(cells, q):
    q = frozenset(q)
    certain = sum(1 for c in cells if frozenset(c) <= q)
    possible = sum(1 for c in cells if frozenset(c) & q)
    return certain, possible


def gale_feasible(g, h):
    """Subset enumeration over G's focals (g, h are lists of (set, mass))."""
    for r in range(1, len(g) + 1):
        for subset in combinations(range(len(g)), r):
            supply = sum(g[i][1] for i in subset)
            demand = sum(q for b, q in h if any(g[i][0] & b for i in subset))
            if supply > demand:
                return False
    return True


def powerset(labels):
    labels = list(labels)
    for r in range(len(labels) + 1):
        yield from (frozenset(c) for c in combinations(labels, r))
