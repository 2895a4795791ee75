"""Necessity/possibility by counting, belief/plausibility by mass sums."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .core import GranularDistribution
from .relation import GranularRelation


@dataclass(frozen=True)
class QueryResult:
    """Normalized necessity and possibility of a query.

    The raw counts are only set for relation-backed queries; the
    normalized values are the canonical ones.
    """

    necessity: Fraction
    possibility: Fraction
    certain_count: Optional[int] = None
    possible_count: Optional[int] = None
    total: Optional[int] = None

    def __post_init__(self):
        if not 0 <= self.necessity <= self.possibility <= 1:
            raise ValueError(f"inconsistent query result {self.necessity}, {self.possibility}")


def necessity_possibility_rel(rel: GranularRelation, column: str, query: Iterable[str]) -> QueryResult:
    """Count rows whose cell lies inside ``query`` and rows whose cell meets it."""
    q = rel.frame.mask_of(query)
    cells = rel.column(column)
    certain = sum(1 for c in cells if c.mask & ~q == 0)
    possible = sum(1 for c in cells if c.mask & q)
    total = len(cells)
    return QueryResult(Fraction(certain, total), Fraction(possible, total), certain, possible, total)


def belief(dist: GranularDistribution, query: Iterable[str]) -> Fraction:
    q = dist.frame.mask_of(query)
    return sum((m for g, m in dist.focal if g.mask & ~q == 0), Fraction(0))


def plausibility(dist: GranularDistribution, query: Iterable[str]) -> Fraction:
    q = dist.frame.mask_of(query)
    return sum((m for g, m in dist.focal if g.mask & q), Fraction(0))


def query_distribution(dist: GranularDistribution, query: Iterable[str]) -> QueryResult:
    query = list(query)
    return QueryResult(belief(dist, query), plausibility(dist, query))
