"""Combinability of two sources: does a conflict-free common parent relation exist?

Two distributions G and H are combinable exactly when there is a joint
assignment r[i][j] >= 0 with row sums p_i, column sums q_j and
r[i][j] = 0 whenever A_i and B_j are disjoint. :func:`combinable` decides
this with an exact integer max-flow; :func:`gale_oracle` decides it
independently by enumerating supply/demand subset conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import GranularDistribution, check_same_frame
from .errors import TooLarge, WitnessTooLarge
from .flow import FlowNetwork
from .relation import GranularRelation, conflict_free, summarize

DEFAULT_MAX_WITNESS_ROWS = 10**6
DEFAULT_ORACLE_MAX_FOCALS = 15


@dataclass(frozen=True)
class JointAssignment:
    """Joint relative counts ``matrix[i][j]`` over G's and H's focal indices."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def entries(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, r) for i, row in enumerate(self.matrix) for j, r in enumerate(row) if r]

    def check(self, g: GranularDistribution, h: GranularDistribution) -> None:
        """Raise ``AssertionError`` unless marginals and support are exact."""
        assert len(self.matrix) == len(g.focal)
        for (a, p), row in zip(g.focal, self.matrix):
            assert len(row) == len(h.focal)
            assert sum(row, Fraction(0)) == p, "row marginal mismatch"
            for (b, _), r in zip(h.focal, row):
                assert r >= 0, "negative joint mass"
                assert r == 0 or a.mask & b.mask, "mass on a disjoint pair"
        for j, (_, q) in enumerate(h.focal):
            assert sum((row[j] for row in self.matrix), Fraction(0)) == q, "column marginal mismatch"


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """A set S of one side's focals whose mass exceeds all mass it could pair with."""

    side: str
    indices: tuple[int, ...]
    supply: Fraction
    reachable_demand: Fraction

    def __post_init__(self):
        if not self.supply > self.reachable_demand:
            raise AssertionError("certificate does not certify: supply <= reachable demand")

    def check(self, g: GranularDistribution, h: GranularDistribution) -> None:
        """Recompute supply and demand from the distributions."""
        src, dst = (g, h) if self.side == "G" else (h, g)
        chosen = [src.focal[i] for i in self.indices]
        supply = sum((p for _, p in chosen), Fraction(0))
        demand = sum(
            (q for b, q in dst.focal if any(a.mask & b.mask for a, _ in chosen)), Fraction(0)
        )
        assert supply == self.supply and demand == self.reachable_demand
        assert supply > demand

    def to_dict(self) -> dict:
        from .core import format_mass

        return {
            "side": self.side,
            "set_indices": list(self.indices),
            "supply": format_mass(self.supply),
            "reachable_demand": format_mass(self.reachable_demand),
        }


@dataclass(frozen=True)
class FeasibilityResult:
    """Either a joint assignment (with optional witness relation) or a certificate."""

    joint: Optional[JointAssignment] = None
    witness: Optional[GranularRelation] = None
    certificate: Optional[InfeasibilityCertificate] = None

    def __post_init__(self):
        if (self.joint is None) == (self.certificate is None):
            raise ValueError("exactly one of joint / certificate must be set")

    @property
    def feasible(self) -> bool:
        return self.joint is not None


@dataclass(frozen=True)
class SufficientVerdict:
    triggered: bool
    side: Optional[str] = None
    index: Optional[int] = None


def sufficient_noncombinable(g: GranularDistribution, h: GranularDistribution) -> SufficientVerdict:
    """Detect a focal on either side that is disjoint from every focal of the other."""
    check_same_frame(g.frame, h.frame)
    for side, src, dst in (("G", g, h), ("H", h, g)):
        for i, (a, _) in enumerate(src.focal):
            if all(not a.mask & b.mask for b, _ in dst.focal):
                return SufficientVerdict(True, side, i)
    return SufficientVerdict(False)


def _lcm_denominator(values) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, v.denominator)
    return d


def build_witness(
    g: GranularDistribution,
    h: GranularDistribution,
    joint: JointAssignment,
    columns: tuple[str, str] = ("G", "H"),
    max_rows: int = DEFAULT_MAX_WITNESS_ROWS,
) -> GranularRelation:
    """Smallest parent relation realizing ``joint``: one row per unit of joint count."""
    entries = joint.entries()
    n_rows = _lcm_denominator(r for _, _, r in entries)
    if n_rows > max_rows:
        raise WitnessTooLarge(f"witness would need {n_rows} rows; cap is {max_rows}")
    rows = []
    for i, j, r in entries:
        count = r * n_rows
        assert count.denominator == 1
        for _ in range(int(count)):
            rows.append((f"r{len(rows) + 1}", (g.focal[i][0], h.focal[j][0])))
    return GranularRelation(g.frame, columns, rows)


def combinable(
    g: GranularDistribution,
    h: GranularDistribution,
    *,
    scale: int = 1,
    witness: bool = True,
    witness_columns: tuple[str, str] = ("G", "H"),
    max_witness_rows: int = DEFAULT_MAX_WITNESS_ROWS,
) -> FeasibilityResult:
    """Decide combinability exactly by max-flow on the compatibility graph.

    Masses are scaled to integers by the LCM of their denominators (times
    ``scale``, which must not change the verdict). The source side of a
    minimum cut supplies the certificate when the flow falls short. When
    several joint assignments exist, the one the flow happens to find is
    returned.
    """
    check_same_frame(g.frame, h.frame)
    if scale < 1:
        raise ValueError("scale must be a positive integer")
    m, n = len(g.focal), len(h.focal)
    big_d = _lcm_denominator(list(g.masses) + list(h.masses)) * scale
    source, sink = m + n, m + n + 1
    net = FlowNetwork(m + n + 2)
    for i, p in enumerate(g.masses):
        net.add_edge(source, i, int(p * big_d))
    for j, q in enumerate(h.masses):
        net.add_edge(m + j, sink, int(q * big_d))
    arcs = {}
    for i, (a, _) in enumerate(g.focal):
        for j, (b, _) in enumerate(h.focal):
            if a.mask & b.mask:
                # big_d bounds every feasible flow, so it is as good as infinity here
                arcs[i, j] = net.add_edge(i, m + j, big_d)

    if net.max_flow(source, sink) == big_d:
        matrix = tuple(
            tuple(
                Fraction(net.flow_on(arcs[i, j]), big_d) if (i, j) in arcs else Fraction(0)
                for j in range(n)
            )
            for i in range(m)
        )
        joint = JointAssignment(matrix)
        joint.check(g, h)
        rel = build_witness(g, h, joint, witness_columns, max_witness_rows) if witness else None
        return FeasibilityResult(joint=joint, witness=rel)

    reach = net.source_side(source)
    chosen = tuple(i for i in range(m) if i in reach)
    supply = sum((g.masses[i] for i in chosen), Fraction(0))
    demand = sum(
        (q for b, q in h.focal if any(g.focal[i][0].mask & b.mask for i in chosen)), Fraction(0)
    )
    return FeasibilityResult(certificate=InfeasibilityCertificate("G", chosen, supply, demand))


def _subset_tables(p: list[Fraction], q: list[Fraction], nbr: list[int]):
    """Supply and neighbourhood of every subset of G's focals, demand of every H subset."""
    m, n = len(p), len(q)
    supply = [Fraction(0)] * (1 << m)
    reach = [0] * (1 << m)
    for s in range(1, 1 << m):
        low = (s & -s).bit_length() - 1
        rest = s & (s - 1)
        supply[s] = supply[rest] + p[low]
        reach[s] = reach[rest] | nbr[low]
    demand = [Fraction(0)] * (1 << n)
    for s in range(1, 1 << n):
        low = (s & -s).bit_length() - 1
        demand[s] = demand[s & (s - 1)] + q[low]
    return supply, reach, demand


def gale_oracle(
    g: GranularDistribution,
    h: GranularDistribution,
    *,
    max_focals: int = DEFAULT_ORACLE_MAX_FOCALS,
    witness: bool = True,
    witness_columns: tuple[str, str] = ("G", "H"),
    max_witness_rows: int = DEFAULT_MAX_WITNESS_ROWS,
) -> FeasibilityResult:
    """Brute-force decision: feasible iff every subset S of G's focals satisfies
    supply(S) <= demand(neighbours of S).

    Exponential in the focal count, so it refuses instances above
    ``max_focals`` per side. On infeasibility the subset with the largest
    violation is reported (ties: fewer focals first, then lowest indices).
    On feasibility an assignment is built greedily, each compatible pair
    taking the most mass the subset conditions still allow.
    """
    check_same_frame(g.frame, h.frame)
    m, n = len(g.focal), len(h.focal)
    if max(m, n) > max_focals:
        raise TooLarge(f"oracle limited to {max_focals} focals per side, got {m} and {n}")
    p, q = list(g.masses), list(h.masses)
    nbr = [sum(1 << j for j, (b, _) in enumerate(h.focal) if a.mask & b.mask) for a, _ in g.focal]

    supply, reach, demand = _subset_tables(p, q, nbr)
    worst, worst_key = None, None
    for s in range(1, 1 << m):
        gap = supply[s] - demand[reach[s]]
        if gap > 0:
            members = tuple(i for i in range(m) if s >> i & 1)
            key = (-gap, len(members), members)
            if worst_key is None or key < worst_key:
                worst, worst_key = s, key
    if worst is not None:
        members = worst_key[2]
        return FeasibilityResult(
            certificate=InfeasibilityCertificate("G", members, supply[worst], demand[reach[worst]])
        )

    matrix = [[Fraction(0)] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            if not nbr[i] >> j & 1:
                continue
            supply, reach, demand = _subset_tables(p, q, nbr)
            t = min(p[i], q[j])
            for s in range(1, 1 << m):
                if not s >> i & 1 and reach[s] >> j & 1:
                    t = min(t, demand[reach[s]] - supply[s])
            matrix[i][j] = t
            p[i] -= t
            q[j] -= t
            # t is maximal, so no feasible completion uses this pair again
            nbr[i] &= ~(1 << j)
    assert not any(p) and not any(q), "greedy construction left unassigned mass"
    joint = JointAssignment(tuple(map(tuple, matrix)))
    joint.check(g, h)
    rel = build_witness(g, h, joint, witness_columns, max_witness_rows) if witness else None
    return FeasibilityResult(joint=joint, witness=rel)


def verify_parent(
    rel: GranularRelation, col_x: str, col_y: str, g: GranularDistribution, h: GranularDistribution
) -> bool:
    """Definition-level check that ``rel`` is a conflict-free common parent of G and H."""
    if not conflict_free(rel, col_x, col_y).ok:
        return False
    return summarize(rel, col_x) == g and summarize(rel, col_y) == h
