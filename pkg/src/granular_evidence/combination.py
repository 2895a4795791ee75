"""Dempster's rule with explicit conflict mass, and credibility discounting.

All combination functions assume the sources are statistically
independent. That assumption cannot be checked from the distributions
alone; it is the caller's responsibility.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .core import Frame, Granule, GranularDistribution, MassLike, check_same_frame, format_mass, parse_mass
from .errors import EmptyInput, TotalConflict


@dataclass(frozen=True)
class Credibility:
    """Reliability weight of a source, 0 <= alpha <= 1."""

    alpha: Fraction

    def __post_init__(self):
        alpha = parse_mass(self.alpha)
        if not 0 <= alpha <= 1:
            raise ValueError(f"credibility must lie in [0, 1], got {alpha}")
        object.__setattr__(self, "alpha", alpha)


@dataclass(frozen=True)
class CombinationResult:
    conflict: Fraction
    unnormalized: tuple[tuple[Granule, Fraction], ...]
    normalized: GranularDistribution

    def to_dict(self) -> dict:
        return {
            "conflict": format_mass(self.conflict),
            "unnormalized": [{"set": list(g.labels), "mass": format_mass(m)} for g, m in self.unnormalized],
            "normalized": self.normalized.to_dict(),
        }


def _conjunctive(a: Mapping[int, Fraction], b: Mapping[int, Fraction]) -> tuple[Fraction, dict[int, Fraction]]:
    """Unnormalized product of two mass maps; returns (conflict, surviving masses)."""
    out: dict[int, Fraction] = {}
    conflict = Fraction(0)
    for ma, pa in a.items():
        for mb, pb in b.items():
            c = ma & mb
            if c:
                out[c] = out.get(c, Fraction(0)) + pa * pb
            else:
                conflict += pa * pb
    return conflict, out


def _finish(frame: Frame, surviving: Mapping[int, Fraction], step=None) -> CombinationResult:
    total = sum(surviving.values(), Fraction(0))
    conflict = 1 - total
    unnormalized = tuple((Granule(frame, m), p) for m, p in sorted(surviving.items()))
    if total == 0:
        raise TotalConflict(conflict, unnormalized, step)
    normalized = GranularDistribution.from_masks(frame, {m: p / total for m, p in surviving.items()})
    return CombinationResult(conflict, unnormalized, normalized)


def conflict_mass(g: GranularDistribution, h: GranularDistribution) -> Fraction:
    """Product mass landing on disjoint focal pairs."""
    check_same_frame(g.frame, h.frame)
    return sum(
        (p * q for a, p in g.focal for b, q in h.focal if not a.mask & b.mask),
        Fraction(0),
    )


def dempster_combine(g: GranularDistribution, h: GranularDistribution) -> CombinationResult:
    """Combine two independent sources.

    Raises :class:`TotalConflict` when every focal pair is disjoint; the
    exception still carries ``conflict`` (= 1) and the empty unnormalized part.
    """
    frame = check_same_frame(g.frame, h.frame)
    _, surviving = _conjunctive(g.as_mask_dict(), h.as_mask_dict())
    return _finish(frame, surviving)


def combine_n(distributions: Sequence[GranularDistribution]) -> CombinationResult:
    """Left fold of the conjunctive rule over one or more sources.

    ``conflict`` is the total conflict of the joint product, so
    ``1 - conflict`` equals the product of ``1 - K`` over the binary steps.
    On total conflict ``TotalConflict.step`` is the index of the
    distribution that drove the surviving mass to zero.
    """
    distributions = list(distributions)
    if not distributions:
        raise EmptyInput("combine_n needs at least one distribution")
    frame = check_same_frame(*(d.frame for d in distributions))
    acc = distributions[0].as_mask_dict()
    for step, dist in enumerate(distributions[1:], start=1):
        _, acc = _conjunctive(acc, dist.as_mask_dict())
        if not acc:
            raise TotalConflict(Fraction(1), (), step)
    return _finish(frame, acc)


def discount(dist: GranularDistribution, credibility: Union[Credibility, MassLike]) -> GranularDistribution:
    """Move a share ``1 - alpha`` of every mass onto the whole frame."""
    if not isinstance(credibility, Credibility):
        credibility = Credibility(parse_mass(credibility))
    alpha = credibility.alpha
    full = dist.frame.full_mask
    out = {m: alpha * p for m, p in dist.as_mask_dict().items()}
    out[full] = out.get(full, Fraction(0)) + (1 - alpha)
    return GranularDistribution.from_masks(dist.frame, out)
