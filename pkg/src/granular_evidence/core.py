"""Exact value types: frames, granules, rational masses and distributions.

Granules are bit masks over the frame's canonical element order, so set
algebra is integer arithmetic. Masses are :class:`fractions.Fraction`
everywhere; no floating point enters this module.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
    EmptyGranule,
    FrameMismatch,
    InvalidFrame,
    InvalidMass,
    MassNotOne,
    NonPositiveMass,
    TooLarge,
    UnknownElement,
)

MassLike = Union[str, int, Fraction, Decimal]

# Practical cap on frame size; raise it with set_frame_size_limit().
_frame_size_limit = 64

_RATIO_RE = re.compile(r"[+-]?\d+/\d+")
_DECIMAL_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)")


def set_frame_size_limit(limit: int) -> int:
    """Set the maximum number of frame elements; returns the previous limit."""
    global _frame_size_limit
    if limit < 1:
        raise ValueError("frame size limit must be positive")
    previous, _frame_size_limit = _frame_size_limit, int(limit)
    return previous


def frame_size_limit() -> int:
    return _frame_size_limit


def parse_mass(value: MassLike) -> Fraction:
    """Convert ``"p/q"``, a finite decimal string, an int, Fraction or Decimal exactly.

    Floats are refused: their binary expansion would silently change the value.
    """
    if isinstance(value, bool):
        raise InvalidMass(f"not a mass: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        if isinstance(value, Decimal) and not value.is_finite():
            raise InvalidMass(f"not a finite mass: {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if _RATIO_RE.fullmatch(text):
            num, den = text.split("/")
            if int(den) == 0:
                raise InvalidMass(f"zero denominator in {value!r}")
            return Fraction(int(num), int(den))
        if _DECIMAL_RE.fullmatch(text):
            return Fraction(text)
        raise InvalidMass(f"expected 'p/q' or a finite decimal, got {value!r}")
    raise InvalidMass(f"unsupported mass type {type(value).__name__}: {value!r}")


def format_mass(value: Fraction) -> str:
    """Serialize a rational as ``p/q``, always with an explicit denominator."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


class Frame:
    """Finite, ordered universe of opaque string labels."""

    __slots__ = ("_elements", "_index")

    def __init__(self, elements: Iterable[str]):
        elements = tuple(elements)
        if not elements:
            raise InvalidFrame("frame must contain at least one element")
        for label in elements:
            if not isinstance(label, str):
                raise InvalidFrame(f"frame labels must be strings, got {label!r}")
        if len(set(elements)) != len(elements):
            seen: set[str] = set()
            dup = next(x for x in elements if x in seen or seen.add(x))
            raise InvalidFrame(f"duplicate frame element {dup!r}")
        if len(elements) > _frame_size_limit:
            raise TooLarge(
                f"frame has {len(elements)} elements; limit is {_frame_size_limit}"
            )
        self._elements = elements
        self._index = {label: i for i, label in enumerate(elements)}

    @property
    def elements(self) -> tuple[str, ...]:
        return self._elements

    @property
    def full_mask(self) -> int:
        return (1 << len(self._elements)) - 1

    def __len__(self) -> int:
        return len(self._elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self._elements)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Frame):
            return NotImplemented
        return self._elements == other._elements

    def __hash__(self) -> int:
        return hash(self._elements)

    def __repr__(self) -> str:
        return f"Frame({list(self._elements)!r})"

    def mask_of(self, labels: Iterable[str]) -> int:
        """Bit mask for a label set; the empty set maps to 0."""
        if isinstance(labels, str):
            labels = [labels]
        mask = 0
        for label in labels:
            try:
                mask |= 1 << self._index[label]
            except KeyError:
                raise UnknownElement(f"{label!r} is not in frame {list(self._elements)}") from None
        return mask

    def labels_of(self, mask: int) -> tuple[str, ...]:
        return tuple(label for i, label in enumerate(self._elements) if mask >> i & 1)

    def granule(self, labels: Iterable[str]) -> "Granule":
        return Granule(self, self.mask_of(labels))

    def whole(self) -> "Granule":
        return Granule(self, self.full_mask)


@dataclass(frozen=True, order=False)
class Granule:
    """Nonempty subset of a frame, stored as a membership mask."""

    frame: Frame
    mask: int

    def __post_init__(self):
        if self.mask <= 0:
            raise EmptyGranule("granules must be nonempty")
        if self.mask > self.frame.full_mask:
            raise UnknownElement("granule mask has bits outside the frame")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.frame.labels_of(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, label: str) -> bool:
        return bool(self.frame.mask_of([label]) & self.mask)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __repr__(self) -> str:
        return "{" + ",".join(self.labels) + "}"


def _same_frame(a: Frame, b: Frame) -> None:
    if a != b:
        raise FrameMismatch(f"frames differ: {list(a)} vs {list(b)}")


def subset_of(g1: Granule, g2: Granule) -> bool:
    _same_frame(g1.frame, g2.frame)
    return g1.mask & ~g2.mask == 0


def intersect(g1: Granule, g2: Granule) -> frozenset[str]:
    """Intersection as a (possibly empty) label set."""
    _same_frame(g1.frame, g2.frame)
    return frozenset(g1.frame.labels_of(g1.mask & g2.mask))


def is_disjoint(g1: Granule, g2: Granule) -> bool:
    _same_frame(g1.frame, g2.frame)
    return g1.mask & g2.mask == 0


@dataclass(frozen=True)
class GranularDistribution:
    """Focal granules with positive rational masses summing to exactly 1.

    ``focal`` is kept sorted by granule mask, which makes equality structural.
    Use :func:`make_distribution` or :meth:`from_masks` rather than building
    one directly.
    """

    frame: Frame
    focal: tuple[tuple[Granule, Fraction], ...]
    _by_mask: Mapping[int, Fraction] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_mask: dict[int, Fraction] = {}
        total = Fraction(0)
        for granule, mass in self.focal:
            if granule.frame != self.frame:
                raise FrameMismatch("focal granule over a different frame")
            if granule.mask in by_mask:
                raise ValueError(f"duplicate focal granule {granule!r}")
            if mass <= 0:
                raise NonPositiveMass(f"mass of {granule!r} is {mass}, must be > 0")
            by_mask[granule.mask] = mass
            total += mass
        if total != 1:
            raise MassNotOne(f"masses sum to {total}, not 1")
        if [g.mask for g, _ in self.focal] != sorted(by_mask):
            raise ValueError("focal granules must be in canonical (mask) order")
        object.__setattr__(self, "_by_mask", by_mask)

    @classmethod
    def from_masks(cls, frame: Frame, masses: Mapping[int, Fraction]) -> "GranularDistribution":
        """Build from ``{mask: mass}``; zero masses are dropped."""
        focal = tuple(
            (Granule(frame, mask), Fraction(m)) for mask, m in sorted(masses.items()) if m != 0
        )
        return cls(frame, focal)

    @classmethod
    def vacuous(cls, frame: Frame) -> "GranularDistribution":
        return cls(frame, ((frame.whole(), Fraction(1)),))

    @property
    def granules(self) -> tuple[Granule, ...]:
        return tuple(g for g, _ in self.focal)

    @property
    def masses(self) -> tuple[Fraction, ...]:
        return tuple(m for _, m in self.focal)

    def mass_of(self, labels: Iterable[str]) -> Fraction:
        return self._by_mask.get(self.frame.mask_of(labels), Fraction(0))

    def as_mask_dict(self) -> dict[int, Fraction]:
        return dict(self._by_mask)

    def is_vacuous(self) -> bool:
        return len(self.focal) == 1 and self.focal[0][0].mask == self.frame.full_mask

    def __len__(self) -> int:
        return len(self.focal)

    def __repr__(self) -> str:
        body = ", ".join(f"({g!r}, {format_mass(m)})" for g, m in self.focal)
        return f"GranularDistribution([{body}])"

    def to_dict(self) -> dict:
        return distribution_to_dict(self)


def make_distribution(
    frame: Frame, entries: Iterable[tuple[Iterable[str], MassLike]]
) -> GranularDistribution:
    """Build a canonical distribution, merging duplicate granules by summing.

    >>> d = make_distribution(Frame("ab"), [({"a"}, "2/3"), ({"b"}, "1/3")])
    >>> [str(m) for m in d.masses]
    ['2/3', '1/3']
    """
    merged: dict[int, Fraction] = {}
    for k, (labels, raw) in enumerate(entries):
        labels = [labels] if isinstance(labels, str) else list(labels)
        if not labels:
            raise EmptyGranule(f"entry {k}: focal set is empty")
        try:
            mask = frame.mask_of(labels)
        except UnknownElement as exc:
            raise UnknownElement(f"entry {k}: {exc}") from None
        try:
            mass = parse_mass(raw)
        except InvalidMass as exc:
            raise InvalidMass(f"entry {k}: {exc}") from None
        if mass <= 0:
            raise NonPositiveMass(f"entry {k}: mass {raw!r} is not strictly positive")
        merged[mask] = merged.get(mask, Fraction(0)) + mass
    total = sum(merged.values(), Fraction(0))
    if total != 1:
        raise MassNotOne(f"masses sum to {total}, not exactly 1")
    return GranularDistribution.from_masks(frame, merged)


def distribution_to_dict(dist: GranularDistribution) -> dict:
    return {
        "universe": list(dist.frame.elements),
        "focal": [{"set": list(g.labels), "mass": format_mass(m)} for g, m in dist.focal],
    }


def distribution_from_dict(data: Mapping) -> GranularDistribution:
    try:
        universe = data["universe"]
        focal = data["focal"]
    except (KeyError, TypeError):
        raise InvalidMass("distribution JSON needs 'universe' and 'focal' keys") from None
    if not isinstance(universe, list) or not isinstance(focal, list):
        raise InvalidMass("'universe' and 'focal' must be lists")
    entries = []
    for k, item in enumerate(focal):
        if not isinstance(item, Mapping) or "set" not in item or "mass" not in item:
            raise InvalidMass(f"focal entry {k} needs 'set' and 'mass'")
        if not isinstance(item["set"], list):
            raise InvalidMass(f"focal entry {k}: 'set' must be a list of labels")
        entries.append((item["set"], item["mass"]))
    return make_distribution(Frame(universe), entries)


def dumps_distribution(dist: GranularDistribution, **kwargs) -> str:
    return json.dumps(distribution_to_dict(dist), **kwargs)


def loads_distribution(text: str) -> GranularDistribution:
    return distribution_from_dict(json.loads(text))


def check_same_frame(*frames: Frame) -> Frame:
    first = frames[0]
    for other in frames[1:]:
        _same_frame(first, other)
    return first

