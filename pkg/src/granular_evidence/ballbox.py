"""Monte Carlo ball-box simulation of belief, plausibility and combination.

A distribution is a box of balls, each labelled with a granule in
proportion to its mass. Belief of Q is the share of balls whose label
lies inside Q, plausibility the share whose label meets Q. Combining two
boxes draws one ball from each independently and rejects pairs with
disjoint labels; the kept pairs estimate the normalized combination.
A source of credibility alpha keeps its ball's label with probability
alpha and relabels it with the whole frame otherwise.

Random numbers come from numpy's PCG64. Sampling is split into fixed-size
chunks; chunk ``k`` of a run seeded with ``seed`` uses the stream
``SeedSequence(seed, spawn_key=(k,))``, so reports depend only on the
configuration, never on the number of workers.
"""

from __future__ import annotations

import bisect
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .combination import Credibility
from .core import Granule, GranularDistribution, check_same_frame, parse_mass

CHUNK_SIZE = 1 << 15
_INT64_MAX = (1 << 63) - 1


@dataclass(frozen=True)
class SimConfig:
    samples: int
    seed: int
    credibilities: Optional[tuple[Credibility, Credibility]] = None
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.credibilities is not None:
            creds = tuple(c if isinstance(c, Credibility) else Credibility(parse_mass(c)) for c in self.credibilities)
            if len(creds) != 2:
                raise ValueError("credibilities must be a pair")
            object.__setattr__(self, "credibilities", creds)


@dataclass(frozen=True)
class SimReport:
    samples: int
    belief_count: Optional[int] = None
    possibility_count: Optional[int] = None
    rejected: Optional[int] = None
    combined_counts: dict[Granule, int] = field(default_factory=dict)

    @property
    def empirical_belief(self) -> Optional[float]:
        return None if self.belief_count is None else self.belief_count / self.samples

    @property
    def empirical_possibility(self) -> Optional[float]:
        return None if self.possibility_count is None else self.possibility_count / self.samples

    @property
    def samples_kept(self) -> Optional[int]:
        return None if self.rejected is None else self.samples - self.rejected

    @property
    def empirical_conflict_rate(self) -> Optional[float]:
        return None if self.rejected is None else self.rejected / self.samples

    @property
    def all_rejected(self) -> bool:
        return self.rejected is not None and self.rejected == self.samples

    @property
    def empirical_combined(self) -> dict[Granule, float]:
        kept = self.samples_kept
        if not kept:
            return {}
        return {g: c / kept for g, c in self.combined_counts.items()}

    def to_dict(self) -> dict:
        out: dict = {"samples": self.samples}
        if self.belief_count is not None:
            out.update(
                belief_count=self.belief_count,
                possibility_count=self.possibility_count,
                empirical_belief=self.empirical_belief,
                empirical_possibility=self.empirical_possibility,
            )
        if self.rejected is not None:
            out.update(
                samples_kept=self.samples_kept,
                rejected=self.rejected,
                empirical_conflict_rate=self.empirical_conflict_rate,
                all_rejected=self.all_rejected,
                empirical_combined=[
                    {"set": list(g.labels), "count": self.combined_counts[g], "frequency": f}
                    for g, f in self.empirical_combined.items()
                ],
            )
        return out


class _Urn:
    """Integer cumulative counts of a distribution scaled to a common denominator."""

    def __init__(self, dist: GranularDistribution):
        self.dist = dist
        self.denominator = math.lcm(*(m.denominator for m in dist.masses))
        self.cumulative = list(itertools.accumulate(int(m * self.denominator) for m in dist.masses))

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Focal indices, index k with probability exactly mass_k."""
        u = _uniform_below(rng, self.denominator, size)
        if self.denominator <= _INT64_MAX:
            return np.searchsorted(np.asarray(self.cumulative, dtype=np.int64), u, side="right")
        return np.array([bisect.bisect_right(self.cumulative, x) for x in u], dtype=np.int64)


def _uniform_below(rng: np.random.Generator, bound: int, size: int) -> np.ndarray:
    """Exactly uniform integers in [0, bound), including bounds beyond int64."""
    if bound <= _INT64_MAX:
        return rng.integers(0, bound, size=size, dtype=np.int64)
    words = -(-bound.bit_length() // 64)
    span = 1 << (64 * words)
    limit = span - span % bound
    out = np.empty(size, dtype=object)
    k = 0
    while k < size:
        x = 0
        for w in rng.integers(0, 1 << 64, size=words, dtype=np.uint64):
            x = (x << 64) | int(w)
        if x < limit:
            out[k] = x % bound
            k += 1
    return out


def _keep_mask(rng: np.random.Generator, credibility: Optional[Credibility], size: int) -> Optional[np.ndarray]:
    """True where a drawn label survives; None means full credibility."""
    if credibility is None or credibility.alpha == 1:
        return None
    alpha = credibility.alpha
    return _uniform_below(rng, alpha.denominator, size) < alpha.numerator


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(chunk,))))


def _chunks(samples: int) -> list[tuple[int, int]]:
    return [(k, min(CHUNK_SIZE, samples - k * CHUNK_SIZE)) for k in range(-(-samples // CHUNK_SIZE))]


def _run_chunks(fn, cfg: SimConfig):
    chunks = _chunks(cfg.samples)
    if cfg.workers == 1 or len(chunks) == 1:
        return [fn(k, size) for k, size in chunks]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        return list(pool.map(lambda c: fn(*c), chunks))


def sample_granule(dist: GranularDistribution, rng: np.random.Generator) -> tuple[Granule, np.random.Generator]:
    """Draw one ball; returns the granule and the (advanced) generator."""
    idx = int(_Urn(dist).draw(rng, 1)[0])
    return dist.focal[idx][0], rng


def make_rng(seed: int) -> np.random.Generator:
    """Generator for chunk 0 of ``seed``; the stream :func:`sample_granule` users should start from."""
    return _chunk_rng(seed, 0)


def estimate_query(dist: GranularDistribution, query: Iterable[str], cfg: SimConfig) -> SimReport:
    q = dist.frame.mask_of(query)
    urn = _Urn(dist)
    inside = np.array([g.mask & ~q == 0 for g in dist.granules])
    meets = np.array([bool(g.mask & q) for g in dist.granules])
    cred = cfg.credibilities[0] if cfg.credibilities else None
    whole = dist.frame.full_mask

    def run(chunk: int, size: int):
        rng = _chunk_rng(cfg.seed, chunk)
        idx = urn.draw(rng, size)
        ins, met = inside[idx], meets[idx]
        keep = _keep_mask(rng, cred, size)
        if keep is not None:
            # relabelled balls carry the whole frame
            ins = np.where(keep, ins, whole & ~q == 0)
            met = np.where(keep, met, bool(whole & q))
        return int(ins.sum()), int(met.sum())

    parts = _run_chunks(run, cfg)
    return SimReport(
        samples=cfg.samples,
        belief_count=sum(b for b, _ in parts),
        possibility_count=sum(p for _, p in parts),
    )


def simulate_combination(g: GranularDistribution, h: GranularDistribution, cfg: SimConfig) -> SimReport:
    """Independent draws from both boxes, rejecting pairs with disjoint labels.

    With total conflict every pair is rejected; the report then has
    ``all_rejected`` set and an empty ``empirical_combined``.
    """
    frame = check_same_frame(g.frame, h.frame)
    urn_g, urn_h = _Urn(g), _Urn(h)
    cred_g, cred_h = cfg.credibilities if cfg.credibilities else (None, None)
    # index len(focal) stands for a ball relabelled with the whole frame
    masks_g = [x.mask for x in g.granules] + [frame.full_mask]
    masks_h = [x.mask for x in h.granules] + [frame.full_mask]
    n_h = len(masks_h)
    table = np.array([a & b for a in masks_g for b in masks_h], dtype=object)
    n_pairs = len(table)

    def run(chunk: int, size: int):
        rng = _chunk_rng(cfg.seed, chunk)
        i = urn_g.draw(rng, size)
        j = urn_h.draw(rng, size)
        keep_g = _keep_mask(rng, cred_g, size)
        keep_h = _keep_mask(rng, cred_h, size)
        if keep_g is not None:
            i = np.where(keep_g, i, len(g.focal))
        if keep_h is not None:
            j = np.where(keep_h, j, len(h.focal))
        return np.bincount(i * n_h + j, minlength=n_pairs)

    pair_counts = sum(_run_chunks(run, cfg))
    rejected = 0
    combined: dict[int, int] = {}
    for k, count in enumerate(pair_counts.tolist()):
        if not count:
            continue
        c = table[k]
        if c:
            combined[c] = combined.get(c, 0) + count
        else:
            rejected += count
    return SimReport(
        samples=cfg.samples,
        rejected=rejected,
        combined_counts={Granule(frame, m): combined[m] for m in sorted(combined)},
    )

