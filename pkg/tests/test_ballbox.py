import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import make_golden
from granular_evidence import Frame, GranularDistribution, belief, dempster_combine, discount, make_distribution
from granular_evidence.ballbox import (
    SimConfig,
    _uniform_below,
    estimate_query,
    make_rng,
    sample_granule,
    simulate_combination,
)
from granular_evidence.errors import FrameMismatch, UnknownElement

ABC = Frame(["a", "b", "c"])
GOLDEN = json.loads((Path(__file__).parent / "golden" / "ballbox.json").read_text())


def test_golden_sequences():
    assert make_golden.build() == GOLDEN


class TestSampleGranule:
    def test_degenerate(self):
        v = GranularDistribution.vacuous(ABC)
        rng = make_rng(1)
        for _ in range(20):
            g, rng = sample_granule(v, rng)
            assert g == ABC.whole()

    def test_deterministic(self):
        d = make_distribution(ABC, [({"a"}, "1/2"), ({"b"}, "1/2")])

        def run():
            rng = make_rng(5)
            out = []
            for _ in range(30):
                g, rng = sample_granule(d, rng)
                out.append(g)
            return out

        assert run() == run()

    def test_frequency(self):
        d = make_distribution(Frame(["a", "b"]), [("a", "2/3"), ("b", "1/3")])
        # one-off sigma for 90k draws at p = 2/3 is about 0.0016
        rep = estimate_query(d, {"a"}, SimConfig(90_000, 3))
        assert abs(rep.empirical_belief - 2 / 3) <= 0.01


def test_uniform_below_big_bound():
    bound = (1 << 80) + 12345
    xs = _uniform_below(make_rng(0), bound, 200)
    assert all(0 <= x < bound for x in xs)
    assert len(set(xs)) == 200


def test_huge_denominator_sampling():
    p = Fraction(1, (1 << 70) + 1)
    d = GranularDistribution.from_masks(ABC, {1: p, 2: 1 - p})
    rep = estimate_query(d, {"b"}, SimConfig(2000, 1))
    assert rep.belief_count == 2000


class TestEstimateQuery:
    def test_vacuous_exact(self):
        v = GranularDistribution.vacuous(ABC)
        for seed in (0, 1, 2):
            rep = estimate_query(v, {"a", "b"}, SimConfig(5000, seed))
            assert rep.empirical_belief == 0 and rep.empirical_possibility == 1

    def test_whole_query_exact(self):
        d = make_distribution(ABC, [({"a"}, "1/2"), ({"b", "c"}, "1/2")])
        rep = estimate_query(d, ABC.elements, SimConfig(5000, 4))
        assert rep.empirical_belief == 1 and rep.empirical_possibility == 1

    def test_convergence(self):
        d = make_distribution(ABC, [({"a"}, "1/2"), ({"a", "b"}, "1/2")])
        rep = estimate_query(d, {"a"}, SimConfig(200_000, 12))
        assert abs(rep.empirical_belief - float(belief(d, {"a"}))) <= 0.01

    def test_unknown_element(self):
        with pytest.raises(UnknownElement):
            estimate_query(GranularDistribution.vacuous(ABC), {"z"}, SimConfig(10, 0))


class TestSimulateCombination:
    def test_paper_pair(self, paper_pair):
        rep = simulate_combination(*paper_pair, SimConfig(200_000, 21))
        assert abs(rep.empirical_conflict_rate - 5 / 9) <= 0.01
        freq = {g.labels: f for g, f in rep.empirical_combined.items()}
        assert abs(freq[("a",)] - 0.5) <= 0.015 and abs(freq[("b",)] - 0.5) <= 0.015
        assert rep.samples_kept + rep.rejected == rep.samples

    def test_total_conflict(self):
        g = make_distribution(ABC, [({"a"}, 1)])
        h = make_distribution(ABC, [({"b"}, 1)])
        rep = simulate_combination(g, h, SimConfig(1000, 0))
        assert rep.empirical_conflict_rate == 1
        assert rep.all_rejected and rep.empirical_combined == {}

    def test_vacuous_identity(self):
        g = make_distribution(ABC, [({"a"}, "1/4"), ({"b", "c"}, "3/4")])
        rep = simulate_combination(g, GranularDistribution.vacuous(ABC), SimConfig(50_000, 2, credibilities=(1, 1)))
        assert rep.empirical_conflict_rate == 0
        for gr, f in rep.empirical_combined.items():
            assert abs(f - float(g.mass_of(gr.labels))) <= 0.01

    def test_discounting_converges(self, paper_pair):
        g, h = paper_pair
        cfg = SimConfig(200_000, 33, credibilities=("3/4", "1/2"))
        rep = simulate_combination(g, h, cfg)
        exact = dempster_combine(discount(g, "3/4"), discount(h, "1/2"))
        assert abs(rep.empirical_conflict_rate - float(exact.conflict)) <= 0.01
        for gr, m in exact.normalized.focal:
            assert abs(rep.empirical_combined.get(gr, 0.0) - float(m)) <= 0.01

    def test_worker_count_irrelevant(self, paper_pair):
        a = simulate_combination(*paper_pair, SimConfig(100_000, 5, workers=1))
        b = simulate_combination(*paper_pair, SimConfig(100_000, 5, workers=4))
        assert a == b

    def test_frame_mismatch(self):
        with pytest.raises(FrameMismatch):
            simulate_combination(
                GranularDistribution.vacuous(ABC), GranularDistribution.vacuous(Frame(["a"])), SimConfig(10, 0)
            )


@pytest.mark.parametrize("kwargs", [dict(samples=0, seed=0), dict(samples=1, seed=-1), dict(samples=1, seed=1 << 64)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SimConfig(**kwargs)


def test_seed_changes_stream():
    d = make_distribution(ABC, [({"a"}, "1/2"), ({"b"}, "1/2")])
    a = estimate_query(d, {"a"}, SimConfig(1000, 1))
    b = estimate_query(d, {"a"}, SimConfig(1000, 2))
    assert a != b
    assert np.isclose(a.empirical_belief, 0.5, atol=0.06)
