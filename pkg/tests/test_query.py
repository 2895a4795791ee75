import random
from fractions import Fraction

import pytest
from hypothesis import given

import oracles
from conftest import distributions, random_frame, random_relation
from granular_evidence import (
    Frame,
    GranularDistribution,
    GranularRelation,
    belief,
    make_distribution,
    necessity_possibility_rel,
    plausibility,
    summarize,
)
from granular_evidence.errors import UnknownColumn, UnknownElement

ABC = Frame(["a", "b", "c"])


def test_row_scan_example():
    cells = [{"a"}, {"a", "b"}, {"b", "c"}, {"c"}]
    rel = GranularRelation.from_labels(ABC, ["s"], [(f"x{k}", [c]) for k, c in enumerate(cells)])
    assert oracles.row_scan(cells, {"a", "b"}) == (2, 3)
    res = necessity_possibility_rel(rel, "s", {"a", "b"})
    assert (res.necessity, res.possibility) == (Fraction(1, 2), Fraction(3, 4))
    assert (res.certain_count, res.possible_count, res.total) == (2, 3, 4)


def test_forced_values_on_empty_and_whole_query():
    r = random.Random(3)
    for _ in range(20):
        frame = random_frame(r)
        rel = random_relation(r, frame)
        whole = necessity_possibility_rel(rel, "X", frame.elements)
        empty = necessity_possibility_rel(rel, "X", [])
        assert (whole.necessity, whole.possibility) == (1, 1)
        assert (empty.necessity, empty.possibility) == (0, 0)


def test_mass_sum_examples():
    d = make_distribution(ABC, [({"a"}, "1/2"), ({"a", "b"}, "1/2")])
    ref = oracles.as_sets(d)
    assert oracles.bel(ref, {"a"}) == Fraction(1, 2) and oracles.pl(ref, {"a"}) == 1
    assert belief(d, {"a"}) == Fraction(1, 2)
    assert plausibility(d, {"a"}) == 1


def test_vacuous():
    v = GranularDistribution.vacuous(ABC)
    for q in oracles.powerset(ABC.elements):
        if q and q != frozenset(ABC.elements):
            assert belief(v, q) == 0 and plausibility(v, q) == 1


def test_paper_g():
    ab = Frame(["a", "b"])
    g = make_distribution(ab, [({"a"}, "2/3"), ({"b"}, "1/3")])
    assert oracles.bel(oracles.as_sets(g), {"a"}) == Fraction(2, 3)
    assert belief(g, {"a"}) == Fraction(2, 3) and plausibility(g, {"a"}) == Fraction(2, 3)


def test_errors():
    d = GranularDistribution.vacuous(ABC)
    with pytest.raises(UnknownElement):
        belief(d, {"z"})
    rel = GranularRelation.from_labels(ABC, ["s"], [("x", [{"a"}])])
    with pytest.raises(UnknownColumn):
        necessity_possibility_rel(rel, "t", {"a"})
    with pytest.raises(UnknownElement):
        necessity_possibility_rel(rel, "s", {"q"})


@given(distributions())
def test_duality_monotonicity_sandwich(d):
    elements = d.frame.elements
    subsets = list(oracles.powerset(elements))
    ref = oracles.as_sets(d)
    for q in subsets:
        comp = frozenset(elements) - q
        assert plausibility(d, q) == 1 - belief(d, comp)
        assert belief(d, q) <= plausibility(d, q)
        assert belief(d, q) == oracles.bel(ref, q)
        assert plausibility(d, q) == oracles.pl(ref, q)
    for q1 in subsets:
        for q2 in subsets:
            if q1 <= q2:
                assert belief(d, q1) <= belief(d, q2)
                assert plausibility(d, q1) <= plausibility(d, q2)


def test_counting_matches_formula():
    r = random.Random(17)
    for _ in range(200):
        frame = random_frame(r)
        rel = random_relation(r, frame)
        q = {x for x in frame if r.random() < 0.5}
        res = necessity_possibility_rel(rel, "Y", q)
        d = summarize(rel, "Y")
        assert (res.necessity, res.possibility) == (belief(d, q), plausibility(d, q))
