import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from granular_evidence import Frame, GranularDistribution, GranularRelation

LABELS = "abcde"

_acceptance_lines = []


def record_criterion(line):
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def random_distribution(rng, frame, max_focals=4, max_den=6):
    """Distinct nonempty focals with masses on a common denominator <= max_den."""
    n = len(frame)
    k = rng.randint(1, min(max_focals, 2**n - 1))
    den = rng.randint(k, max(k, max_den)) if k <= max_den else k
    masks = rng.sample(range(1, 2**n), k)
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return GranularDistribution.from_masks(frame, {m: Fraction(p, den) for m, p in zip(masks, parts)})


def random_frame(rng, max_size=5):
    return Frame(LABELS[: rng.randint(1, max_size)])


def random_relation(rng, frame, columns=("X", "Y"), max_rows=50):
    n_rows = rng.randint(1, max_rows)
    full = 2 ** len(frame) - 1
    rows = [
        (f"x{k}", [frame.labels_of(rng.randint(1, full)) for _ in columns])
        for k in range(n_rows)
    ]
    return GranularRelation.from_labels(frame, columns, rows)


@st.composite
def distributions(draw, frame=None, max_focals=4, max_den=12):
    if frame is None:
        frame = Frame(LABELS[: draw(st.integers(1, 4))])
    full = 2 ** len(frame) - 1
    masks = draw(st.lists(st.integers(1, full), min_size=1, max_size=min(max_focals, full), unique=True))
    weights = draw(st.lists(st.integers(1, max_den), min_size=len(masks), max_size=len(masks)))
    total = sum(weights)
    return GranularDistribution.from_masks(frame, {m: Fraction(w, total) for m, w in zip(masks, weights)})


@st.composite
def frames_and_queries(draw):
    frame = Frame(LABELS[: draw(st.integers(1, 4))])
    q = draw(st.sets(st.sampled_from(frame.elements)))
    return frame, q


@pytest.fixture
def paper_pair():
    frame = Frame(["a", "b"])
    from granular_evidence import make_distribution

    g = make_distribution(frame, [({"a"}, "2/3"), ({"b"}, "1/3")])
    h = make_distribution(frame, [({"a"}, "1/3"), ({"b"}, "2/3")])
    return g, h


@pytest.fixture
def rng():
    return random.Random(20240917)
