"""Regenerate tests/golden/ballbox.json. Run only when the sampling contract changes on purpose."""

import json
from pathlib import Path

from granular_evidence import Frame, make_distribution
from granular_evidence.ballbox import SimConfig, estimate_query, make_rng, sample_granule, simulate_combination

FRAME = Frame(["a", "b", "c"])
DIST = make_distribution(FRAME, [({"a"}, "1/2"), ({"a", "b"}, "1/3"), ({"a", "b", "c"}, "1/6")])
G = make_distribution(FRAME, [({"a"}, "2/3"), ({"b"}, "1/3")])
H = make_distribution(FRAME, [({"a"}, "1/3"), ({"b"}, "2/3")])


def build():
    rng = make_rng(2024)
    seq = []
    for _ in range(40):
        granule, rng = sample_granule(DIST, rng)
        seq.append("".join(granule.labels))
    return {
        "sample_sequence": {"seed": 2024, "draws": seq},
        "estimate_query": estimate_query(DIST, {"a"}, SimConfig(100_000, 7)).to_dict(),
        "simulate_combination": simulate_combination(G, H, SimConfig(100_000, 99)).to_dict(),
        "simulate_discounted": simulate_combination(
            G, H, SimConfig(100_000, 99, credibilities=("3/4", "1/2"))
        ).to_dict(),
    }


if __name__ == "__main__":
    out = Path(__file__).parent / "golden" / "ballbox.json"
    out.write_text(json.dumps(build(), indent=2) + "\n")
    print(f"wrote {out}")
