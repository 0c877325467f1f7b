"""Recompute the frozen regression baselines under tests/baselines/.

    python3 scripts/compute_baselines.py [--max-degree 12]

The #3CP² table comes from a full exact-elimination model build; before
writing, it is compared against the independent loop-space series oracle.
"""
import argparse
import json
import sys
import time
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import loop_space_ranks  # noqa: E402
from sullivan.dichotomy import growth_report  # noqa: E402
from sullivan.minimal_model import build_minimal_model, pi_ranks  # noqa: E402
from sullivan.spaces import preset  # noqa: E402


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--max-degree", type=int, default=12)
    p.add_argument("--out", type=Path, default=ROOT / "tests" / "baselines" / "3cp2_ranks.json")
    args = p.parse_args(argv)
    N = args.max_degree

    t0 = time.perf_counter()
    model = build_minimal_model(preset("3CP2"), N)
    seconds = time.perf_counter() - t0
    ranks = pi_ranks(model)
    oracle = loop_space_ranks(3, N)
    built = {k: ranks[k] for k in range(2, N + 1)}
    if built != oracle:
        raise SystemExit(f"model build disagrees with the loop-space oracle:\n{built}\n{oracle}")
    g = growth_report(ranks)
    doc = {
        "space": "3CP2",
        "truncation": N,
        "ranks": list(ranks.ranks),
        "cumulative": g.cumulative,
        "ratios": [None if r is None else str(r) for r in g.ratios],
        "strictly_increasing_from": g.strictly_increasing_from,
        "build_seconds": round(seconds, 2),
    }
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(doc, indent=2) + "\n")
    print(f"wrote {args.out} (build {seconds:.1f}s, certified: {model.certificate.ok})")


if __name__ == "__main__":
    main()
