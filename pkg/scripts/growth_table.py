"""Rank and growth table for a list of presets.

    python3 scripts/growth_table.py 3CP2 "diag(1,1,-1)" S2xS2 --max-degree 10
"""
import argparse
import time

from sullivan.dichotomy import classify, growth_report
from sullivan.minimal_model import build_minimal_model, pi_ranks
from sullivan.spaces import BettiData, preset


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("presets", nargs="+")
    p.add_argument("--max-degree", type=int, default=10)
    args = p.parse_args(argv)
    N = args.max_degree
    print(f"{'space':<16} {'verdict':<13} " + " ".join(f"{k:>6}" for k in range(2, N + 1))
          + "   growth  seconds")
    for name in args.presets:
        target = preset(name)
        t0 = time.perf_counter()
        model = build_minimal_model(target, N)
        dt = time.perf_counter() - t0
        r = pi_ranks(model)
        verdict = classify(r, BettiData.of(target)).verdict if N >= r.formal_dimension else "-"
        g = growth_report(r)
        print(f"{name:<16} {verdict:<13} " + " ".join(f"{r[k]:>6}" for k in range(2, N + 1))
              + f"   {g.flag:<7} {dt:7.2f}")


if __name__ == "__main__":
    main()
