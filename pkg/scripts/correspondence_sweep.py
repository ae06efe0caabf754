#!/usr/bin/env python3
"""Randomized check that framework translations preserve semantics.

Generates random dialectical frameworks with read-once acceptance
conditions, translates each into an epistemic graph, and compares the
labelings read off the ternary satisfying distributions against the
brute-force reference solver (complete, preferred, grounded).
"""

import argparse
import random
import sys
import time

from epigraph.lang import Arg, Bot, Conj, Disj, Neg, Top, pretty_term
from epigraph.translate import Adf, adf_correspondence

NAMES = ("A", "B", "C", "D", "E")


def read_once_tree(rng, leaves):
    if len(leaves) == 1:
        t = leaves[0]
        return Neg(t) if rng.random() < 0.4 else t
    k = rng.randint(1, len(leaves) - 1)
    cls = Conj if rng.random() < 0.5 else Disj
    out = cls(read_once_tree(rng, leaves[:k]), read_once_tree(rng, leaves[k:]))
    return Neg(out) if rng.random() < 0.2 else out


def random_adf(rng, max_args):
    n = rng.randint(1, max_args)
    names = NAMES[:n]
    conds = {}
    for a in names:
        leaves = [Arg(x) for x in names if rng.random() < 0.6]
        if not leaves:
            leaves = [Top() if rng.random() < 0.5 else Bot()]
        rng.shuffle(leaves)
        conds[a] = read_once_tree(rng, leaves)
    return Adf(tuple(names), conds)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--max-args", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--verbose", action="store_true")
    ns = ap.parse_args(argv)

    rng = random.Random(ns.seed)
    t0 = time.monotonic()
    failures = 0
    for i in range(ns.count):
        adf = random_adf(rng, ns.max_args)
        r = adf_correspondence(adf)
        ok = (r["complete_match"] and r["preferred_match"]
              and r["grounded_match"])
        if ns.verbose or not ok:
            conds = "; ".join(f"{a}: {pretty_term(c)}"
                              for a, c in adf.conditions.items())
            print(f"[{i:3d}] {'ok ' if ok else 'FAIL'} {conds}")
        failures += not ok
    dt = time.monotonic() - t0
    print(f"{ns.count - failures}/{ns.count} matched in {dt:.2f}s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
