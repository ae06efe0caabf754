#!/usr/bin/env python3
"""Scripted persuasion dialogue on the dental-checkup case study.

Walks the session the way a persuasion system would: inspect the ranked
move suggestions for the goal, play the best move, show how the belief
ranges tighten, then demonstrate a conflicting assertion and its
irreducible core.
"""

import argparse
import os
import sys
from fractions import Fraction

from epigraph.dialogue import DialogueSession
from epigraph.graph import load_eg
from epigraph.lang import RestrictedValueSet, fraction_str

HERE = os.path.dirname(os.path.abspath(__file__))
DEFAULT_GRAPH = os.path.join(HERE, "..", "graphs", "dental.eg")


def show_ranges(session):
    for arg, r in session.marginal_ranges().items():
        lo, hi = (fraction_str(r[0]), fraction_str(r[1]))
        print(f"  p({arg}) in [{lo}, {hi}]")


def show_moves(session):
    for m in session.suggest_moves():
        if not m.feasible:
            print(f"  {m.argument}: infeasible")
            continue
        print(f"  {m.argument}: goal in "
              f"[{fraction_str(m.pessimistic)}, {fraction_str(m.optimistic)}]")
        for w in m.warnings:
            print(f"     warning: {w}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--graph", default=DEFAULT_GRAPH)
    ap.add_argument("--pi", default="0,0.05,...,1")
    ap.add_argument("--goal", default="A")
    ns = ap.parse_args(argv)

    eg = load_eg(ns.graph)
    pi = RestrictedValueSet.parse(ns.pi)
    session = DialogueSession(eg, pi, ns.goal)

    print(f"goal: {ns.goal}; value set has {len(pi)} values")
    print("\ninitial achievable belief ranges:")
    show_ranges(session)

    print("\nranked moves for the goal:")
    show_moves(session)

    best = session.suggest_moves()[0].argument
    print(f"\nasserting p({best}) > 0.5 ...")
    session.assert_belief(best, ">", Fraction(1, 2))
    show_ranges(session)

    print(f"\nnow asserting p(B) < 0.5, contradicting the {best} link ...")
    session.assert_belief("B", "<", Fraction(1, 2))
    if session.consistent():
        print("  still consistent")
        return 0
    print("  inconsistent; irreducible core:")
    for a, cmp, x in session.conflict_core():
        print(f"    p({a}) {cmp} {fraction_str(x)}")
    session.retract("B")
    print("\nretracted p(B); consistent again:", session.consistent())
    return 0


if __name__ == "__main__":
    sys.exit(main())
