"""Epistemic semantics: satisfaction plus extremal selection under the
acceptance, rejection, undecided, information and belief orderings, entropy,
and marginal-based distribution properties.

Everything except entropy is exact; entropy is base-2 floating point with a
1e-9 comparison tolerance, so equal-entropy distributions are treated as
equivalent under the belief ordering and both survive extremal selection.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .dist import BeliefDistribution, sat_restricted
from .graph import EpistemicGraph
from .lang import RestrictedValueSet

ORDERINGS = ("A", "R", "U", "I", "B")
ENTROPY_TOL = 1e-9

_HALF = Fraction(1, 2)


def believed(p: BeliefDistribution) -> frozenset[int]:
    return frozenset(i for i in range(p.n) if p.marginal(i) > _HALF)


def rejected(p: BeliefDistribution) -> frozenset[int]:
    return frozenset(i for i in range(p.n) if p.marginal(i) < _HALF)


def undecided(p: BeliefDistribution) -> frozenset[int]:
    return frozenset(i for i in range(p.n) if p.marginal(i) == _HALF)


def entropy(p: BeliefDistribution) -> float:
    """Shannon entropy in bits; zero-mass worlds contribute nothing."""
    return -sum(float(m) * math.log2(float(m)) for m in p.masses if m > 0)


def _leq(p: BeliefDistribution, q: BeliefDistribution, ordering: str) -> bool:
    if ordering == "A":
        return believed(p) <= believed(q)
    if ordering == "R":
        return rejected(p) <= rejected(q)
    if ordering == "U":
        return undecided(p) <= undecided(q)
    if ordering == "I":
        return believed(p) <= believed(q) and rejected(p) <= rejected(q)
    if ordering == "B":
        # higher entropy sits lower in the ordering
        return entropy(q) <= entropy(p) + ENTROPY_TOL
    raise ValueError(f"unknown ordering {ordering!r}")


def compare_dists(p: BeliefDistribution, q: BeliefDistribution,
                  ordering: str) -> str:
    """'equivalent', 'less-or-equal', 'greater-or-equal' or 'incomparable'."""
    if p.n != q.n:
        raise ValueError("distributions over different argument universes")
    le, ge = _leq(p, q, ordering), _leq(q, p, ordering)
    if le and ge:
        return "equivalent"
    if le:
        return "less-or-equal"
    if ge:
        return "greater-or-equal"
    return "incomparable"


def select_extreme(
    dists: Sequence[BeliefDistribution], ordering: str, direction: str
) -> tuple[BeliefDistribution, ...]:
    """Members with no strictly greater (max) or smaller (min) element."""
    if direction not in ("max", "min"):
        raise ValueError("direction is 'max' or 'min'")

    def dominated(p: BeliefDistribution) -> bool:
        for q in dists:
            if q is p:
                continue
            if direction == "max":
                strict = _leq(p, q, ordering) and not _leq(q, p, ordering)
            else:
                strict = _leq(q, p, ordering) and not _leq(p, q, ordering)
            if strict:
                return True
        return False

    return tuple(p for p in dists if not dominated(p))


def satisfaction_semantics(
    eg: EpistemicGraph, pi: RestrictedValueSet, cap_override: bool = False
) -> tuple[BeliefDistribution, ...]:
    return sat_restricted(eg.constraints, eg.args, pi, cap_override)


def distribution_properties(p: BeliefDistribution) -> dict:
    marginals = p.marginals()
    vals = set(marginals)
    return {
        "minimal": all(m == 0 for m in marginals),
        "maximal": all(m == 1 for m in marginals),
        "neutral": all(m == _HALF for m in marginals),
        "ternary": all(m in (Fraction(0), _HALF, Fraction(1)) for m in marginals),
        "non-neutral": all(m != _HALF for m in marginals),
        "n-valued": len(vals),
    }


FILTERS = ("minimal", "maximal", "neutral", "ternary", "non-neutral")


def filter_distributions(
    dists: Iterable[BeliefDistribution], names: Sequence[str]
) -> tuple[BeliefDistribution, ...]:
    out = []
    for p in dists:
        props = distribution_properties(p)
        if all(props[name] for name in names):
            out.append(p)
    return tuple(out)
