"""Belief distributions over argument worlds: enumeration of restricted
distributions, formula evaluation, associated formulae and the DDNF.

A distribution assigns an exact rational mass to every subset of arguments
(worlds, encoded as bitmasks). The restricted enumeration keeps every world
mass inside a value set closed under bounded addition/subtraction, which
also forces every marginal into that set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .lang import (
    Arg,
    Atom,
    Conj,
    FBot,
    FConj,
    FDisj,
    FIff,
    FImp,
    FNeg,
    FTop,
    Formula,
    FBOT,
    Neg,
    OpFormula,
    RestrictedValueSet,
    Term,
    chain_value,
    compare,
    nums,
    term_models,
)

DEFAULT_MAX_ARGS = 6
DEFAULT_MAX_MODELS = 10**8


class EnumerationCapError(RuntimeError):
    pass


@dataclass(frozen=True)
class BeliefDistribution:
    n: int
    masses: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.masses) != 1 << self.n:
            raise ValueError("need a mass per world")
        if any(m < 0 for m in self.masses):
            raise ValueError("negative mass")
        if sum(self.masses) != 1:
            raise ValueError("masses must sum to 1")

    def prob_of_models(self, models: Iterable[int]) -> Fraction:
        return sum((self.masses[w] for w in models), Fraction(0))

    def marginal(self, i: int) -> Fraction:
        bit = 1 << i
        return sum((m for w, m in enumerate(self.masses) if w & bit), Fraction(0))

    def marginals(self) -> tuple[Fraction, ...]:
        return tuple(self.marginal(i) for i in range(self.n))


def prob_of_term(p: BeliefDistribution, t: Term, order: Sequence[str]) -> Fraction:
    return p.prob_of_models(term_models(t, order))


def _eval_op(p: BeliefDistribution, f: OpFormula, order: Sequence[str]) -> Fraction:
    return chain_value([prob_of_term(p, t, order) for t in f.terms], f.ops)


def eval_formula(p: BeliefDistribution, psi: Formula, order: Sequence[str]) -> bool:
    if isinstance(psi, Atom):
        return compare(_eval_op(p, psi.lhs, order), psi.cmp, psi.rhs)
    if isinstance(psi, FTop):
        return True
    if isinstance(psi, FBot):
        return False
    if isinstance(psi, FNeg):
        return not eval_formula(p, psi.sub, order)
    if isinstance(psi, FConj):
        return eval_formula(p, psi.left, order) and eval_formula(p, psi.right, order)
    if isinstance(psi, FDisj):
        return eval_formula(p, psi.left, order) or eval_formula(p, psi.right, order)
    if isinstance(psi, FImp):
        return (not eval_formula(p, psi.left, order)) or eval_formula(p, psi.right, order)
    return eval_formula(p, psi.left, order) == eval_formula(p, psi.right, order)


def _check_caps(n: int, pi: RestrictedValueSet, override: bool) -> None:
    if override:
        return
    if n > DEFAULT_MAX_ARGS:
        raise EnumerationCapError(
            f"{n} arguments exceeds the cap of {DEFAULT_MAX_ARGS}; "
            "pass the override to proceed anyway"
        )
    # count the mass vectors summing to one by dynamic programming over
    # partial sums; that is the exact enumeration size
    counts: dict[Fraction, int] = {Fraction(0): 1}
    for _ in range(1 << n):
        nxt: dict[Fraction, int] = {}
        for total, c in counts.items():
            for v in pi.values:
                t = total + v
                if t <= 1:
                    nxt[t] = nxt.get(t, 0) + c
        counts = nxt
        if counts.get(Fraction(1), 0) > DEFAULT_MAX_MODELS:
            break
    if counts.get(Fraction(1), 0) > DEFAULT_MAX_MODELS:
        raise EnumerationCapError(
            "the enumeration would produce more distributions than the model "
            "cap; pass the override to proceed anyway"
        )


@lru_cache(maxsize=64)
def enumerate_restricted(
    n: int, pi: RestrictedValueSet, cap_override: bool = False
) -> tuple[BeliefDistribution, ...]:
    """All distributions over 2^n worlds with every mass in pi.

    Depth-first in world order, assigning values ascending, pruning branches
    whose running sum overshoots 1 or cannot reach it. The ascending DFS
    yields mass vectors in lexicographic order, which is the canonical order
    used everywhere downstream.
    """
    _check_caps(n, pi, cap_override)
    worlds = 1 << n
    values = pi.values
    mx = max(values) if values else Fraction(0)
    out: list[BeliefDistribution] = []
    prefix: list[Fraction] = []

    def go(i: int, total: Fraction) -> None:
        if i == worlds:
            if total == 1:
                out.append(BeliefDistribution(n, tuple(prefix)))
            return
        remaining = worlds - i - 1
        for v in values:
            t = total + v
            if t > 1:
                break
            if t + mx * remaining < 1:
                continue
            prefix.append(v)
            go(i + 1, t)
            prefix.pop()

    go(0, Fraction(0))
    return tuple(out)


def sat_restricted(
    phis: Iterable[Formula],
    order: Sequence[str],
    pi: RestrictedValueSet,
    cap_override: bool = False,
) -> tuple[BeliefDistribution, ...]:
    """The pi-restricted distributions satisfying every formula of the set."""
    phis = tuple(phis)
    return tuple(
        p
        for p in enumerate_restricted(len(order), pi, cap_override)
        if all(eval_formula(p, f, order) for f in phis)
    )


def argument_complete_terms(order: Sequence[str]) -> list[Term]:
    """One sign-fixing conjunction per world, in bitmask order."""
    n = len(order)
    out = []
    for w in range(1 << n):
        lits: list[Term] = [
            Arg(order[i]) if w & (1 << i) else Neg(Arg(order[i])) for i in range(n)
        ]
        t = lits[0]
        for lit in lits[1:]:
            t = Conj(t, lit)
        out.append(t)
    return out


def associated_formula(p: BeliefDistribution, order: Sequence[str]) -> Formula:
    """Conjunction pinning every complete term's probability; its satisfying
    set is exactly {p}."""
    terms = argument_complete_terms(order)
    atoms = [
        Atom(OpFormula((t,), ()), "=", p.masses[w]) for w, t in enumerate(terms)
    ]
    f: Formula = atoms[0]
    for a in atoms[1:]:
        f = FConj(f, a)
    return f


def ddnf(
    psi: Formula,
    order: Sequence[str],
    pi: RestrictedValueSet,
    cap_override: bool = False,
) -> Formula:
    """Distribution disjunctive normal form of a formula whose numbers all
    lie in pi: bottom if unsatisfiable, else the disjunction of associated
    formulae of its restricted satisfying distributions."""
    bad = [x for x in nums(psi) if x not in pi]
    if bad:
        raise ValueError(f"formula mentions values outside the value set: {bad}")
    sat = sat_restricted([psi], order, pi, cap_override)
    if not sat:
        return FBOT
    parts = [associated_formula(p, order) for p in sat]
    f: Formula = parts[0]
    for part in parts[1:]:
        f = FDisj(f, part)
    return f


def dump_distribution(p: BeliefDistribution, order: Sequence[str]) -> dict:
    from .lang import fraction_str, pretty_term

    terms = argument_complete_terms(order)
    return {
        "worlds": {
            pretty_term(terms[w]): fraction_str(m) for w, m in enumerate(p.masses)
        },
        "marginals": {
            name: fraction_str(p.marginal(i)) for i, name in enumerate(order)
        },
    }
