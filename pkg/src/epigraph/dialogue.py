"""Dialogue sessions: a user asserts beliefs move by move and the engine
reports consistency, achievable belief ranges and ranked move suggestions.

Two query backends share one interface. The joint backend enumerates
restricted distributions and is exact for every constraint shape but only
scales to a handful of arguments. The marginal backend applies when every
constraint mentions single-argument terms only: satisfaction then depends
on the marginal vector alone, and every marginal vector over the value set
is realizable by the nested-coupling distribution whose world masses are
consecutive differences of the sorted marginal values (all inside the set,
by closure under subtraction). That turns the query into a small finite
constraint problem over per-argument domains and scales to case-study
sized graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .lang import (
    Arg,
    Atom,
    Formula,
    OpFormula,
    RestrictedValueSet,
    chain_value,
    compare,
    fargs,
    fraction_str,
    fterms,
)
from .dist import sat_restricted
from .graph import EpistemicGraph

Condition = tuple[str, str, Fraction]  # argument, comparator, value

_HALF = Fraction(1, 2)


def conditions_to_formulas(conds: Iterable[Condition]) -> list[Formula]:
    return [Atom(OpFormula((Arg(a),), ()), cmp, v) for a, cmp, v in conds]


def is_marginal_formula(psi: Formula) -> bool:
    return all(isinstance(t, Arg) for t in fterms(psi))


class BeliefEngine:
    def satisfiable(self, conds: Sequence[Condition]) -> bool:
        raise NotImplementedError

    def extreme_marginal(
        self, arg: str, conds: Sequence[Condition], direction: str
    ) -> Optional[Fraction]:
        """Largest/smallest achievable belief in the argument under the
        graph constraints plus the given conditions; None if unsatisfiable."""
        values = self.pi.values
        conds = list(conds)
        cmp = ">=" if direction == "max" else "<="
        if not self.satisfiable(conds + [(arg, cmp, values[0 if direction == "max" else -1])]):
            return None
        # satisfiability of the threshold pin is monotone in the value, so
        # binary search for the boundary
        lo, hi = 0, len(values) - 1
        while lo < hi:
            mid = (lo + hi + (1 if direction == "max" else 0)) // 2
            if self.satisfiable(conds + [(arg, cmp, values[mid])]):
                lo, hi = (mid, hi) if direction == "max" else (lo, mid)
            else:
                lo, hi = (lo, mid - 1) if direction == "max" else (mid + 1, hi)
        return values[lo]


class JointEngine(BeliefEngine):
    def __init__(self, eg: EpistemicGraph, pi: RestrictedValueSet,
                 cap_override: bool = False):
        self.eg = eg
        self.pi = pi
        self._index = {a: i for i, a in enumerate(eg.args)}
        self._sat = sat_restricted(eg.constraints, eg.args, pi, cap_override)
        self._marginals = [p.marginals() for p in self._sat]

    def satisfiable(self, conds: Sequence[Condition]) -> bool:
        for m in self._marginals:
            if all(compare(m[self._index[a]], cmp, v) for a, cmp, v in conds):
                return True
        return False


def _compile_marginal(psi: Formula, pos: dict[str, int], scale: int) -> str:
    """Python expression over a vector m of scale-multiplied integer
    marginals; atom comparisons are cross-multiplied so everything stays
    exact integer arithmetic."""
    from .lang import FBot, FConj, FDisj, FIff, FImp, FNeg, FTop

    if isinstance(psi, Atom):
        expr = f"m[{pos[psi.lhs.terms[0].name]}]"
        for op, t in zip(psi.lhs.ops, psi.lhs.terms[1:]):
            expr += f"{op}m[{pos[t.name]}]"
        py_cmp = "==" if psi.cmp == "=" else psi.cmp
        rhs = psi.rhs
        return f"(({expr})*{rhs.denominator} {py_cmp} {rhs.numerator * scale})"
    if isinstance(psi, FTop):
        return "True"
    if isinstance(psi, FBot):
        return "False"
    if isinstance(psi, FNeg):
        return f"(not {_compile_marginal(psi.sub, pos, scale)})"
    left = _compile_marginal(psi.left, pos, scale)
    right = _compile_marginal(psi.right, pos, scale)
    if isinstance(psi, FConj):
        return f"({left} and {right})"
    if isinstance(psi, FDisj):
        return f"({left} or {right})"
    if isinstance(psi, FImp):
        return f"((not {left}) or {right})"
    return f"({left} == {right})"


class MarginalEngine(BeliefEngine):
    """Backtracking search over marginal vectors.

    Arguments are ordered greedily so each constraint becomes checkable as
    early as possible; constraints are compiled to integer-arithmetic
    closures and evaluated the moment their last argument is assigned, with
    a one-variable lookahead that prunes a branch as soon as some constraint
    has a single free argument and no supporting value."""

    def __init__(self, eg: EpistemicGraph, pi: RestrictedValueSet):
        if not all(is_marginal_formula(c) for c in eg.constraints):
            raise ValueError("constraints mention compound terms; "
                             "the marginal backend does not apply")
        self.eg = eg
        self.pi = pi
        needs = [frozenset(fargs(c)) for c in eg.constraints]
        order: list[str] = []
        remaining = list(eg.args)
        pending = list(range(len(needs)))
        while remaining:
            def gain(a: str) -> int:
                have = set(order) | {a}
                return sum(1 for i in pending if needs[i] <= have)

            best = max(remaining, key=lambda a: (gain(a), -remaining.index(a)))
            order.append(best)
            remaining.remove(best)
            pending = [i for i in pending if not needs[i] <= set(order)]
        self.order = order
        scale = 1
        for v in pi.values:
            scale = scale * v.denominator // math.gcd(scale, v.denominator)
        self.scale = scale
        self.scaled = tuple(int(v * scale) for v in pi.values)
        pos = {a: i for i, a in enumerate(order)}
        self.pos = pos
        compiled = [
            eval(f"lambda m: {_compile_marginal(c, pos, scale)}")
            for c in eg.constraints
        ]
        self.checks: list[list] = [[] for _ in order]
        self.lookahead: list[list[tuple]] = [[] for _ in order]
        for fn, need in zip(compiled, needs):
            positions = sorted(pos[a] for a in need)
            self.checks[positions[-1]].append(fn)
            if len(positions) > 1:
                self.lookahead[positions[-2]].append((fn, positions[-1]))

    def solve(self, conds: Sequence[Condition]) -> Optional[dict[str, Fraction]]:
        domains: list[tuple[int, ...]] = []
        for a in self.order:
            dom = self.pi.values
            for (arg, cmp, v) in conds:
                if arg == a:
                    dom = tuple(x for x in dom if compare(x, cmp, v))
            if not dom:
                return None
            domains.append(tuple(int(x * self.scale) for x in dom))
        n = len(self.order)
        m: list[Optional[int]] = [None] * n
        checks, lookahead = self.checks, self.lookahead

        def feasible(fn, free: int) -> bool:
            for v in domains[free]:
                m[free] = v
                if fn(m):
                    m[free] = None
                    return True
            m[free] = None
            return False

        def go(i: int) -> bool:
            if i == n:
                return True
            for v in domains[i]:
                m[i] = v
                if (all(fn(m) for fn in checks[i])
                        and all(feasible(fn, f) for fn, f in lookahead[i])
                        and go(i + 1)):
                    return True
            m[i] = None
            return False

        if not go(0):
            return None
        return {a: Fraction(m[i], self.scale) for a, i in self.pos.items()}

    def satisfiable(self, conds: Sequence[Condition]) -> bool:
        return self.solve(conds) is not None


def engine_for(eg: EpistemicGraph, pi: RestrictedValueSet,
               cap_override: bool = False) -> BeliefEngine:
    if all(is_marginal_formula(c) for c in eg.constraints):
        return MarginalEngine(eg, pi)
    return JointEngine(eg, pi, cap_override)


# ---------------------------------------------------------------------------
# sessions

@dataclass
class Move:
    argument: str
    optimistic: Optional[Fraction]
    pessimistic: Optional[Fraction]
    feasible: bool
    warnings: list[str] = field(default_factory=list)


@dataclass
class DialogueSession:
    eg: EpistemicGraph
    pi: RestrictedValueSet
    goal: str
    asserted: dict[str, Condition] = field(default_factory=dict)
    history: list[dict] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.goal not in self.eg.args:
            raise ValueError(f"goal {self.goal!r} is not a declared argument")
        self.engine = engine_for(self.eg, self.pi)

    # -- assertions -----------------------------------------------------
    def assert_belief(self, arg: str, cmp: str, value: Fraction) -> None:
        if arg not in self.eg.args:
            raise ValueError(f"unknown argument {arg!r}")
        cond = (arg, cmp, Fraction(value))
        self.asserted[arg] = cond
        self.history.append({"action": "assert", "argument": arg,
                             "comparator": cmp, "value": fraction_str(cond[2])})

    def retract(self, arg: str) -> None:
        if arg in self.asserted:
            del self.asserted[arg]
            self.history.append({"action": "retract", "argument": arg})

    @property
    def conditions(self) -> list[Condition]:
        return list(self.asserted.values())

    def consistent(self) -> bool:
        return self.engine.satisfiable(self.conditions)

    def conflict_core(self) -> list[Condition]:
        """Irreducible inconsistent subset of the assertions, found by
        greedy deletion."""
        core = self.conditions
        if self.engine.satisfiable(core):
            return []
        for cond in list(core):
            trial = [c for c in core if c != cond]
            if not self.engine.satisfiable(trial):
                core = trial
        return core

    # -- reporting ------------------------------------------------------
    def marginal_ranges(self) -> dict[str, Optional[tuple[Fraction, Fraction]]]:
        conds = self.conditions
        out = {}
        for a in self.eg.args:
            lo = self.engine.extreme_marginal(a, conds, "min")
            hi = self.engine.extreme_marginal(a, conds, "max")
            out[a] = None if lo is None else (lo, hi)
        return out

    def _edge_warnings(self, m: str) -> list[str]:
        """Flag labelled arcs at the move whose source never occurs in any
        constraint: such a relation cannot be semi-effective under any probe
        and a +/- label on it cannot be matched."""
        mentioned = set()
        for c in self.eg.constraints:
            mentioned |= fargs(c)
        warnings = []
        for (src, dst) in sorted(self.eg.graph.arcs):
            if m not in (src, dst):
                continue
            labels = self.eg.graph.labels.get((src, dst), frozenset())
            if src not in mentioned and labels & {"+", "-"}:
                warnings.append(
                    f"arc ({src},{dst}) is labelled {','.join(sorted(labels))} "
                    "but its source appears in no constraint; the relation "
                    "can only be unspecified"
                )
        return warnings

    def suggest_moves(self) -> list[Move]:
        """For each unplayed argument, the best and worst achievable belief
        in the goal once that argument is believed; ranked optimistically."""
        conds = self.conditions
        moves = []
        for m in self.eg.args:
            if m == self.goal or m in self.asserted:
                continue
            with_move = conds + [(m, ">", _HALF)]
            opt = self.engine.extreme_marginal(self.goal, with_move, "max")
            pes = (self.engine.extreme_marginal(self.goal, with_move, "min")
                   if opt is not None else None)
            moves.append(Move(m, opt, pes, opt is not None,
                              self._edge_warnings(m)))
        moves.sort(key=lambda mv: (mv.optimistic is None,
                                   -(mv.optimistic or 0),
                                   -(mv.pessimistic or 0),
                                   mv.argument))
        return moves
