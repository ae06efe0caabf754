"""Imports of abstract dialectical frameworks and constrained attack graphs
as epistemic graphs, with brute-force reference solvers for cross-checking.

The reference ADF "preferred" solver maximizes over complete labelings
rather than admissible ones (the admissible labeling family is not pinned
down by the material this follows); any discrepancy against the epistemic
side is surfaced by the correspondence checker, not hidden.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from .lang import (
    Arg,
    Atom,
    Bot,
    Conj,
    Disj,
    FConj,
    FDisj,
    FIff,
    FImp,
    Formula,
    FBOT,
    FTOP,
    Neg,
    OpFormula,
    RestrictedValueSet,
    Term,
    Top,
    nnf,
    parse_term,
    term_args,
    term_models,
)
from .dist import BeliefDistribution
from .graph import EpistemicGraph, LabelledGraph

_HALF = Fraction(1, 2)


def _gt(name: str) -> Atom:
    return Atom(OpFormula((Arg(name),), ()), ">", _HALF)


def _lt(name: str) -> Atom:
    return Atom(OpFormula((Arg(name),), ()), "<", _HALF)


def _geq(name: str) -> Atom:
    return Atom(OpFormula((Arg(name),), ()), ">=", _HALF)


# ---------------------------------------------------------------------------
# ADFs

@dataclass(frozen=True)
class Adf:
    args: tuple[str, ...]
    conditions: dict[str, Term]

    def __post_init__(self) -> None:
        for a in self.args:
            if a not in self.conditions:
                raise ValueError(f"missing acceptance condition for {a!r}")
            extra = term_args(self.conditions[a]) - set(self.args)
            if extra:
                raise ValueError(f"condition of {a!r} mentions unknown {sorted(extra)}")

    def parents(self, a: str) -> frozenset[str]:
        return term_args(self.conditions[a])


def parse_adf(text: str) -> Adf:
    """statement:/condition: pairs, one per line, '#' comments."""
    args: list[str] = []
    conds: dict[str, Term] = {}
    pending: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("statement:"):
            if pending is not None:
                raise ValueError(f"line {lineno}: statement {pending!r} has no condition")
            pending = line.split(":", 1)[1].strip()
            args.append(pending)
        elif low.startswith("condition:"):
            if pending is None:
                raise ValueError(f"line {lineno}: condition without a statement")
            conds[pending] = parse_term(line.split(":", 1)[1].strip())
            pending = None
        else:
            raise ValueError(f"line {lineno}: expected statement: or condition:")
    if pending is not None:
        raise ValueError(f"statement {pending!r} has no condition")
    return Adf(tuple(args), conds)


def _epsilon(t: Term) -> Formula:
    """Literal map on a negation-normal term: Z to p(Z)>0.5, not-Z to
    p(Z)<0.5."""
    if isinstance(t, Arg):
        return _gt(t.name)
    if isinstance(t, Neg):
        if not isinstance(t.sub, Arg):
            raise ValueError("term is not in negation normal form")
        return _lt(t.sub.name)
    if isinstance(t, Top):
        return FTOP
    if isinstance(t, Bot):
        return FBOT
    if isinstance(t, Conj):
        return FConj(_epsilon(t.left), _epsilon(t.right))
    if isinstance(t, Disj):
        return FDisj(_epsilon(t.left), _epsilon(t.right))
    raise ValueError(f"unexpected term node {t!r}")


def adf_to_eg(
    adf: Adf, labels: Optional[dict[tuple[str, str], frozenset[str]]] = None
) -> EpistemicGraph:
    """One constraint per argument: believed iff the condition holds over
    believed parents, disbelieved iff its negation does."""
    arcs = set()
    labmap: dict[tuple[str, str], frozenset[str]] = {}
    for a in adf.args:
        for parent in sorted(adf.parents(a)):
            arc = (parent, a)
            arcs.add(arc)
            labmap[arc] = (labels or {}).get(arc, frozenset({"*"}))
    constraints = []
    for a in adf.args:
        pos = _epsilon(nnf(adf.conditions[a]))
        neg = _epsilon(nnf(Neg(adf.conditions[a])))
        constraints.append(FConj(FIff(_gt(a), pos), FIff(_lt(a), neg)))
    g = LabelledGraph(tuple(adf.args), frozenset(arcs), labmap)
    return EpistemicGraph(g, tuple(constraints))


Labeling = dict[str, str]  # values 't', 'f', 'u'


def _eval_condition(t: Term, truth: dict[str, bool]) -> bool:
    if isinstance(t, Arg):
        return truth[t.name]
    if isinstance(t, Top):
        return True
    if isinstance(t, Bot):
        return False
    if isinstance(t, Neg):
        return not _eval_condition(t.sub, truth)
    if isinstance(t, Conj):
        return _eval_condition(t.left, truth) and _eval_condition(t.right, truth)
    return _eval_condition(t.left, truth) or _eval_condition(t.right, truth)


def gamma(adf: Adf, v: Labeling) -> Labeling:
    """Three-valued characteristic operator: meet of the condition's value
    over all two-valued extensions of v."""
    out: Labeling = {}
    for a in adf.args:
        relevant = sorted(adf.parents(a))
        unknown = [x for x in relevant if v[x] == "u"]
        seen: set[bool] = set()
        for bits in product((False, True), repeat=len(unknown)):
            truth = {x: v[x] == "t" for x in relevant}
            truth.update(dict(zip(unknown, bits)))
            seen.add(_eval_condition(adf.conditions[a], truth))
            if len(seen) == 2:
                break
        out[a] = "u" if len(seen) == 2 else ("t" if True in seen else "f")
    return out


def adf_labelings(adf: Adf, semantics: str) -> list[Labeling]:
    """Reference solver for complete, preferred and grounded labelings."""
    n = len(adf.args)
    if n > 6:
        raise ValueError("reference solver capped at 6 statements")
    if semantics == "grounded":
        v: Labeling = {a: "u" for a in adf.args}
        while True:
            nxt = gamma(adf, v)
            if nxt == v:
                return [v]
            v = nxt
    complete = []
    for vals in product("tfu", repeat=n):
        v = dict(zip(adf.args, vals))
        if gamma(adf, v) == v:
            complete.append(v)
    if semantics == "complete":
        return complete
    if semantics == "preferred":
        def below(v: Labeling, w: Labeling) -> bool:
            return all(v[a] == "u" or v[a] == w[a] for a in adf.args)

        return [
            v for v in complete
            if not any(below(v, w) and v != w for w in complete)
        ]
    raise ValueError(f"unknown semantics {semantics!r}")


def labeling_from_distribution(
    p: BeliefDistribution, order: Sequence[str]
) -> Labeling:
    out = {}
    for i, a in enumerate(order):
        m = p.marginal(i)
        out[a] = "t" if m > _HALF else ("f" if m < _HALF else "u")
    return out


# ---------------------------------------------------------------------------
# constrained attack graphs

@dataclass(frozen=True)
class Caf:
    graph: LabelledGraph
    pc: Optional[Term] = None

    def __post_init__(self) -> None:
        for arc, labs in self.graph.labels.items():
            if labs != frozenset({"-"}):
                raise ValueError(f"arc {arc} must carry exactly the - label")
        if self.pc is not None:
            extra = term_args(self.pc) - set(self.graph.args)
            if extra:
                raise ValueError(f"pc mentions unknown arguments {sorted(extra)}")


def caf_from_eg(eg: EpistemicGraph) -> Caf:
    return Caf(eg.graph, eg.pc)


def _pc_formula(t: Term) -> Formula:
    """Propositional constraint lifted pointwise: a positive literal means
    believed, a negative one means not believed."""
    t = nnf(t)

    def go(t: Term) -> Formula:
        if isinstance(t, Arg):
            return _gt(t.name)
        if isinstance(t, Neg):
            return Atom(OpFormula((Arg(t.sub.name),), ()), "<=", _HALF)
        if isinstance(t, Top):
            return FTOP
        if isinstance(t, Bot):
            return FBOT
        if isinstance(t, Conj):
            return FConj(go(t.left), go(t.right))
        return FDisj(go(t.left), go(t.right))

    return go(t)


def caf_to_eg(caf: Caf) -> EpistemicGraph:
    """Attack graph to constraints.

    Unattacked arguments are pinned at or above one half. A two-cycle whose
    members attack only each other collapses to a single pair of
    biconditionals, emitted for the first member. Everything else gets the
    two-implication form over its attacker set. The propositional constraint,
    when present, is appended last.
    """
    g = caf.graph
    attackers = {a: sorted(g.parents(a)) for a in g.args}
    constraints: list[Formula] = []
    skip: set[str] = set()
    for x in g.args:
        if x in skip:
            continue
        s = attackers[x]
        if not s:
            constraints.append(_geq(x))
            continue
        if len(s) == 1:
            y = s[0]
            if y != x and attackers[y] == [x]:
                # mutual attack pair: one biconditional constraint
                constraints.append(
                    FConj(FIff(_gt(x), _lt(y)), FIff(_lt(x), _gt(y)))
                )
                skip.add(y)
                continue
        low: Formula = _lt(s[0])
        high: Formula = _gt(s[0])
        for y in s[1:]:
            low = FConj(low, _lt(y))
            high = FDisj(high, _gt(y))
        constraints.append(FConj(FImp(_gt(x), low), FImp(_lt(x), high)))
    if caf.pc is not None:
        constraints.append(_pc_formula(caf.pc))
    return EpistemicGraph(g, tuple(constraints), caf.pc)


def caf_reference(caf: Caf, semantics: str) -> list[frozenset[str]]:
    """Brute-force admissible/preferred extensions, filtered by the
    propositional constraint evaluated on each extension's characteristic
    assignment."""
    g = caf.graph
    args = g.args
    if len(args) > 8:
        raise ValueError("reference solver capped at 8 arguments")
    attacks = g.arcs

    def conflict_free(s: frozenset[str]) -> bool:
        return not any((a, b) in attacks for a in s for b in s)

    def defended(s: frozenset[str]) -> bool:
        for member in s:
            for (att, tgt) in attacks:
                if tgt != member:
                    continue
                if not any((d, att) in attacks for d in s):
                    return False
        return True

    def pc_holds(s: frozenset[str]) -> bool:
        if caf.pc is None:
            return True
        return _eval_condition(caf.pc, {a: a in s for a in args})

    admissible = []
    for bits in product((False, True), repeat=len(args)):
        s = frozenset(a for a, b in zip(args, bits) if b)
        if conflict_free(s) and defended(s) and pc_holds(s):
            admissible.append(s)
    if semantics == "admissible":
        return admissible
    if semantics == "preferred":
        return [
            s for s in admissible
            if not any(s < t for t in admissible)
        ]
    raise ValueError(f"unknown semantics {semantics!r}")


# ---------------------------------------------------------------------------
# correspondence checks

def adf_correspondence(
    adf: Adf, pi: Optional[RestrictedValueSet] = None
) -> dict:
    """Compare the reference labelings with labelings read off the ternary
    satisfying distributions of the translated graph."""
    from .dist import sat_restricted
    from .semantics import filter_distributions, select_extreme

    pi = pi or RestrictedValueSet((Fraction(0), _HALF, Fraction(1)))
    eg = adf_to_eg(adf)
    sat = filter_distributions(
        sat_restricted(eg.constraints, eg.args, pi), ["ternary"]
    )
    from_dists = [labeling_from_distribution(p, eg.args) for p in sat]
    complete = adf_labelings(adf, "complete")
    preferred = adf_labelings(adf, "preferred")
    grounded = adf_labelings(adf, "grounded")
    max_i = [labeling_from_distribution(p, eg.args)
             for p in select_extreme(sat, "I", "max")]
    min_i = [labeling_from_distribution(p, eg.args)
             for p in select_extreme(sat, "I", "min")]

    def same(xs, ys):
        # several joints can share one ternary marginal pattern, so compare
        # labeling sets
        key = lambda v: tuple(v[a] for a in eg.args)
        return {key(v) for v in xs} == {key(v) for v in ys}

    return {
        "complete_match": same(from_dists, complete),
        "preferred_match": same(max_i, preferred),
        "grounded_match": same(min_i, grounded),
        "labelings": from_dists,
    }


def caf_correspondence(
    caf: Caf, pi: Optional[RestrictedValueSet] = None
) -> dict:
    """Believed sets of ternary satisfying distributions against reference
    admissible extensions; information-maximal against preferred."""
    from .dist import sat_restricted
    from .semantics import believed, filter_distributions, select_extreme

    pi = pi or RestrictedValueSet((Fraction(0), _HALF, Fraction(1)))
    eg = caf_to_eg(caf)
    sat = filter_distributions(
        sat_restricted(eg.constraints, eg.args, pi), ["ternary"]
    )
    believed_sets = [
        frozenset(eg.args[i] for i in believed(p)) for p in sat
    ]
    admissible = caf_reference(caf, "admissible")
    preferred = caf_reference(caf, "preferred")
    max_i = [
        frozenset(eg.args[i] for i in believed(p))
        for p in select_extreme(sat, "I", "max")
    ]
    return {
        "admissible_match": sorted(map(sorted, set(believed_sets)))
        == sorted(map(sorted, set(admissible))),
        "preferred_match": sorted(map(sorted, set(max_i)))
        == sorted(map(sorted, set(preferred))),
        "believed_sets": believed_sets,
    }
