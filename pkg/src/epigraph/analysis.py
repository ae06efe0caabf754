"""Coverage, effectiveness, relation typing, monotonicity, coherence and
labeling consistency for epistemic graphs.

All decision procedures run in a restricted regime: probe values and
constraint combinations range over a finite value set closed under bounded
addition and subtraction. Verdicts carry that regime so a negative answer
is always read relative to it. Queries against an unbounded existential
("arbitrary ..." notions) search subsets up to a size cap and report
exhaustion rather than claiming a definitive negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations as subsets_of, product
from typing import Iterable, Optional, Sequence

from .lang import (
    Atom,
    Formula,
    OpFormula,
    RestrictedValueSet,
    Arg,
    compare,
    fraction_str,
)
from .dist import BeliefDistribution, sat_restricted
from .graph import EpistemicGraph


@dataclass(frozen=True)
class Regime:
    pi: RestrictedValueSet
    f_cap: Optional[int] = None
    cap_override: bool = False

    def cap_for(self, n: int) -> int:
        return self.f_cap if self.f_cap is not None else min(n - 1, 4)

    def describe(self) -> str:
        vals = ",".join(fraction_str(v) for v in self.pi)
        return f"Pi={{{vals}}}"


@dataclass(frozen=True)
class Combination:
    """A batch of per-argument belief equalities used as a probe."""

    entries: tuple[tuple[str, Fraction], ...]

    def restrict(self, keep: frozenset[str]) -> "Combination":
        return Combination(tuple(e for e in self.entries if e[0] in keep))

    def formulas(self) -> list[Formula]:
        return [
            Atom(OpFormula((Arg(a),), ()), "=", v) for a, v in self.entries
        ]

    def describe(self) -> str:
        return "{" + ", ".join(f"p({a})={fraction_str(v)}" for a, v in self.entries) + "}"


@dataclass
class Verdict:
    holds: bool
    regime: Regime
    witness: Optional[dict] = None
    counterexample: Optional[dict] = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds


class InconsistentGraph(ValueError):
    pass


class BadZ(ValueError):
    pass


# ---------------------------------------------------------------------------
# cached satisfying sets with marginal tables

@lru_cache(maxsize=256)
def _sat_table(
    phis: tuple[Formula, ...],
    order: tuple[str, ...],
    pi: RestrictedValueSet,
    cap_override: bool,
) -> tuple[tuple[BeliefDistribution, tuple[Fraction, ...]], ...]:
    return tuple(
        (p, p.marginals()) for p in sat_restricted(phis, order, pi, cap_override)
    )


def _filter(table, idx_conditions):
    """Rows whose marginals meet every (index, cmp, value) condition."""
    out = table
    for (i, cmp, v) in idx_conditions:
        out = tuple(row for row in out if compare(row[1][i], cmp, v))
    return out


def _combo_conditions(cc: Combination, index: dict[str, int]):
    return [(index[a], "=", v) for a, v in cc.entries]


def combinations_over(
    f_set: Sequence[str], pi: RestrictedValueSet
) -> Iterable[Combination]:
    """All exact combinations over the probe set, canonical order."""
    f_set = tuple(f_set)
    if not f_set:
        yield Combination(())
        return
    for values in product(pi.values, repeat=len(f_set)):
        yield Combination(tuple(zip(f_set, values)))


def _base(eg: EpistemicGraph, z: Optional[Sequence[Formula]]):
    return tuple(eg.constraints) if z is None else tuple(z)


def _checked_table(eg, z, regime):
    order = eg.args
    table = _sat_table(_base(eg, z), order, regime.pi, regime.cap_override)
    if not table:
        raise (BadZ if z is not None else InconsistentGraph)(
            "constraint set has no restricted satisfying distribution"
        )
    return table, {a: i for i, a in enumerate(order)}


def validate_z(eg: EpistemicGraph, z: Sequence[Formula], regime: Regime) -> None:
    """Z must be consistent and every member entailed by the graph's
    constraints."""
    from .entail import entails

    table = _sat_table(tuple(z), eg.args, regime.pi, regime.cap_override)
    if not table:
        raise BadZ("Z is inconsistent")
    for f in z:
        if not entails(eg.constraints, f, eg.args, regime.pi, regime.cap_override):
            raise BadZ("Z member is not in the closure of the constraints")


# ---------------------------------------------------------------------------
# coverage

def default_covered(eg: EpistemicGraph, a: str, regime: Regime,
                    z: Optional[Sequence[Formula]] = None) -> Verdict:
    """Is some belief value in the argument ruled out outright?"""
    table, index = _checked_table(eg, z, regime)
    i = index[a]
    attained = {row[1][i] for row in table}
    for x in regime.pi:
        if x not in attained:
            return Verdict(True, regime, witness={"x": x})
    return Verdict(False, regime)


def covered(
    eg: EpistemicGraph,
    a: str,
    f_set: Sequence[str],
    mode: str,
    regime: Regime,
    z: Optional[Sequence[Formula]] = None,
) -> Verdict:
    """Partial/full coverage of an argument by a probe set.

    Partial wants one consistent combination forbidding some value of the
    argument; full wants every consistent combination to do so. An empty
    probe set reduces to default coverage.
    """
    if a in f_set:
        raise ValueError("probed argument cannot be in the probe set")
    if mode not in ("partial", "full"):
        raise ValueError("mode is 'partial' or 'full'")
    if not f_set:
        return default_covered(eg, a, regime, z)
    table, index = _checked_table(eg, z, regime)
    i = index[a]
    found_witness = None
    for cc in combinations_over(f_set, regime.pi):
        rows = _filter(table, _combo_conditions(cc, index))
        if not rows:
            continue
        attained = {r[1][i] for r in rows}
        missing = next((x for x in regime.pi if x not in attained), None)
        if missing is None:
            if mode == "full":
                return Verdict(False, regime,
                               counterexample={"combination": cc})
        elif found_witness is None:
            found_witness = {"combination": cc, "x": missing}
            if mode == "partial":
                return Verdict(True, regime, witness=found_witness)
    if mode == "partial":
        return Verdict(False, regime)
    if found_witness is None:
        # no combination is consistent at all: vacuously full
        return Verdict(True, regime, note="no consistent combination")
    return Verdict(True, regime, witness=found_witness)


def arbitrary_covered(
    eg: EpistemicGraph, a: str, mode: str, regime: Regime,
    z: Optional[Sequence[Formula]] = None,
) -> Verdict:
    """Search probe sets smallest-first for one giving coverage."""
    pool = [x for x in eg.args if x != a]
    cap = regime.cap_for(len(eg.args))
    for size in range(0, cap + 1):
        for f_set in subsets_of(pool, size):
            v = covered(eg, a, f_set, mode, regime, z)
            if v.holds:
                return Verdict(True, regime,
                               witness={"F": f_set, **(v.witness or {})})
    exhaustive = cap >= len(pool)
    return Verdict(False, regime,
                   note="" if exhaustive else "not found within cap")


# ---------------------------------------------------------------------------
# effectiveness

def semi_effective(
    eg: EpistemicGraph,
    z: Optional[Sequence[Formula]],
    rel: tuple[str, str],
    f_set: Sequence[str],
    strength: str,
    regime: Regime,
    _validate: bool = True,
) -> Verdict:
    """Can pinning the source's belief flip whether some value of the target
    is ruled out? 'strong' demands a flip under every consistent probe."""
    a, b = rel
    if b in f_set:
        raise ValueError("target cannot be in the probe set")
    if strength not in ("plain", "strong"):
        raise ValueError("strength is 'plain' or 'strong'")
    if z is not None and _validate:
        validate_z(eg, z, regime)
    table, index = _checked_table(eg, z, regime)
    ia, ib = index[a], index[b]
    g_set = frozenset(f_set) - {a}

    def flip_for(cc: Combination):
        rows_cc = _filter(table, _combo_conditions(cc, index))
        if not rows_cc:
            return None
        base_g = _filter(table, _combo_conditions(cc.restrict(g_set), index))
        attained_cc = {r[1][ib] for r in rows_cc}
        attained_by_y = {}
        for y in regime.pi:
            rows_y = tuple(r for r in base_g if r[1][ia] == y)
            if rows_y:
                attained_by_y[y] = {r[1][ib] for r in rows_y}
        for x in regime.pi:
            for y, attained_y in attained_by_y.items():
                # entailment of p(b) != x on exactly one side
                if (x in attained_cc) != (x in attained_y):
                    return {"x": x, "y": y}
        return None

    if strength == "plain":
        for cc in combinations_over(f_set, regime.pi):
            res = flip_for(cc)
            if res is not None:
                return Verdict(True, regime,
                               witness={"combination": cc, **res})
        return Verdict(False, regime)
    for cc in combinations_over(f_set, regime.pi):
        rows_cc = _filter(table, _combo_conditions(cc, index))
        if not rows_cc:
            continue
        if flip_for(cc) is None:
            return Verdict(False, regime, counterexample={"combination": cc})
    return Verdict(True, regime)


def effective(
    eg: EpistemicGraph,
    rel: tuple[str, str],
    f_set: Sequence[str],
    strength: str,
    regime: Regime,
) -> Verdict:
    """Effectiveness against the graph's own constraints."""
    return semi_effective(eg, None, rel, f_set, strength, regime)


# ---------------------------------------------------------------------------
# relation types

@dataclass
class RelationTypeVerdict:
    types: tuple[str, ...]
    strong: tuple[str, ...]
    regime: Regime
    semi: Verdict = None


def relation_type(
    eg: EpistemicGraph,
    z: Optional[Sequence[Formula]],
    rel: tuple[str, str],
    f_set: Sequence[str],
    regime: Regime,
    _validate: bool = True,
) -> RelationTypeVerdict:
    """Classify a relation as unspecified, attacking, supporting, dependent
    and/or subtle, with strong flags."""
    a, b = rel
    semi = semi_effective(eg, z, rel, f_set, "plain", regime, _validate)
    if not semi.holds:
        return RelationTypeVerdict(("unspecified",), (), regime, semi)
    table, index = _checked_table(eg, z, regime)
    ia, ib = index[a], index[b]
    g_set = frozenset(f_set) - {a}
    half = Fraction(1, 2)

    attacking = supporting = True
    all_consistent = True
    exists_low = exists_high = False
    for cc in combinations_over(f_set, regime.pi):
        rows_cc = _filter(table, _combo_conditions(cc, index))
        rows_src = tuple(
            r
            for r in _filter(table, _combo_conditions(cc.restrict(g_set), index))
            if r[1][ia] > half
        )
        if not rows_cc or not rows_src:
            all_consistent = False
            continue
        lo = all(r[1][ib] <= half for r in rows_cc)
        hi = all(r[1][ib] >= half for r in rows_cc)
        exists_low |= lo
        exists_high |= hi
        if lo and not all(r[1][ib] <= half for r in rows_src):
            attacking = False
        if hi and not all(r[1][ib] >= half for r in rows_src):
            supporting = False

    types = []
    if attacking:
        types.append("attacking")
    if supporting:
        types.append("supporting")
    if not attacking and not supporting:
        types.append("dependent")
    if attacking and supporting:
        types.append("subtle")
    strong = []
    if all_consistent:
        if "attacking" in types and exists_low:
            strong.append("attacking")
        if "supporting" in types and exists_high:
            strong.append("supporting")
        if "dependent" in types and exists_low and exists_high:
            strong.append("dependent")
        if "subtle" in types and exists_low and exists_high:
            strong.append("subtle")
    return RelationTypeVerdict(tuple(types), tuple(strong), regime, semi)


# ---------------------------------------------------------------------------
# monotonicity

def monotonicity(
    eg: EpistemicGraph,
    z: Optional[Sequence[Formula]],
    rel: tuple[str, str],
    f_set: Sequence[str],
    regime: Regime,
    _validate: bool = True,
) -> Verdict:
    """Positive/negative monotonicity over full satisfying-distribution
    pairs; the verdict's witness carries the classification."""
    a, b = rel
    if z is not None and _validate:
        validate_z(eg, z, regime)
    table, index = _checked_table(eg, z, regime)
    ia, ib = index[a], index[b]
    fixed = [index[c] for c in f_set if c != a and c != b]
    positive = negative = True
    vacuous = True
    for (p, mp), (q, mq) in product(table, repeat=2):
        if mp[ia] <= mq[ia]:
            continue
        if any(mp[i] != mq[i] for i in fixed):
            continue
        vacuous = False
        if not mp[ib] > mq[ib]:
            positive = False
        if not mp[ib] < mq[ib]:
            negative = False
        if not positive and not negative:
            break
    if vacuous:
        kind = "positive"
        note = "vacuous: no comparable pair of distributions"
    elif positive:
        kind, note = "positive", ""
    elif negative:
        kind, note = "negative", ""
    else:
        kind, note = "nonmonotonic-dependent", ""
    return Verdict(kind != "nonmonotonic-dependent", regime,
                   witness={"classification": kind}, note=note)


# ---------------------------------------------------------------------------
# arbitrary searches

def default_zcandidates(eg: EpistemicGraph) -> list[tuple[Formula, ...]]:
    cands: list[tuple[Formula, ...]] = [tuple(eg.constraints)]
    for c in eg.constraints:
        cands.append((c,))
    return cands


def _f_subsets(pool: Sequence[str], cap: int):
    for size in range(0, cap + 1):
        yield from subsets_of(pool, size)


def arbitrary_semi_effective(
    eg: EpistemicGraph,
    rel: tuple[str, str],
    regime: Regime,
    zcandidates: Optional[list[tuple[Formula, ...]]] = None,
) -> Verdict:
    """Search (Z, F) pairs for one making the relation semi-effective."""
    a, b = rel
    zs = zcandidates if zcandidates is not None else default_zcandidates(eg)
    pool = [x for x in eg.args if x != b]
    cap = regime.cap_for(len(eg.args))
    for z in zs:
        try:
            if z != tuple(eg.constraints):
                validate_z(eg, z, regime)
        except BadZ:
            continue
        for f_set in _f_subsets(pool, cap):
            v = semi_effective(eg, z, rel, f_set, "plain", regime,
                               _validate=False)
            if v.holds:
                return Verdict(True, regime,
                               witness={"Z": z, "F": f_set, **(v.witness or {})})
    exhaustive = cap >= len(pool)
    return Verdict(False, regime,
                   note="" if exhaustive and zcandidates is None else
                   "not found within cap")


def arbitrary_relation_type(
    eg: EpistemicGraph,
    rel: tuple[str, str],
    wanted: str,
    strong: bool,
    regime: Regime,
    zcandidates: Optional[list[tuple[Formula, ...]]] = None,
) -> Verdict:
    """Search (Z, F) for a pair under which the relation has the wanted
    type ('supporting', 'attacking', 'dependent', 'subtle', 'unspecified',
    'positive', 'negative', 'nonmonotonic-dependent')."""
    a, b = rel
    zs = zcandidates if zcandidates is not None else default_zcandidates(eg)
    pool = [x for x in eg.args if x != b]
    cap = regime.cap_for(len(eg.args))
    monotone = wanted in ("positive", "negative", "nonmonotonic-dependent")
    for z in zs:
        try:
            if z != tuple(eg.constraints):
                validate_z(eg, z, regime)
        except BadZ:
            continue
        for f_set in _f_subsets(pool, cap):
            if monotone:
                v = monotonicity(eg, z, rel, f_set, regime, _validate=False)
                if v.witness["classification"] == wanted and not v.note:
                    return Verdict(True, regime, witness={"Z": z, "F": f_set})
            else:
                tv = relation_type(eg, z, rel, f_set, regime, _validate=False)
                pool_types = tv.strong if strong else tv.types
                if wanted in pool_types:
                    return Verdict(True, regime, witness={"Z": z, "F": f_set})
    exhaustive = cap >= len(pool)
    return Verdict(False, regime,
                   note="" if exhaustive and zcandidates is None else
                   "not found within cap")


# ---------------------------------------------------------------------------
# coherence and labeling

def coherence_report(
    eg: EpistemicGraph,
    regime: Regime,
    zcandidates: Optional[list[tuple[Formula, ...]]] = None,
) -> dict:
    """Evaluate the six graph-vs-constraints agreement predicates."""
    flags: dict[str, Verdict] = {}
    notes: list[str] = []

    per_arg = {}
    for a in eg.args:
        v = default_covered(eg, a, regime)
        if not v.holds:
            v = arbitrary_covered(eg, a, "full", regime)
        per_arg[a] = v
    bounded = all(v.holds for v in per_arg.values())
    flags["bounded"] = Verdict(bounded, regime,
                               counterexample=None if bounded else {
                                   "argument": next(a for a, v in per_arg.items()
                                                    if not v.holds)})
    entry_ok = all(v.holds for a, v in per_arg.items()
                   if eg.graph.parents(a))
    flags["entry_bounded"] = Verdict(entry_ok, regime)

    def all_semi(pairs):
        for pair in pairs:
            v = arbitrary_semi_effective(eg, pair, regime, zcandidates)
            if not v.holds:
                return Verdict(False, regime, counterexample={"relation": pair},
                               note=v.note)
        return Verdict(True, regime)

    flags["directly_connected"] = all_semi(sorted(eg.graph.arcs))
    star = eg.graph.connected_pairs()
    flags["indirectly_connected"] = all_semi(sorted(star))
    hidden = Verdict(False, regime, note="not found within cap")
    outside = [
        (a, b)
        for a in eg.args
        for b in eg.args
        if a != b and (a, b) not in star
    ]
    for pair in outside:
        v = arbitrary_semi_effective(eg, pair, regime, zcandidates)
        if v.holds:
            hidden = Verdict(True, regime, witness={"relation": pair,
                                                    **(v.witness or {})})
            break
    if not outside:
        hidden = Verdict(False, regime, note="no pairs outside the connected closure")
    flags["hidden_connected"] = hidden

    locally = True
    for a in eg.args:
        rels = sorted(eg.graph.direct_rels(a) - {a})
        ok = False
        for z in (zcandidates if zcandidates is not None
                  else default_zcandidates(eg)):
            try:
                if z != tuple(eg.constraints):
                    validate_z(eg, z, regime)
            except BadZ:
                continue
            if not covered(eg, a, rels, "full", regime, z).holds:
                continue
            if all(
                semi_effective(eg, z, (b, a), rels, "plain", regime,
                               _validate=False).holds
                or semi_effective(eg, z, (a, b),
                                  [x for x in rels if x != b],
                                  "plain", regime, _validate=False).holds
                for b in rels
            ):
                ok = True
                break
        if not ok:
            locally = False
            notes.append(f"no qualifying Z found for {a}")
            break
    flags["locally_connected"] = Verdict(locally, regime,
                                         note="; ".join(notes))
    return flags


_LABEL_TO_TYPE = {"+": "supporting", "-": "attacking", "*": "dependent"}
_LABEL_TO_MONO = {"+": "positive", "-": "negative", "*": "nonmonotonic-dependent"}


def labeling_consistency(
    eg: EpistemicGraph,
    mode: str,
    regime: Regime,
    zcandidates: Optional[list[tuple[Formula, ...]]] = None,
) -> list[dict]:
    """Per-arc check that labels match achievable relation types."""
    if mode not in ("consistent", "strong", "monotonic"):
        raise ValueError("mode is 'consistent', 'strong' or 'monotonic'")
    out = []
    for arc in sorted(eg.graph.arcs):
        labels = eg.graph.labels.get(arc, frozenset())
        wanted_types = []
        if not labels:
            wanted_types = ["unspecified"]
        for lab in sorted(labels):
            wanted_types.append(
                _LABEL_TO_MONO[lab] if mode == "monotonic" else _LABEL_TO_TYPE[lab]
            )
        arc_ok = True
        details = []
        for wanted in wanted_types:
            if wanted == "unspecified":
                v = arbitrary_semi_effective(eg, arc, regime, zcandidates)
                found = not v.holds
                v = Verdict(found, regime, note=v.note)
            else:
                v = arbitrary_relation_type(
                    eg, arc, wanted, strong=(mode == "strong"), regime=regime,
                    zcandidates=zcandidates,
                )
            arc_ok &= v.holds
            details.append({"wanted": wanted, "verdict": v})
        out.append({"arc": arc, "labels": sorted(labels), "ok": arc_ok,
                    "details": details})
    return out
