"""Coverage, effectiveness, relation typing, monotonicity and labeling."""

import os
from fractions import Fraction

import pytest

from epigraph.analysis import (
    BadZ,
    Combination,
    Regime,
    arbitrary_covered,
    arbitrary_relation_type,
    arbitrary_semi_effective,
    coherence_report,
    combinations_over,
    covered,
    default_covered,
    effective,
    labeling_consistency,
    monotonicity,
    relation_type,
    semi_effective,
    validate_z,
)
from epigraph.graph import load_eg, parse_eg
from epigraph.lang import RestrictedValueSet, parse_formula

F = Fraction
PI3 = RestrictedValueSet.parse("0,0.5,1")
PI2 = RestrictedValueSet.parse("0,0.25,...,1")
PI10 = RestrictedValueSet.parse("0,0.1,...,1")

R3 = Regime(PI3)
R2 = Regime(PI2)


@pytest.fixture(scope="module")
def coverage1(graphs_dir):
    return load_eg(os.path.join(graphs_dir, "coverage1.eg"))


@pytest.fixture(scope="module")
def locglob(graphs_dir):
    return load_eg(os.path.join(graphs_dir, "locglob.eg"))


def graph_of(text: str):
    return parse_eg(text)


# ---------------------------------------------------------------------------
# coverage

def test_default_coverage(coverage1):
    assert default_covered(coverage1, "A", R2).holds
    assert default_covered(coverage1, "B", R2).holds
    assert not default_covered(coverage1, "C", R2).holds
    assert not default_covered(coverage1, "D", R2).holds


def test_pinned_arguments_rule_out_half(coverage1):
    # p(A) > 0.5 leaves 1/2 unattainable for A
    v = default_covered(coverage1, "A", R2)
    attainable = {F(3, 4), F(1)}
    assert v.witness["x"] not in attainable


def test_probes_on_pinned_arguments_do_not_help(coverage1):
    for target in ("C", "D"):
        assert not covered(coverage1, target, ["A", "B"], "partial", R2).holds
        assert not covered(coverage1, target, ["A", "B"], "full", R2).holds


def test_mutual_coverage_of_c_and_d(coverage1):
    assert covered(coverage1, "D", ["C"], "full", R2).holds
    assert covered(coverage1, "D", ["C"], "partial", R2).holds
    assert covered(coverage1, "C", ["D"], "full", R2).holds


def test_empty_probe_set_reduces_to_default(coverage1):
    assert (covered(coverage1, "A", [], "partial", R2).holds
            == default_covered(coverage1, "A", R2).holds)


def test_arbitrary_coverage_search(coverage1):
    v = arbitrary_covered(coverage1, "D", "full", R2)
    assert v.holds
    assert v.witness["F"] in ((), ("C",), ("B", "C"))


COUNTEREX_FULLPART = """
arguments:
A
B
C

edges:
B -> A [-]
C -> A [-]
B -> C [-]

constraints:
p(B) > 0.5 -> p(C) <= 0.5
(p(B) > 0.5 & p(C) >= 0.5) -> p(A) < 0.5
"""


def test_partial_without_full_coverage():
    eg = graph_of(COUNTEREX_FULLPART)
    partial = covered(eg, "A", ["B", "C"], "partial", R2)
    assert partial.holds
    full = covered(eg, "A", ["B", "C"], "full", R2)
    assert not full.holds
    # the combination leaving A unconstrained keeps B rejected-or-undecided
    cc = dict(full.counterexample["combination"].entries)
    assert cc["B"] <= F(1, 2)


# ---------------------------------------------------------------------------
# effectiveness

EFFECTIVE_SIMPLE = """
arguments:
A
B

edges:
A -> B [-]

constraints:
p(A) > 0.5 -> p(B) <= 0.5
"""


def test_effectiveness_simple():
    eg = graph_of(EFFECTIVE_SIMPLE)
    assert effective(eg, ("A", "B"), ["A"], "plain", R3).holds
    assert effective(eg, ("A", "B"), ["A"], "strong", R3).holds


EFFECTIVE_TWO_SOURCES = """
arguments:
A
B
C

edges:
A -> B [+]
C -> B [+]

constraints:
p(A) > 0.5 -> p(B) > 0.5
p(C) > 0.5 -> p(B) > 0.9
"""


def test_effectiveness_not_strong_with_interference():
    eg = graph_of(EFFECTIVE_TWO_SOURCES)
    regime = Regime(PI10)
    f = ["A", "C"]
    assert effective(eg, ("A", "B"), f, "plain", regime).holds
    assert effective(eg, ("C", "B"), f, "plain", regime).holds
    assert effective(eg, ("C", "B"), f, "strong", regime).holds
    v = effective(eg, ("A", "B"), f, "strong", regime)
    assert not v.holds
    cc = dict(v.counterexample["combination"].entries)
    # pinning C high already forces the target, so probing A changes nothing
    assert cc["C"] > F(1, 2)


EFFECTIVE_GAP = """
arguments:
A
B
C

edges:
B -> A [-]
C -> A [-]

constraints:
p(B) <= 0.5 & p(C) < 0.5
(p(B) <= 0.5 & p(C) < 0.5) -> p(A) < 0.5
"""


def test_effectiveness_gap():
    eg = graph_of(EFFECTIVE_GAP)
    assert not effective(eg, ("B", "A"), ["B", "C"], "plain", R3).holds
    assert not effective(eg, ("C", "A"), ["B", "C"], "plain", R3).holds


def test_semi_effectiveness_recovers_the_gap():
    eg = graph_of(EFFECTIVE_GAP)
    z = [parse_formula("(p(B) <= 0.5 & p(C) < 0.5) -> p(A) < 0.5")]
    for rel in (("B", "A"), ("C", "A")):
        assert semi_effective(eg, z, rel, ["B", "C"], "plain", R3).holds
        assert not semi_effective(eg, z, rel, ["B", "C"], "strong", R3).holds


def test_validate_z_rejects_foreign_formulas():
    eg = graph_of(EFFECTIVE_GAP)
    with pytest.raises(BadZ):
        validate_z(eg, [parse_formula("p(A) > 0.5")], R3)


def test_target_cannot_be_probed():
    eg = graph_of(EFFECTIVE_SIMPLE)
    with pytest.raises(ValueError):
        effective(eg, ("A", "B"), ["B"], "plain", R3)


# ---------------------------------------------------------------------------
# relation types on the four-argument graph

Z_BA = ["(p(A) <= 0.5 | p(B) > 0.5 | p(C) > 0.5) & (p(A) > 0.5 | p(B) <= 0.5 | p(D) >= 0.5)"]
Z_CA = ["(p(A) <= 0.5 | p(B) > 0.5 | p(C) > 0.5) & (p(A) > 0.5 | p(C) <= 0.5 | p(D) >= 0.5)"]
Z_DA = ["(p(D) < 0.5 & (p(B) > 0.5 | p(C) > 0.5)) -> p(A) > 0.5",
        "p(D) > 0.5 -> p(A) < 0.5"]
Z_BD = ["p(B) > 0.5 -> p(D) > 0.5"]


def rt(eg, z, rel, f):
    zf = [parse_formula(s) for s in z] if z is not None else None
    return relation_type(eg, zf, rel, f, R3)


def test_relation_types_supporters(locglob):
    v = rt(locglob, Z_BA, ("B", "A"), ["B", "C", "D"])
    assert v.types == ("supporting",) and v.strong == ("supporting",)
    v = rt(locglob, Z_CA, ("C", "A"), ["B", "C", "D"])
    assert v.types == ("supporting",) and v.strong == ("supporting",)


def test_relation_type_attacker(locglob):
    v = rt(locglob, Z_DA, ("D", "A"), ["B", "C", "D"])
    assert v.types == ("attacking",) and v.strong == ("attacking",)


def test_relation_type_unspecified_under_full_constraints(locglob):
    v = rt(locglob, None, ("B", "A"), ["B", "C", "D"])
    assert v.types == ("unspecified",)


def test_relation_type_subtle_under_smaller_probe(locglob):
    v = rt(locglob, None, ("B", "A"), ["B", "C"])
    assert set(v.types) == {"attacking", "supporting", "subtle"}
    assert v.strong == ("attacking",)


def test_relation_type_bd(locglob):
    v = rt(locglob, Z_BD, ("B", "D"), ["B"])
    assert set(v.types) == {"attacking", "supporting", "subtle"}
    assert v.strong == ("supporting",)


def test_labeling_consistent_with_z_candidates(locglob):
    zc = [tuple(parse_formula(s) for s in z)
          for z in (Z_BA, Z_CA, Z_DA, Z_BD)]
    zc.append(tuple(locglob.constraints))
    for mode in ("consistent", "strong"):
        rows = labeling_consistency(locglob, mode, R3, zcandidates=zc)
        assert all(r["ok"] for r in rows), [r for r in rows if not r["ok"]]


# ---------------------------------------------------------------------------
# monotonicity

MONOTON = """
arguments:
A
B
C

edges:
B -> A [+]
C -> A [-]

constraints:
p(C) + p(A) - p(B) = 1
"""


def test_monotonicity_classification():
    eg = graph_of(MONOTON)
    v = monotonicity(eg, None, ("B", "A"), ["B", "C"], R3)
    assert v.witness["classification"] == "positive"
    v = monotonicity(eg, None, ("C", "A"), ["B", "C"], R3)
    assert v.witness["classification"] == "negative"


def test_monotonic_labeling(graphs_dir):
    eg = graph_of(MONOTON)
    rows = labeling_consistency(eg, "monotonic", R3)
    assert all(r["ok"] for r in rows)


def test_nonmonotonic_dependence(locglob):
    for rel in (("B", "A"), ("C", "A"), ("D", "A")):
        v = monotonicity(locglob, None, rel, ["B", "C", "D"], R3)
        assert v.witness["classification"] == "nonmonotonic-dependent"


# ---------------------------------------------------------------------------
# misc

def test_combinations_canonical_order():
    got = list(combinations_over(["A"], PI3))
    assert [c.entries for c in got] == [
        (("A", F(0)),), (("A", F(1, 2)),), (("A", F(1)),)]


def test_combination_restrict():
    cc = Combination((("A", F(1)), ("B", F(0))))
    assert cc.restrict(frozenset({"B"})).entries == (("B", F(0)),)


def test_coherence_report_shape(coverage1):
    flags = coherence_report(coverage1, R2)
    assert set(flags) == {
        "bounded", "entry_bounded", "directly_connected",
        "indirectly_connected", "hidden_connected", "locally_connected",
    }


def test_arbitrary_searches(locglob):
    assert arbitrary_semi_effective(locglob, ("B", "D"), R3).holds
    v = arbitrary_relation_type(locglob, ("B", "A"), "supporting", False, R3)
    assert v.holds
