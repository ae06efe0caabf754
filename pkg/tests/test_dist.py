"""Belief distributions, restricted enumeration and the DDNF."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from epigraph.dist import (
    BeliefDistribution,
    EnumerationCapError,
    argument_complete_terms,
    associated_formula,
    ddnf,
    dump_distribution,
    enumerate_restricted,
    eval_formula,
    prob_of_term,
    sat_restricted,
)
from epigraph.lang import (
    RestrictedValueSet,
    parse_formula,
    parse_term,
    pretty,
    pretty_term,
)

F = Fraction
PI3 = RestrictedValueSet.parse("0,0.5,1")
PI2 = RestrictedValueSet.parse("0,0.25,...,1")

# world order for two arguments A, B: (), (A), (B), (A,B)
D = lambda *m: BeliefDistribution(2, tuple(F(x) for x in m))


def test_distribution_must_sum_to_one():
    with pytest.raises(ValueError):
        BeliefDistribution(1, (F(1, 2), F(1, 4)))


def test_marginals():
    p = D("0.1", "0.3", "0.2", "0.4")
    assert p.marginal(0) == F(7, 10)
    assert p.marginal(1) == F(3, 5)


def test_prob_of_term():
    p = D("0.1", "0.3", "0.2", "0.4")
    assert prob_of_term(p, parse_term("A | B"), ["A", "B"]) == F(9, 10)
    assert prob_of_term(p, parse_term("A & !B"), ["A", "B"]) == F(3, 10)


def test_eval_formula_chain():
    p = D("0.1", "0.3", "0.2", "0.4")
    f = parse_formula("p(A) + p(!B) <= 0.75")
    # 0.7 + 0.4 = 1.1 > 0.75
    assert not eval_formula(p, f, ["A", "B"])


def test_enumeration_counts():
    assert len(enumerate_restricted(2, PI3)) == 10
    assert len(enumerate_restricted(3, PI3)) == 36


def test_enumeration_is_lexicographic():
    dists = enumerate_restricted(1, PI3)
    masses = [p.masses for p in dists]
    assert masses == sorted(masses)


def test_sat_restricted_disjunction_golden():
    phi = parse_formula("p(A | B) > 0.5")
    got = [p.masses for p in sat_restricted([phi], ["A", "B"], PI3)]
    assert got == [
        (F(0), F(0), F(0), F(1)),
        (F(0), F(0), F(1, 2), F(1, 2)),
        (F(0), F(0), F(1), F(0)),
        (F(0), F(1, 2), F(0), F(1, 2)),
        (F(0), F(1, 2), F(1, 2), F(0)),
        (F(0), F(1), F(0), F(0)),
    ]


def test_sat_restricted_sum_golden():
    phi = parse_formula("p(A) + p(B) <= 0.5")
    got = [p.masses for p in sat_restricted([phi], ["A", "B"], PI3)]
    assert got == [
        (F(1, 2), F(0), F(1, 2), F(0)),
        (F(1, 2), F(1, 2), F(0), F(0)),
        (F(1), F(0), F(0), F(0)),
    ]


def test_argument_complete_terms_order():
    got = [pretty_term(t) for t in argument_complete_terms(["A", "B"])]
    assert got == ["!A & !B", "A & !B", "!A & B", "A & B"]


def test_associated_formula():
    p = D("0.1", "0.3", "0.2", "0.4")
    assert pretty(associated_formula(p, ["A", "B"])) == (
        "p(!A & !B) = 1/10 & p(A & !B) = 3/10 & p(!A & B) = 1/5 & p(A & B) = 2/5"
    )


def test_ddnf_disjunction():
    phi = parse_formula("p(A | B) > 0.5")
    result = ddnf(phi, ["A", "B"], PI3)
    expected = " | ".join(
        pretty(associated_formula(p, ["A", "B"]))
        for p in sat_restricted([phi], ["A", "B"], PI3)
    )
    assert pretty(result) == expected


def test_ddnf_of_unsatisfiable_is_bottom():
    phi = parse_formula("p(A) > 0.5 & p(A) < 0.5")
    assert pretty(ddnf(phi, ["A"], PI3)) == "#f"


def test_ddnf_rejects_foreign_numbers():
    phi = parse_formula("p(A) > 0.3")
    with pytest.raises(ValueError):
        ddnf(phi, ["A"], PI3)


def test_caps():
    big = RestrictedValueSet.parse("0,0.05,...,1")
    with pytest.raises(EnumerationCapError):
        enumerate_restricted(7, PI3)
    with pytest.raises(EnumerationCapError):
        enumerate_restricted(6, big)


def test_dump_distribution():
    d = dump_distribution(D(0, 1, 0, 0), ["A", "B"])
    assert d["marginals"] == {"A": "1", "B": "0"}


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(enumerate_restricted(2, PI2)))
def test_distribution_satisfies_own_associated_formula(p):
    phi = associated_formula(p, ["A", "B"])
    assert eval_formula(p, phi, ["A", "B"])
    for q in enumerate_restricted(2, PI2):
        if q != p:
            assert not eval_formula(q, phi, ["A", "B"])


@given(st.sampled_from(enumerate_restricted(2, PI3)))
def test_marginals_are_in_pi_for_ternary_sums(p):
    # masses from the set need not give marginals in the set in general,
    # but sums of members that stay below one do, by closure
    for i in range(2):
        assert p.marginal(i) in PI3
