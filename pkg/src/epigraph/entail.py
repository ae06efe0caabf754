"""Restricted entailment, consistency, closure, refutation, the subject
inequality relation, and a semantic verifier for the proof-rule schemas.

Entailment is decided by model enumeration over the restricted value set;
the rule system is kept as a checkable artifact, not as a prover.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional, Sequence

from .lang import (
    Atom,
    FBot,
    FConj,
    FDisj,
    FIff,
    FImp,
    FNeg,
    FTop,
    Formula,
    FBOT,
    FTOP,
    OpFormula,
    RestrictedValueSet,
    Term,
    atoms_of,
    combination_set,
    prop_entails,
    term_models,
    TOP,
    BOT,
)
from .dist import BeliefDistribution, sat_restricted


@dataclass(frozen=True)
class EntailmentResult:
    holds: bool
    witness: Optional[BeliefDistribution] = None

    def __bool__(self) -> bool:
        return self.holds


def entails(
    phis: Iterable[Formula],
    psi: Formula,
    order: Sequence[str],
    pi: RestrictedValueSet,
    cap_override: bool = False,
) -> EntailmentResult:
    """Does every restricted model of the premise set satisfy psi?

    On failure the canonically first countermodel is attached.
    """
    from .dist import eval_formula

    for p in sat_restricted(phis, order, pi, cap_override):
        if not eval_formula(p, psi, order):
            return EntailmentResult(False, p)
    return EntailmentResult(True)


def consistent(
    phis: Iterable[Formula],
    order: Sequence[str],
    pi: RestrictedValueSet,
    cap_override: bool = False,
) -> bool:
    return bool(sat_restricted(phis, order, pi, cap_override))


def in_closure(
    phis: Iterable[Formula],
    psi: Formula,
    order: Sequence[str],
    pi: RestrictedValueSet,
    cap_override: bool = False,
) -> bool:
    return entails(phis, psi, order, pi, cap_override).holds


def entails_by_refutation(
    phis: Iterable[Formula],
    psi: Formula,
    order: Sequence[str],
    pi: RestrictedValueSet,
    cap_override: bool = False,
) -> bool:
    """Premises plus the negated query must be unsatisfiable; agrees with
    entails on every input."""
    return not consistent(list(phis) + [FNeg(psi)], order, pi, cap_override)


# ---------------------------------------------------------------------------
# subject inequality relation

def subject_relation(
    phi1: Atom, phi2: Atom, order: Sequence[str]
) -> Optional[str]:
    """'plus' or 'minus' when phi2 weakens a single element of phi1 in a
    positive resp. negative position; None otherwise.

    Identical atoms weaken trivially in position one, hence 'plus'.
    """
    if phi1.cmp != phi2.cmp or phi1.rhs != phi2.rhs:
        return None
    if phi1.lhs.ops != phi2.lhs.ops:
        return None
    t1, t2 = phi1.lhs.terms, phi2.lhs.terms
    if len(t1) != len(t2):
        return None
    diffs = [i for i in range(len(t1)) if t1[i] != t2[i]]
    if len(diffs) > 1:
        return None
    i = diffs[0] if diffs else 0
    if not prop_entails(t1[i], t2[i], order):
        return None
    positive = i == 0 or phi1.lhs.ops[i - 1] == "+"
    return "plus" if positive else "minus"


# ---------------------------------------------------------------------------
# propositional reasoning over atoms-as-letters

def _prop_eval(psi: Formula, val: dict[Atom, bool]) -> bool:
    if isinstance(psi, Atom):
        return val[psi]
    if isinstance(psi, FTop):
        return True
    if isinstance(psi, FBot):
        return False
    if isinstance(psi, FNeg):
        return not _prop_eval(psi.sub, val)
    if isinstance(psi, FConj):
        return _prop_eval(psi.left, val) and _prop_eval(psi.right, val)
    if isinstance(psi, FDisj):
        return _prop_eval(psi.left, val) or _prop_eval(psi.right, val)
    if isinstance(psi, FImp):
        return (not _prop_eval(psi.left, val)) or _prop_eval(psi.right, val)
    return _prop_eval(psi.left, val) == _prop_eval(psi.right, val)


def prop_tautological_entailment(
    premises: Iterable[Formula], psi: Formula
) -> bool:
    """Truth-table entailment treating distinct atoms as letters."""
    premises = tuple(premises)
    letters: list[Atom] = []
    for f in list(premises) + [psi]:
        for a in atoms_of(f):
            if a not in letters:
                letters.append(a)
    for bits in product((False, True), repeat=len(letters)):
        val = dict(zip(letters, bits))
        if all(_prop_eval(f, val) for f in premises) and not _prop_eval(psi, val):
            return False
    return True


# ---------------------------------------------------------------------------
# proof-rule schemas

RULE_IDS = (
    "B1", "B2", "B3", "B4", "PR1",
    "S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8",
    "E1", "E2", "E3", "E4", "E5",
    "P1", "P2",
)


class SchemaMismatch(ValueError):
    pass


def _sat_equal(
    f1: Formula, f2: Formula, order: Sequence[str], pi: RestrictedValueSet
) -> bool:
    return sat_restricted([f1], order, pi) == sat_restricted([f2], order, pi)


def _valid(psi: Formula, order: Sequence[str], pi: RestrictedValueSet) -> bool:
    return entails([], psi, order, pi).holds


def _enum_disjunction(atom: Atom, cmp: str, pi: RestrictedValueSet) -> Formula:
    """Disjunction over the combination set of per-term equalities."""
    combos = combination_set(pi, atom.rhs, cmp, atom.lhs.ops)
    if not combos:
        return FBOT
    parts = []
    for tup in combos:
        conj: Formula = Atom(OpFormula((atom.lhs.terms[0],), ()), "=", tup[0])
        for t, v in zip(atom.lhs.terms[1:], tup[1:]):
            conj = FConj(conj, Atom(OpFormula((t,), ()), "=", v))
        parts.append(conj)
    f: Formula = parts[0]
    for part in parts[1:]:
        f = FDisj(f, part)
    return f


def verify_rule_instance(
    rule: str,
    premises: Sequence[Formula],
    conclusion: Formula,
    order: Sequence[str],
    pi: RestrictedValueSet,
) -> bool:
    """Check that a schema instance is semantically sound under pi.

    The basic rules assert validity of their conclusion; the subject rules
    assert premise-to-conclusion entailment; the enumeration rules assert
    restricted satisfaction-set equality between both sides; P1/P2 lift
    truth-table entailment over atoms-as-letters.
    """
    if rule in ("B1", "B2", "B3", "B4"):
        if not isinstance(conclusion, Atom) or conclusion.lhs.ops:
            raise SchemaMismatch(f"{rule} expects a single-term atom")
        a = conclusion
        shapes = {
            "B1": a.cmp == ">=" and a.rhs == 0,
            "B2": a.cmp == "<=" and a.rhs == 1,
            "B3": a.cmp == "=" and a.rhs == 1
            and term_models(a.lhs.terms[0], order) == term_models(TOP, order),
            "B4": a.cmp == "=" and a.rhs == 0
            and term_models(a.lhs.terms[0], order) == term_models(BOT, order),
        }
        if not shapes[rule]:
            raise SchemaMismatch(f"conclusion does not match {rule}")
        return _valid(conclusion, order, pi)

    if rule == "PR1":
        # p(a|b) - p(a) - p(b) + p(a&b) = 0
        if not isinstance(conclusion, Atom):
            raise SchemaMismatch("PR1 expects an atom")
        a = conclusion
        if (
            a.cmp != "="
            or a.rhs != 0
            or a.lhs.ops != ("-", "-", "+")
            or len(a.lhs.terms) != 4
        ):
            raise SchemaMismatch("PR1 shape is p(a|b) - p(a) - p(b) + p(a&b) = 0")
        t_or, t_a, t_b, t_and = a.lhs.terms
        from .lang import Conj, Disj

        if term_models(t_or, order) != term_models(Disj(t_a, t_b), order):
            raise SchemaMismatch("first term is not the disjunction")
        if term_models(t_and, order) != term_models(Conj(t_a, t_b), order):
            raise SchemaMismatch("last term is not the conjunction")
        return _valid(conclusion, order, pi)

    if rule.startswith("S"):
        if len(premises) != 1:
            raise SchemaMismatch("subject rules take one premise")
        prem, concl = premises[0], conclusion
        if not isinstance(prem, Atom) or not isinstance(concl, Atom):
            raise SchemaMismatch("subject rules relate atoms")
        spec = {
            # rule: (cmp set, relation direction, weaker side)
            "S1": ((">",), "plus", "concl"),
            "S2": ((">=",), "plus", "concl"),
            "S3": (("<",), "minus", "concl"),
            "S4": (("<=",), "minus", "concl"),
            "S5": (("<",), "plus", "prem"),
            "S6": (("<=",), "plus", "prem"),
            "S7": ((">",), "minus", "prem"),
            "S8": ((">=",), "minus", "prem"),
        }[rule]
        cmps, direction, weaker = spec
        if prem.cmp not in cmps:
            raise SchemaMismatch(f"{rule} needs comparator in {cmps}")
        # for S1-S4 the premise is the stronger formula f1; for S5-S8 the
        # premise is f2 and the conclusion is the stronger f1's consequence
        f1, f2 = (prem, concl) if weaker == "concl" else (concl, prem)
        if subject_relation(f1, f2, order) != direction:
            raise SchemaMismatch(f"atoms are not in the {direction} subject relation")
        return entails([prem], concl, order, pi).holds

    if rule.startswith("E"):
        if len(premises) != 1 or not isinstance(premises[0], Atom):
            raise SchemaMismatch("enumeration rules take one atom premise")
        a = premises[0]
        if rule == "E1":
            rhs = _enum_disjunction(a, a.cmp, pi)
        elif rule == "E2":
            if a.cmp != ">":
                raise SchemaMismatch("E2 is for >")
            rhs = FNeg(_enum_disjunction(a, "<=", pi))
        elif rule == "E3":
            if a.cmp != ">=":
                raise SchemaMismatch("E3 is for >=")
            inner = _enum_disjunction(a, "<", pi)
            rhs = FNeg(inner) if not isinstance(inner, FBot) else FNeg(FBOT)
        elif rule == "E4":
            if a.cmp != "<":
                raise SchemaMismatch("E4 is for <")
            rhs = FNeg(_enum_disjunction(a, ">=", pi))
        else:
            if a.cmp != "<=":
                raise SchemaMismatch("E5 is for <=")
            inner = _enum_disjunction(a, ">", pi)
            rhs = FNeg(inner) if not isinstance(inner, FBot) else FNeg(FBOT)
        if conclusion != rhs:
            raise SchemaMismatch("conclusion is not the enumerated form")
        return _sat_equal(a, rhs, order, pi)

    if rule == "P1":
        if not premises:
            raise SchemaMismatch("P1 needs at least one premise")
        if not prop_tautological_entailment(premises, conclusion):
            raise SchemaMismatch("premises do not propositionally entail the conclusion")
        for p in sat_restricted(premises, order, pi):
            from .dist import eval_formula

            if not eval_formula(p, conclusion, order):
                return False
        return True

    if rule == "P2":
        if not prop_tautological_entailment([], conclusion):
            raise SchemaMismatch("conclusion is not a propositional tautology")
        return _valid(conclusion, order, pi)

    raise SchemaMismatch(f"unknown rule {rule!r}")
