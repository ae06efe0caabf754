"""Exact reasoning engine for epistemic graphs: probabilistic argumentation
with epistemic constraints over restricted value sets."""

from .lang import (
    Arg,
    Atom,
    Formula,
    OpFormula,
    ParseError,
    RestrictedValueSet,
    Term,
    parse_formula,
    parse_term,
    pretty,
    pretty_term,
)
from .dist import BeliefDistribution, ddnf, sat_restricted
from .entail import entails, consistent, in_closure
from .graph import EpistemicGraph, LabelledGraph, load_eg, parse_eg
from .analysis import Regime
from .dialogue import DialogueSession

__all__ = [
    "Arg",
    "Atom",
    "BeliefDistribution",
    "DialogueSession",
    "EpistemicGraph",
    "Formula",
    "LabelledGraph",
    "OpFormula",
    "ParseError",
    "Regime",
    "RestrictedValueSet",
    "Term",
    "consistent",
    "ddnf",
    "entails",
    "in_closure",
    "load_eg",
    "parse_eg",
    "parse_formula",
    "parse_term",
    "pretty",
    "pretty_term",
    "sat_restricted",
]

__version__ = "0.1.0"
