"""Core constraint language: terms, operational formulae, epistemic formulae,
and restricted value set combinatorics.

Terms are Boolean combinations of arguments. An operational formula is a
+/- chain of term probabilities; comparing it against a rational gives an
epistemic atom; Boolean combinations of atoms give epistemic formulae.

Everything here is an immutable value built on exact rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence, Union

# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Arg:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "#t"


@dataclass(frozen=True)
class Bot:
    def __str__(self) -> str:
        return "#f"


@dataclass(frozen=True)
class Neg:
    sub: "Term"


@dataclass(frozen=True)
class Conj:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Disj:
    left: "Term"
    right: "Term"


Term = Union[Arg, Top, Bot, Neg, Conj, Disj]

TOP = Top()
BOT = Bot()


def term_args(t: Term) -> frozenset[str]:
    """Argument names occurring in a term."""
    if isinstance(t, Arg):
        return frozenset({t.name})
    if isinstance(t, (Top, Bot)):
        return frozenset()
    if isinstance(t, Neg):
        return term_args(t.sub)
    return term_args(t.left) | term_args(t.right)


# precedence: ! > & > |
_TERM_PREC = {Disj: 1, Conj: 2, Neg: 3}


def pretty_term(t: Term, _parent_prec: int = 0) -> str:
    if isinstance(t, (Arg, Top, Bot)):
        return str(t)
    prec = _TERM_PREC[type(t)]
    if isinstance(t, Neg):
        s = "!" + pretty_term(t.sub, prec)
    else:
        op = " & " if isinstance(t, Conj) else " | "
        # left-assoc: same-precedence right child needs parens
        s = pretty_term(t.left, prec - 1) + op + pretty_term(t.right, prec)
    if prec <= _parent_prec:
        return "(" + s + ")"
    return s


def term_models(t: Term, order: Sequence[str]) -> frozenset[int]:
    """Worlds (bitmasks over the declared ordering) satisfying a term.

    Argument i of the ordering lives at bit i, so the world {A, C} over
    the ordering (A, B, C) is 0b101.
    """
    n = len(order)
    idx = {name: i for i, name in enumerate(order)}
    all_worlds = frozenset(range(1 << n))

    def go(t: Term) -> frozenset[int]:
        if isinstance(t, Arg):
            bit = 1 << idx[t.name]
            return frozenset(w for w in all_worlds if w & bit)
        if isinstance(t, Top):
            return all_worlds
        if isinstance(t, Bot):
            return frozenset()
        if isinstance(t, Neg):
            return all_worlds - go(t.sub)
        if isinstance(t, Conj):
            return go(t.left) & go(t.right)
        return go(t.left) | go(t.right)

    return go(t)


def prop_entails(t1: Term, t2: Term, order: Sequence[str]) -> bool:
    """Classical entailment between terms: every model of t1 models t2."""
    return term_models(t1, order) <= term_models(t2, order)


def nnf(t: Term, negate: bool = False) -> Term:
    """Negation normal form; negations pushed onto argument leaves."""
    if isinstance(t, Arg):
        return Neg(t) if negate else t
    if isinstance(t, Top):
        return BOT if negate else TOP
    if isinstance(t, Bot):
        return TOP if negate else BOT
    if isinstance(t, Neg):
        return nnf(t.sub, not negate)
    if isinstance(t, Conj):
        if negate:
            return Disj(nnf(t.left, True), nnf(t.right, True))
        return Conj(nnf(t.left), nnf(t.right))
    if negate:
        return Conj(nnf(t.left, True), nnf(t.right, True))
    return Disj(nnf(t.left), nnf(t.right))


# ---------------------------------------------------------------------------
# formulae

@dataclass(frozen=True)
class OpFormula:
    """p(a1) *1 ... *k p(a_{k+1}) with *i in {+, -}."""

    terms: tuple[Term, ...]
    ops: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.ops) != len(self.terms) - 1 or not self.terms:
            raise ValueError("ops must be one shorter than terms")
        if any(o not in ("+", "-") for o in self.ops):
            raise ValueError("ops are + or -")


@dataclass(frozen=True)
class Atom:
    lhs: OpFormula
    cmp: str  # one of = != >= <= > <
    rhs: Fraction

    def __post_init__(self) -> None:
        if self.cmp not in COMPARATORS:
            raise ValueError(f"bad comparator {self.cmp!r}")
        if not 0 <= self.rhs <= 1:
            raise ValueError("rhs outside [0,1]")


@dataclass(frozen=True)
class FTop:
    pass


@dataclass(frozen=True)
class FBot:
    pass


@dataclass(frozen=True)
class FNeg:
    sub: "Formula"


@dataclass(frozen=True)
class FConj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FDisj:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FImp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FIff:
    left: "Formula"
    right: "Formula"


Formula = Union[Atom, FTop, FBot, FNeg, FConj, FDisj, FImp, FIff]

FTOP = FTop()
FBOT = FBot()

COMPARATORS = ("=", "!=", ">=", "<=", ">", "<")

_NEG_CMP = {"=": "!=", "!=": "=", ">=": "<", "<": ">=", "<=": ">", ">": "<="}


def negate_atom(a: Atom) -> Atom:
    return Atom(a.lhs, _NEG_CMP[a.cmp], a.rhs)


def fterms(psi: Formula) -> frozenset[Term]:
    if isinstance(psi, Atom):
        return frozenset(psi.lhs.terms)
    if isinstance(psi, (FTop, FBot)):
        return frozenset()
    if isinstance(psi, FNeg):
        return fterms(psi.sub)
    return fterms(psi.left) | fterms(psi.right)


def fargs(psi: Formula) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for t in fterms(psi):
        out |= term_args(t)
    return out


def nums(psi: Formula) -> frozenset[Fraction]:
    """Numerical values appearing on the right of atoms."""
    if isinstance(psi, Atom):
        return frozenset({psi.rhs})
    if isinstance(psi, (FTop, FBot)):
        return frozenset()
    if isinstance(psi, FNeg):
        return nums(psi.sub)
    return nums(psi.left) | nums(psi.right)


def atoms_of(psi: Formula) -> list[Atom]:
    """Distinct atoms in first-occurrence order."""
    seen: dict[Atom, None] = {}

    def go(p: Formula) -> None:
        if isinstance(p, Atom):
            seen.setdefault(p)
        elif isinstance(p, FNeg):
            go(p.sub)
        elif isinstance(p, (FConj, FDisj, FImp, FIff)):
            go(p.left)
            go(p.right)

    go(psi)
    return list(seen)


def fraction_str(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def pretty_atom(a: Atom) -> str:
    parts = [f"p({pretty_term(a.lhs.terms[0])})"]
    for op, t in zip(a.lhs.ops, a.lhs.terms[1:]):
        parts.append(f" {op} p({pretty_term(t)})")
    return "".join(parts) + f" {a.cmp} {fraction_str(a.rhs)}"


# precedence: ! > & > | > -> > <->
_F_PREC = {FIff: 1, FImp: 2, FDisj: 3, FConj: 4, FNeg: 5}
_F_OP = {FIff: " <-> ", FImp: " -> ", FDisj: " | ", FConj: " & "}


def pretty(psi: Formula, _parent_prec: int = 0) -> str:
    if isinstance(psi, Atom):
        return pretty_atom(psi)
    if isinstance(psi, FTop):
        return "#t"
    if isinstance(psi, FBot):
        return "#f"
    prec = _F_PREC[type(psi)]
    if isinstance(psi, FNeg):
        s = "!" + pretty(psi.sub, prec)
    else:
        s = pretty(psi.left, prec - 1) + _F_OP[type(psi)] + pretty(psi.right, prec)
    if prec <= _parent_prec:
        return "(" + s + ")"
    return s


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:/\d+)?)"
    r"|(?P<op><->|->|!=|>=|<=|[()!&|+\-=<>])"
    r"|(?P<const>\#t|\#f)"
    r"|(?P<id>[A-Za-z_][A-Za-z_0-9]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        for kind in ("num", "op", "const", "id"):
            val = m.group(kind)
            if val is not None:
                toks.append((kind, val, m.start(kind)))
                break
        pos = m.end()
    return toks


def _parse_rational(text: str, pos: int) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        if "." in num:
            raise ParseError("mixed decimal/fraction literal", pos)
        val = Fraction(int(num), int(den))
    else:
        val = Fraction(text)
    if not 0 <= val <= 1:
        raise ParseError(f"rational literal {text} outside [0,1]", pos)
    return val


class _Parser:
    def __init__(self, text: str, graph_args: Optional[set[str]] = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.graph_args = graph_args
        self.len_text = len(text)

    def peek(self) -> Optional[tuple[str, str, int]]:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> tuple[str, str, int]:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input", self.len_text)
        self.i += 1
        return t

    def expect(self, val: str) -> None:
        t = self.peek()
        if t is None or t[1] != val:
            raise ParseError(f"expected {val!r}", t[2] if t else self.len_text)
        self.i += 1

    def at(self, val: str) -> bool:
        t = self.peek()
        return t is not None and t[1] == val

    # terms -------------------------------------------------------------
    def term(self) -> Term:
        left = self.term_disj()
        while self.at("->"):
            self.next()
            right = self.term_disj()
            left = Disj(Neg(left), right)  # derived connective
        return left

    def term_disj(self) -> Term:
        left = self.term_conj()
        while self.at("|"):
            self.next()
            left = Disj(left, self.term_conj())
        return left

    def term_conj(self) -> Term:
        left = self.term_neg()
        while self.at("&"):
            self.next()
            left = Conj(left, self.term_neg())
        return left

    def term_neg(self) -> Term:
        if self.at("!"):
            self.next()
            return Neg(self.term_neg())
        return self.term_primary()

    def term_primary(self) -> Term:
        kind, val, pos = self.next()
        if val == "(":
            t = self.term()
            self.expect(")")
            return t
        if val == "#t":
            return TOP
        if val == "#f":
            return BOT
        if kind == "id":
            if self.graph_args is not None and val not in self.graph_args:
                raise ParseError(f"unknown argument {val!r}", pos)
            return Arg(val)
        raise ParseError(f"unexpected token {val!r} in term", pos)

    # formulae ----------------------------------------------------------
    def formula(self) -> Formula:
        left = self.f_imp()
        while self.at("<->"):
            self.next()
            left = FIff(left, self.f_imp())
        return left

    def f_imp(self) -> Formula:
        left = self.f_disj()
        while self.at("->"):
            self.next()
            left = FImp(left, self.f_disj())
        return left

    def f_disj(self) -> Formula:
        left = self.f_conj()
        while self.at("|"):
            self.next()
            left = FDisj(left, self.f_conj())
        return left

    def f_conj(self) -> Formula:
        left = self.f_neg()
        while self.at("&"):
            self.next()
            left = FConj(left, self.f_neg())
        return left

    def f_neg(self) -> Formula:
        if self.at("!"):
            self.next()
            return FNeg(self.f_neg())
        return self.f_primary()

    def f_primary(self) -> Formula:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input", self.len_text)
        if t[1] == "(":
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        if t[1] == "#t":
            self.next()
            return FTOP
        if t[1] == "#f":
            self.next()
            return FBOT
        return self.atom()

    def atom(self) -> Atom:
        terms = [self.p_term()]
        ops = []
        while self.at("+") or self.at("-"):
            ops.append(self.next()[1])
            terms.append(self.p_term())
        kind, val, pos = self.next()
        if val not in COMPARATORS:
            raise ParseError(f"expected comparator, got {val!r}", pos)
        kind2, num, pos2 = self.next()
        if kind2 != "num":
            raise ParseError(f"expected rational, got {num!r}", pos2)
        return Atom(OpFormula(tuple(terms), tuple(ops)), val, _parse_rational(num, pos2))

    def p_term(self) -> Term:
        t = self.peek()
        if t is None or t[1] != "p":
            raise ParseError("expected p(...)", t[2] if t else self.len_text)
        self.next()
        self.expect("(")
        term = self.term()
        self.expect(")")
        return term


def parse_formula(text: str, graph_args: Optional[set[str]] = None) -> Formula:
    """Parse an epistemic formula; raises ParseError with a position."""
    p = _Parser(text, graph_args)
    f = p.formula()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()[1]!r}", p.peek()[2])
    return f


def parse_term(text: str, graph_args: Optional[set[str]] = None) -> Term:
    p = _Parser(text, graph_args)
    t = p.term()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()[1]!r}", p.peek()[2])
    return t


# ---------------------------------------------------------------------------
# restricted value sets

def compare(v: Fraction, cmp: str, x: Fraction) -> bool:
    if cmp == "=":
        return v == x
    if cmp == "!=":
        return v != x
    if cmp == ">=":
        return v >= x
    if cmp == "<=":
        return v <= x
    if cmp == ">":
        return v > x
    return v < x


@dataclass(frozen=True)
class ValueSetReport:
    restricted: bool
    reasonable: bool
    violation: Optional[tuple[Fraction, Fraction]] = None


def validate_value_set(values: Sequence[Fraction]) -> ValueSetReport:
    """Check closure under bounded addition/subtraction and reasonableness."""
    vs = sorted(set(Fraction(v) for v in values))
    if any(v < 0 or v > 1 for v in vs):
        raise ValueError("value outside [0,1]")
    s = set(vs)
    for x in vs:
        for y in vs:
            if x + y <= 1 and x + y not in s:
                return ValueSetReport(False, False, (x, y))
            if x - y >= 0 and x - y not in s:
                return ValueSetReport(False, False, (x, y))
    return ValueSetReport(True, Fraction(1) in s)


@dataclass(frozen=True)
class RestrictedValueSet:
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        report = validate_value_set(self.values)
        if not report.restricted:
            x, y = report.violation
            raise ValueError(f"not closed: combination of {x} and {y} missing")
        object.__setattr__(self, "values", tuple(sorted(set(self.values))))

    @property
    def reasonable(self) -> bool:
        return Fraction(1) in self.values

    def __contains__(self, x: Fraction) -> bool:
        return x in self.values

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    @staticmethod
    def parse(text: str) -> "RestrictedValueSet":
        """Parse a comma-separated list; '...' fills an arithmetic step,
        e.g. '0,0.1,...,1'."""
        parts = [p.strip() for p in text.split(",")]
        vals: list[Fraction] = []
        i = 0
        while i < len(parts):
            if parts[i] in ("...", ".."):
                if len(vals) < 2 or i + 1 >= len(parts):
                    raise ValueError("'...' needs two values before and one after")
                step = vals[-1] - vals[-2]
                stop = Fraction(parts[i + 1])
                v = vals[-1] + step
                while v < stop:
                    vals.append(v)
                    v += step
                i += 1
                continue
            vals.append(Fraction(parts[i]))
            i += 1
        return RestrictedValueSet(tuple(vals))


def value_subset(pi: RestrictedValueSet, x: Fraction, cmp: str) -> tuple[Fraction, ...]:
    """The members of pi standing in the given comparison to x."""
    return tuple(v for v in pi if compare(v, cmp, x))


def chain_value(values: Sequence[Fraction], ops: Sequence[str]) -> Fraction:
    acc = values[0]
    for op, v in zip(ops, values[1:]):
        acc = acc + v if op == "+" else acc - v
    return acc


def combination_set(
    pi: RestrictedValueSet, x: Fraction, cmp: str, ops: Sequence[str]
) -> tuple[tuple[Fraction, ...], ...]:
    """All (k+1)-tuples over pi whose +/- chain stands in the comparison to x.

    With no operators this is the singleton-tuple lift of value_subset.
    """
    k = len(ops)
    if k == 0:
        return tuple((v,) for v in value_subset(pi, x, cmp))
    out = []
    for tup in product(pi.values, repeat=k + 1):
        if compare(chain_value(tup, ops), cmp, x):
            out.append(tup)
    return tuple(out)


def combination_set_empty(
    pi: RestrictedValueSet, x: Fraction, cmp: str, ops: Sequence[str]
) -> bool:
    """Closed-form emptiness test for combination sets, valid for x in pi."""
    mx = max(pi.values)
    trivial = pi.values == (Fraction(0),)
    k = len(ops)
    if k == 0:
        if trivial and cmp == "!=":
            return True
        if cmp == ">" and x >= mx:
            return True
        if cmp == "<" and x <= min(pi.values):
            return True
        return False
    if trivial:
        return cmp in (">", "<", "!=")
    if cmp == ">" and x == mx and "+" not in ops:
        return True
    if cmp == "<" and x == 0 and "-" not in ops:
        return True
    return False
