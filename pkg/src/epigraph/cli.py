"""Command-line front end.

Every subcommand prints either a human-readable text rendering or, with
--format json, a JSON document. Output is deterministic: all orderings are
canonical, so identical inputs produce byte-identical output.

Exit codes: 0 success; 1 negative query answer under --strict; 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import analysis, dialogue, semantics, translate
from .dist import (
    BeliefDistribution,
    EnumerationCapError,
    ddnf,
    dump_distribution,
    sat_restricted,
)
from .entail import consistent, entails
from .graph import EpistemicGraph, dump_eg, eg_to_json, load_eg, validate_graph
from .lang import (
    Arg,
    Atom,
    Formula,
    ParseError,
    RestrictedValueSet,
    fraction_str,
    parse_formula,
    pretty,
)

DEFAULT_PI = "0,0.5,1"


class CliError(Exception):
    def __init__(self, msg: str, code: int = 2):
        super().__init__(msg)
        self.code = code


# ---------------------------------------------------------------------------
# serialization helpers

def _plain(obj, order: Optional[Sequence[str]] = None):
    """Render engine objects into JSON-compatible plain data."""
    if isinstance(obj, BeliefDistribution):
        return dump_distribution(obj, order or [f"x{i}" for i in range(obj.n)])
    if isinstance(obj, analysis.Combination):
        return {a: fraction_str(v) for a, v in obj.entries}
    if isinstance(obj, analysis.Verdict):
        out = {"holds": obj.holds, "regime": obj.regime.describe()}
        if obj.witness is not None:
            out["witness"] = _plain(obj.witness, order)
        if obj.counterexample is not None:
            out["counterexample"] = _plain(obj.counterexample, order)
        if obj.note:
            out["note"] = obj.note
        return out
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if _is_formula(obj):
        return pretty(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v, order) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=str)
        return [_plain(v, order) for v in items]
    return obj


def _is_formula(obj) -> bool:
    from .lang import FBot, FConj, FDisj, FIff, FImp, FNeg, FTop

    return isinstance(obj, (Atom, FTop, FBot, FNeg, FConj, FDisj, FImp, FIff))


def _emit(ns, payload: dict, text_lines: list[str]) -> None:
    if ns.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _pi_of(ns) -> RestrictedValueSet:
    try:
        return RestrictedValueSet.parse(ns.pi)
    except ValueError as e:
        raise CliError(f"bad --pi: {e}")


def _regime_of(ns) -> analysis.Regime:
    return analysis.Regime(_pi_of(ns), ns.cap, ns.force)


def _load(path: str) -> EpistemicGraph:
    try:
        return load_eg(path)
    except OSError as e:
        raise CliError(str(e))
    except (ValueError, ParseError) as e:
        raise CliError(f"{path}: {e}")


def _parse_formulas(texts: Sequence[str], eg: Optional[EpistemicGraph]) -> list[Formula]:
    known = set(eg.args) if eg is not None else None
    out = []
    for t in texts:
        try:
            out.append(parse_formula(t, known))
        except ParseError as e:
            raise CliError(f"bad formula {t!r}: {e}")
    return out


def _order_of(ns, eg: Optional[EpistemicGraph], phis: Sequence[Formula]) -> tuple[str, ...]:
    if eg is not None:
        return eg.args
    if getattr(ns, "args_list", None):
        return tuple(a.strip() for a in ns.args_list.split(","))
    from .lang import fargs

    seen: list[str] = []
    for f in phis:
        for a in sorted(fargs(f)):
            if a not in seen:
                seen.append(a)
    return tuple(seen)


def _dist_lines(dists, order) -> list[str]:
    lines = [f"worlds over <{','.join(order)}>"]
    for i, p in enumerate(dists, 1):
        masses = " ".join(fraction_str(m) for m in p.masses)
        margs = " ".join(
            f"p({a})={fraction_str(p.marginal(j))}" for j, a in enumerate(order)
        )
        lines.append(f"P{i}: masses [{masses}]  {margs}")
    return lines


def _rel_of(ns) -> tuple[str, str]:
    parts = [p.strip() for p in ns.rel.split(",")]
    if len(parts) != 2:
        raise CliError("--rel expects 'SOURCE,TARGET'")
    return parts[0], parts[1]


def _probe_of(ns) -> tuple[str, ...]:
    if not ns.probe:
        return ()
    return tuple(p.strip() for p in ns.probe.split(",") if p.strip())


def _z_of(ns, eg) -> Optional[tuple[Formula, ...]]:
    if not ns.z:
        return None
    return tuple(_parse_formulas(ns.z, eg))


# ---------------------------------------------------------------------------
# subcommand handlers; each returns True when a --strict-negative applies

def cmd_parse(ns) -> bool:
    eg = _load(ns.file)
    payload = eg_to_json(eg)
    _emit(ns, payload, dump_eg(eg).splitlines())
    return False


def cmd_validate(ns) -> bool:
    eg = _load(ns.file)
    issues = validate_graph(eg)
    _emit(ns, {"issues": issues, "ok": not issues},
          issues or ["ok"])
    return bool(issues)


def cmd_sat(ns) -> bool:
    eg = _load(ns.file)
    pi = _pi_of(ns)
    dists = sat_restricted(eg.constraints, eg.args, pi, ns.force)
    names = [f for f in semantics.FILTERS if getattr(ns, f.replace("-", "_"))]
    dists = semantics.filter_distributions(dists, names)
    payload = {"count": len(dists),
               "distributions": [dump_distribution(p, eg.args) for p in dists]}
    _emit(ns, payload, _dist_lines(dists, eg.args) + [f"count: {len(dists)}"])
    return not dists


def cmd_entail(ns) -> bool:
    eg = _load(ns.file) if ns.file else None
    assumptions = _parse_formulas(ns.assume, eg)
    if eg is not None:
        assumptions = list(eg.constraints) + assumptions
    query = _parse_formulas([ns.query], eg)[0]
    order = _order_of(ns, eg, assumptions + [query])
    res = entails(assumptions, query, order, _pi_of(ns), ns.force)
    payload = {"holds": res.holds}
    lines = ["holds" if res.holds else "does not hold"]
    if res.witness is not None:
        payload["witness"] = dump_distribution(res.witness, order)
        lines += _dist_lines([res.witness], order)
    _emit(ns, payload, lines)
    return not res.holds


def cmd_ddnf(ns) -> bool:
    phi = _parse_formulas([ns.query], None)[0]
    order = _order_of(ns, None, [phi])
    try:
        result = ddnf(phi, order, _pi_of(ns))
    except ValueError as e:
        raise CliError(str(e))
    _emit(ns, {"ddnf": pretty(result)}, [pretty(result)])
    return False


def cmd_closure_check(ns) -> bool:
    eg = _load(ns.file)
    query = _parse_formulas([ns.query], eg)[0]
    res = entails(eg.constraints, query, eg.args, _pi_of(ns), ns.force)
    _emit(ns, {"in_closure": res.holds},
          ["in closure" if res.holds else "not in closure"])
    return not res.holds


def cmd_coverage(ns) -> bool:
    eg = _load(ns.file)
    regime = _regime_of(ns)
    z = _z_of(ns, eg)
    if ns.mode == "arbitrary":
        v = analysis.arbitrary_covered(eg, ns.arg, ns.submode, regime, z)
    elif ns.mode == "default":
        v = analysis.default_covered(eg, ns.arg, regime, z)
    else:
        v = analysis.covered(eg, ns.arg, _probe_of(ns), ns.mode, regime, z)
    payload = _plain(v, eg.args)
    _emit(ns, payload, [json.dumps(payload, sort_keys=True)])
    return not v.holds


def cmd_effectiveness(ns) -> bool:
    eg = _load(ns.file)
    regime = _regime_of(ns)
    v = analysis.semi_effective(
        eg, _z_of(ns, eg), _rel_of(ns), _probe_of(ns),
        "strong" if ns.strong else "plain", regime,
    )
    payload = _plain(v, eg.args)
    _emit(ns, payload, [json.dumps(payload, sort_keys=True)])
    return not v.holds


def cmd_relation_type(ns) -> bool:
    eg = _load(ns.file)
    regime = _regime_of(ns)
    rel = _rel_of(ns)
    if ns.wanted:
        v = analysis.arbitrary_relation_type(eg, rel, ns.wanted, ns.strong, regime)
        payload = _plain(v, eg.args)
        _emit(ns, payload, [json.dumps(payload, sort_keys=True)])
        return not v.holds
    tv = analysis.relation_type(eg, _z_of(ns, eg), rel, _probe_of(ns), regime)
    payload = {"types": list(tv.types), "strong": list(tv.strong),
               "regime": regime.describe()}
    _emit(ns, payload, [f"types: {', '.join(tv.types)}",
                        f"strong: {', '.join(tv.strong) or '-'}"])
    return False


def cmd_monotonicity(ns) -> bool:
    eg = _load(ns.file)
    v = analysis.monotonicity(
        eg, _z_of(ns, eg), _rel_of(ns), _probe_of(ns), _regime_of(ns)
    )
    payload = _plain(v, eg.args)
    kind = v.witness["classification"]
    _emit(ns, payload, [kind + (f" ({v.note})" if v.note else "")])
    return not v.holds


def cmd_coherence(ns) -> bool:
    eg = _load(ns.file)
    flags = analysis.coherence_report(eg, _regime_of(ns))
    payload = {name: _plain(v, eg.args) for name, v in flags.items()}
    lines = [f"{name}: {'yes' if v.holds else 'no'}"
             + (f" ({v.note})" if v.note else "")
             for name, v in flags.items()]
    _emit(ns, payload, lines)
    return not all(v.holds for v in flags.values())


def cmd_label_check(ns) -> bool:
    eg = _load(ns.file)
    rows = analysis.labeling_consistency(eg, ns.mode, _regime_of(ns))
    payload = {"arcs": _plain(rows, eg.args),
               "consistent": all(r["ok"] for r in rows)}
    lines = []
    for r in rows:
        s, d = r["arc"]
        lines.append(f"({s},{d}) [{','.join(r['labels'])}]: "
                     + ("ok" if r["ok"] else "inconsistent"))
    lines.append("labeling " + ("consistent" if payload["consistent"]
                                else "inconsistent"))
    _emit(ns, payload, lines)
    return not payload["consistent"]


def cmd_semantics(ns) -> bool:
    eg = _load(ns.file)
    pi = _pi_of(ns)
    dists = semantics.satisfaction_semantics(eg, pi, ns.force)
    if ns.filter:
        dists = semantics.filter_distributions(dists, ns.filter)
    if ns.order:
        dists = semantics.select_extreme(dists, ns.order, ns.direction)
    payload = {"count": len(dists),
               "distributions": [dump_distribution(p, eg.args) for p in dists]}
    if ns.entropy:
        payload["entropy"] = [semantics.entropy(p) for p in dists]
    _emit(ns, payload, _dist_lines(dists, eg.args) + [f"count: {len(dists)}"])
    return not dists


def cmd_translate_adf(ns) -> bool:
    try:
        with open(ns.file, encoding="utf-8") as fh:
            adf = translate.parse_adf(fh.read())
    except OSError as e:
        raise CliError(str(e))
    except (ValueError, ParseError) as e:
        raise CliError(f"{ns.file}: {e}")
    eg = translate.adf_to_eg(adf)
    _emit(ns, eg_to_json(eg), dump_eg(eg).splitlines())
    return False


def cmd_translate_caf(ns) -> bool:
    eg_in = _load(ns.file)
    try:
        caf = translate.caf_from_eg(eg_in)
    except ValueError as e:
        raise CliError(f"{ns.file}: {e}")
    eg = translate.caf_to_eg(caf)
    _emit(ns, eg_to_json(eg), dump_eg(eg).splitlines())
    return False


def cmd_verify_correspondence(ns) -> bool:
    pi = _pi_of(ns)
    if ns.kind == "adf":
        try:
            with open(ns.file, encoding="utf-8") as fh:
                adf = translate.parse_adf(fh.read())
        except OSError as e:
            raise CliError(str(e))
        except (ValueError, ParseError) as e:
            raise CliError(f"{ns.file}: {e}")
        report = translate.adf_correspondence(adf, pi)
        keys = ("complete_match", "preferred_match", "grounded_match")
    else:
        eg_in = _load(ns.file)
        try:
            caf = translate.caf_from_eg(eg_in)
        except ValueError as e:
            raise CliError(f"{ns.file}: {e}")
        report = translate.caf_correspondence(caf, pi)
        keys = ("admissible_match", "preferred_match")
    ok = all(report[k] for k in keys)
    payload = {k: report[k] for k in keys}
    payload["ok"] = ok
    _emit(ns, payload,
          [f"{k}: {'yes' if report[k] else 'no'}" for k in keys]
          + ["ok" if ok else "MISMATCH"])
    return not ok


def _conditions_of(texts: Sequence[str], eg: EpistemicGraph) -> list[dialogue.Condition]:
    out = []
    for t in texts:
        f = _parse_formulas([t], eg)[0]
        if not (isinstance(f, Atom) and len(f.lhs.terms) == 1
                and isinstance(f.lhs.terms[0], Arg)):
            raise CliError(f"assertion must be a single-argument atom: {t!r}")
        out.append((f.lhs.terms[0].name, f.cmp, f.rhs))
    return out


def cmd_dialogue(ns) -> bool:
    eg = _load(ns.file)
    pi = _pi_of(ns)
    try:
        session = dialogue.DialogueSession(eg, pi, ns.goal)
    except ValueError as e:
        raise CliError(str(e))
    for (arg, cmp, x) in _conditions_of(ns.assertion, eg):
        session.assert_belief(arg, cmp, x)
    ok = session.consistent()
    payload: dict = {"consistent": ok}
    lines = ["consistent" if ok else "INCONSISTENT"]
    if not ok:
        core = session.conflict_core()
        payload["conflict"] = [
            {"argument": a, "comparator": c, "value": fraction_str(x)}
            for a, c, x in core
        ]
        lines += [f"conflict: p({a}) {c} {fraction_str(x)}" for a, c, x in core]
        _emit(ns, payload, lines)
        return True
    ranges = session.marginal_ranges()
    payload["ranges"] = {
        a: None if r is None else [fraction_str(r[0]), fraction_str(r[1])]
        for a, r in ranges.items()
    }
    for a, r in ranges.items():
        lines.append(f"p({a}) in [{fraction_str(r[0])}, {fraction_str(r[1])}]")
    if ns.moves:
        moves = session.suggest_moves()
        payload["moves"] = [
            {"argument": m.argument, "feasible": m.feasible,
             "optimistic": None if m.optimistic is None else fraction_str(m.optimistic),
             "pessimistic": None if m.pessimistic is None else fraction_str(m.pessimistic),
             "warnings": m.warnings}
            for m in moves
        ]
        for m in moves:
            if m.feasible:
                lines.append(
                    f"move {m.argument}: goal in "
                    f"[{fraction_str(m.pessimistic)}, {fraction_str(m.optimistic)}]"
                )
            else:
                lines.append(f"move {m.argument}: infeasible")
            lines += [f"  warning: {w}" for w in m.warnings]
    _emit(ns, payload, lines)
    return False


def cmd_serve(ns) -> bool:
    import uvicorn

    from .service import build_app

    eg = _load(ns.file)
    app = build_app(eg, _pi_of(ns))
    uvicorn.run(app, host=ns.host, port=ns.port, log_level="warning")
    return False


# ---------------------------------------------------------------------------
# argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


_GLOBAL_DEFAULTS = {"pi": DEFAULT_PI, "format": "text", "cap": None,
                    "strict": False, "force": False}


def _add_globals(p: argparse.ArgumentParser) -> None:
    # SUPPRESS keeps a subparser from clobbering a value already parsed
    # before the subcommand; main() fills the defaults afterwards
    p.add_argument("--pi", default=argparse.SUPPRESS,
                   help="restricted value set, e.g. 0,0.25,...,1")
    p.add_argument("--format", choices=("text", "json"),
                   default=argparse.SUPPRESS)
    p.add_argument("--cap", type=int, default=argparse.SUPPRESS,
                   help="probe-set size cap for arbitrary searches")
    p.add_argument("--strict", action="store_true", default=argparse.SUPPRESS,
                   help="exit 1 when the query answer is negative")
    p.add_argument("--force", action="store_true", default=argparse.SUPPRESS,
                   help="bypass enumeration size caps")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="epigraph",
                  description="exact reasoning over epistemic graphs")
    _add_globals(top)
    sub = top.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        _add_globals(p)
        p.set_defaults(fn=fn)
        return p

    p = add("parse", cmd_parse, help="parse a graph file and echo it canonically")
    p.add_argument("file")

    p = add("validate", cmd_validate, help="structural lint of a graph file")
    p.add_argument("file")

    p = add("sat", cmd_sat, help="enumerate restricted satisfying distributions")
    p.add_argument("file")
    for f in semantics.FILTERS:
        p.add_argument(f"--{f}", dest=f.replace("-", "_"), action="store_true")

    p = add("entail", cmd_entail, help="restricted entailment query")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--assume", action="append", default=[])
    p.add_argument("--query", required=True)
    p.add_argument("--args", dest="args_list", default=None,
                   help="argument order when no graph file is given")

    p = add("ddnf", cmd_ddnf, help="disjunctive distribution normal form")
    p.add_argument("--query", required=True)
    p.add_argument("--args", dest="args_list", default=None)

    p = add("closure-check", cmd_closure_check,
            help="is a formula in the closure of the graph constraints")
    p.add_argument("file")
    p.add_argument("--query", required=True)

    p = add("coverage", cmd_coverage, help="default/partial/full/arbitrary coverage")
    p.add_argument("file")
    p.add_argument("--arg", required=True)
    p.add_argument("--mode", choices=("default", "partial", "full", "arbitrary"),
                   default="default")
    p.add_argument("--submode", choices=("partial", "full"), default="full",
                   help="coverage kind searched for under --mode arbitrary")
    p.add_argument("--probe", default="", help="comma-separated probe set")
    p.add_argument("--z", action="append", default=[],
                   help="closure subset to analyse against (repeatable)")

    p = add("effectiveness", cmd_effectiveness,
            help="(semi-)effectiveness of a relation")
    p.add_argument("file")
    p.add_argument("--rel", required=True, help="SOURCE,TARGET")
    p.add_argument("--probe", default="")
    p.add_argument("--strong", action="store_true")
    p.add_argument("--z", action="append", default=[])

    p = add("relation-type", cmd_relation_type,
            help="classify a relation, or search for a wanted type")
    p.add_argument("file")
    p.add_argument("--rel", required=True)
    p.add_argument("--probe", default="")
    p.add_argument("--z", action="append", default=[])
    p.add_argument("--wanted", default=None,
                   choices=("supporting", "attacking", "dependent", "subtle",
                            "unspecified", "positive", "negative",
                            "nonmonotonic-dependent"))
    p.add_argument("--strong", action="store_true")

    p = add("monotonicity", cmd_monotonicity, help="monotonicity classification")
    p.add_argument("file")
    p.add_argument("--rel", required=True)
    p.add_argument("--probe", default="")
    p.add_argument("--z", action="append", default=[])

    p = add("coherence", cmd_coherence, help="six-flag coherence report")
    p.add_argument("file")

    p = add("label-check", cmd_label_check, help="labeling consistency")
    p.add_argument("file")
    p.add_argument("--mode", choices=("consistent", "strong", "monotonic"),
                   default="consistent")

    p = add("semantics", cmd_semantics, help="extremal distribution selection")
    p.add_argument("file")
    p.add_argument("--order", choices=semantics.ORDERINGS, default=None)
    p.add_argument("--direction", choices=("max", "min"), default="max")
    p.add_argument("--filter", action="append", choices=semantics.FILTERS,
                   default=[])
    p.add_argument("--entropy", action="store_true")

    p = add("translate-adf", cmd_translate_adf,
            help="abstract dialectical framework to epistemic graph")
    p.add_argument("file")

    p = add("translate-caf", cmd_translate_caf,
            help="constrained argumentation framework to epistemic graph")
    p.add_argument("file")

    p = add("verify-correspondence", cmd_verify_correspondence,
            help="check translated semantics against reference semantics")
    p.add_argument("file")
    p.add_argument("--kind", choices=("adf", "caf"), required=True)

    p = add("dialogue", cmd_dialogue, help="scripted dialogue session")
    p.add_argument("file")
    p.add_argument("--goal", required=True)
    p.add_argument("--assert", dest="assertion", action="append", default=[],
                   help="belief assertion, e.g. 'p(F)>0.5' (repeatable)")
    p.add_argument("--moves", action="store_true",
                   help="also print ranked move suggestions")

    p = add("serve", cmd_serve, help="run the HTTP service")
    p.add_argument("file")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8123)

    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        for key, value in _GLOBAL_DEFAULTS.items():
            if not hasattr(ns, key):
                setattr(ns, key, value)
        negative = ns.fn(ns)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except EnumerationCapError as e:
        print(f"error: {e} (use --force to override)", file=sys.stderr)
        return 2
    except (analysis.InconsistentGraph, analysis.BadZ) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0
    if negative and ns.strict:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
