"""JSON-over-HTTP service around a single loaded graph.

The graph and value set are immutable; dialogue sessions are in-memory and
mutable, with per-session locking. Rationals travel as "p/q" or decimal
strings. Malformed requests get a 400 with a JSON error body.
"""

from __future__ import annotations

import itertools
import threading
from fractions import Fraction
from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import analysis, semantics
from .dialogue import DialogueSession
from .dist import dump_distribution, sat_restricted
from .entail import entails
from .graph import EpistemicGraph, eg_to_json
from .lang import (
    Arg,
    Atom,
    COMPARATORS,
    ParseError,
    RestrictedValueSet,
    fraction_str,
    parse_formula,
)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as e:
        raise HTTPException(400, detail=f"bad rational {text!r}: {e}")


def _formula(text: str, eg: EpistemicGraph):
    try:
        return parse_formula(text, set(eg.args))
    except ParseError as e:
        raise HTTPException(400, detail=f"bad formula {text!r}: {e}")


class EntailBody(BaseModel):
    assume: list[str] = []
    query: str


class SatBody(BaseModel):
    filters: list[str] = []
    extra: list[str] = []


class CoverageBody(BaseModel):
    arg: str
    mode: str = "default"
    probe: list[str] = []


class EffectivenessBody(BaseModel):
    rel: list[str]
    probe: list[str] = []
    strong: bool = False


class RelationTypeBody(BaseModel):
    rel: list[str]
    probe: list[str] = []


class SemanticsBody(BaseModel):
    order: Optional[str] = None
    direction: str = "max"
    filters: list[str] = []


class AssertBody(BaseModel):
    arg: str
    cmp: str
    x: str


class SessionBody(BaseModel):
    goal: Optional[str] = None


def _verdict_json(v: analysis.Verdict, order) -> dict:
    from .cli import _plain

    return _plain(v, order)


def build_app(eg: EpistemicGraph, pi: RestrictedValueSet,
              cap_override: bool = False) -> FastAPI:
    app = FastAPI(title="epigraph")
    regime = analysis.Regime(pi, cap_override=cap_override)
    sessions: dict[str, DialogueSession] = {}
    locks: dict[str, threading.Lock] = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()

    def session_of(sid: str) -> tuple[DialogueSession, threading.Lock]:
        try:
            return sessions[sid], locks[sid]
        except KeyError:
            raise HTTPException(404, detail=f"unknown session {sid!r}")

    def session_state(s: DialogueSession) -> dict:
        ok = s.consistent()
        state = {
            "goal": s.goal,
            "consistent": ok,
            "asserted": {
                a: {"comparator": c, "value": fraction_str(x)}
                for a, (_, c, x) in s.asserted.items()
            },
            "history": s.history,
        }
        if ok:
            state["ranges"] = {
                a: None if r is None
                else {"min": fraction_str(r[0]), "max": fraction_str(r[1])}
                for a, r in s.marginal_ranges().items()
            }
        else:
            state["conflict"] = [
                {"arg": a, "cmp": c, "x": fraction_str(x)}
                for a, c, x in s.conflict_core()
            ]
        return state

    @app.get("/graph")
    def get_graph():
        return {**eg_to_json(eg),
                "pi": [fraction_str(v) for v in pi]}

    @app.post("/query/entail")
    def query_entail(body: EntailBody):
        assumptions = list(eg.constraints) + [_formula(t, eg) for t in body.assume]
        query = _formula(body.query, eg)
        res = entails(assumptions, query, eg.args, pi, cap_override)
        out = {"holds": res.holds}
        if res.witness is not None:
            out["witness"] = dump_distribution(res.witness, eg.args)
        return out

    @app.post("/query/sat")
    def query_sat(body: SatBody):
        phis = list(eg.constraints) + [_formula(t, eg) for t in body.extra]
        dists = sat_restricted(tuple(phis), eg.args, pi, cap_override)
        bad = [f for f in body.filters if f not in semantics.FILTERS]
        if bad:
            raise HTTPException(400, detail=f"unknown filters {bad}")
        dists = semantics.filter_distributions(dists, body.filters)
        return {"count": len(dists),
                "distributions": [dump_distribution(p, eg.args) for p in dists]}

    @app.post("/query/coverage")
    def query_coverage(body: CoverageBody):
        if body.arg not in eg.args:
            raise HTTPException(400, detail=f"unknown argument {body.arg!r}")
        try:
            if body.mode == "default":
                v = analysis.default_covered(eg, body.arg, regime)
            elif body.mode in ("partial", "full"):
                v = analysis.covered(eg, body.arg, body.probe, body.mode, regime)
            elif body.mode == "arbitrary":
                v = analysis.arbitrary_covered(eg, body.arg, "full", regime)
            else:
                raise HTTPException(400, detail=f"unknown mode {body.mode!r}")
        except ValueError as e:
            raise HTTPException(400, detail=str(e))
        return _verdict_json(v, eg.args)

    @app.post("/query/effectiveness")
    def query_effectiveness(body: EffectivenessBody):
        if len(body.rel) != 2:
            raise HTTPException(400, detail="rel must be [source, target]")
        try:
            v = analysis.effective(eg, tuple(body.rel), body.probe,
                                   "strong" if body.strong else "plain", regime)
        except ValueError as e:
            raise HTTPException(400, detail=str(e))
        return _verdict_json(v, eg.args)

    @app.post("/query/relation-type")
    def query_relation_type(body: RelationTypeBody):
        if len(body.rel) != 2:
            raise HTTPException(400, detail="rel must be [source, target]")
        try:
            tv = analysis.relation_type(eg, None, tuple(body.rel), body.probe,
                                        regime)
        except ValueError as e:
            raise HTTPException(400, detail=str(e))
        return {"types": list(tv.types), "strong": list(tv.strong)}

    @app.post("/query/semantics")
    def query_semantics(body: SemanticsBody):
        dists = semantics.satisfaction_semantics(eg, pi, cap_override)
        bad = [f for f in body.filters if f not in semantics.FILTERS]
        if bad:
            raise HTTPException(400, detail=f"unknown filters {bad}")
        dists = semantics.filter_distributions(dists, body.filters)
        if body.order is not None:
            if body.order not in semantics.ORDERINGS:
                raise HTTPException(400, detail=f"unknown ordering {body.order!r}")
            if body.direction not in ("max", "min"):
                raise HTTPException(400, detail="direction is 'max' or 'min'")
            dists = semantics.select_extreme(dists, body.order, body.direction)
        return {"count": len(dists),
                "distributions": [dump_distribution(p, eg.args) for p in dists]}

    @app.post("/session", status_code=201)
    def create_session(body: SessionBody = SessionBody()):
        goal = body.goal or eg.args[0]
        try:
            s = DialogueSession(eg, pi, goal)
        except ValueError as e:
            raise HTTPException(400, detail=str(e))
        with registry_lock:
            sid = str(next(counter))
            sessions[sid] = s
            locks[sid] = threading.Lock()
        return {"id": sid, **session_state(s)}

    @app.post("/session/{sid}/assert")
    def session_assert(sid: str, body: AssertBody):
        s, lock = session_of(sid)
        if body.cmp not in COMPARATORS:
            raise HTTPException(400, detail=f"bad comparator {body.cmp!r}")
        x = _fraction(body.x)
        with lock:
            try:
                s.assert_belief(body.arg, body.cmp, x)
            except ValueError as e:
                raise HTTPException(400, detail=str(e))
            return session_state(s)

    @app.delete("/session/{sid}/assert/{arg}")
    def session_retract(sid: str, arg: str):
        s, lock = session_of(sid)
        with lock:
            s.retract(arg)
            return session_state(s)

    @app.get("/session/{sid}/state")
    def session_get_state(sid: str):
        s, lock = session_of(sid)
        with lock:
            return session_state(s)

    @app.get("/session/{sid}/moves")
    def session_moves(sid: str):
        s, lock = session_of(sid)
        with lock:
            if not s.consistent():
                return {"consistent": False,
                        "conflict": [
                            {"arg": a, "cmp": c, "x": fraction_str(x)}
                            for a, c, x in s.conflict_core()
                        ],
                        "moves": []}
            moves = s.suggest_moves()
            return {
                "consistent": True,
                "moves": [
                    {"argument": m.argument,
                     "feasible": m.feasible,
                     "optimistic": None if m.optimistic is None
                     else fraction_str(m.optimistic),
                     "pessimistic": None if m.pessimistic is None
                     else fraction_str(m.pessimistic),
                     "warnings": m.warnings}
                    for m in moves
                ],
            }

    return app
