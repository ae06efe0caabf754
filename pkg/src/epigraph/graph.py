"""Labelled argument graphs, epistemic graphs, and the .eg file format.

The text format has three ordered sections (arguments, edges, constraints),
one entry per line, with '#' comments. Declaration order of arguments fixes
the world encoding. A trailing 'pc:' line may carry a propositional
constraint for conflict-based framework imports.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .lang import (
    Formula,
    ParseError,
    RestrictedValueSet,
    Term,
    fargs,
    parse_formula,
    parse_term,
    pretty,
    pretty_term,
)

LABELS = ("+", "-", "*")


@dataclass(frozen=True)
class LabelledGraph:
    args: tuple[str, ...]
    arcs: frozenset[tuple[str, str]]
    labels: dict[tuple[str, str], frozenset[str]] = field(hash=False)

    def parents(self, b: str, label: Optional[str] = None) -> frozenset[str]:
        if b not in self.args:
            raise KeyError(f"unknown argument {b!r}")
        out = set()
        for (src, dst) in self.arcs:
            if dst != b:
                continue
            if label is not None and label not in self.labels.get((src, dst), frozenset()):
                continue
            out.add(src)
        return frozenset(out)

    def direct_rels(self, a: str) -> frozenset[str]:
        return self.parents(a) | frozenset(
            dst for (src, dst) in self.arcs if src == a
        )

    def connected_pairs(self) -> frozenset[tuple[str, str]]:
        """Ordered pairs of distinct arguments joined by an undirected path."""
        adj: dict[str, set[str]] = {a: set() for a in self.args}
        for (s, d) in self.arcs:
            adj[s].add(d)
            adj[d].add(s)
        out = set()
        for a in self.args:
            seen = {a}
            stack = [a]
            while stack:
                cur = stack.pop()
                for nxt in adj[cur]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            for b in seen - {a}:
                out.add((a, b))
        return frozenset(out)


@dataclass(frozen=True)
class EpistemicGraph:
    graph: LabelledGraph
    constraints: tuple[Formula, ...]
    pc: Optional[Term] = None

    @property
    def args(self) -> tuple[str, ...]:
        return self.graph.args


def validate_graph(eg: EpistemicGraph) -> list[str]:
    """Structural lint; an empty list means the graph is well formed."""
    issues = []
    seen = set()
    for a in eg.graph.args:
        if a in seen:
            issues.append(f"duplicate argument name {a!r}")
        seen.add(a)
    for (s, d) in sorted(eg.graph.arcs):
        if s not in seen or d not in seen:
            issues.append(f"arc ({s},{d}) has an undeclared endpoint")
        if not eg.graph.labels.get((s, d)):
            issues.append(f"arc ({s},{d}) carries no label: graph not fully labelled")
        if s == d:
            issues.append(f"arc ({s},{d}) is a self-loop; probe sets always exclude "
                          "the probed argument")
    for i, c in enumerate(eg.constraints):
        missing = fargs(c) - seen
        if missing:
            issues.append(f"constraint {i + 1} mentions unknown arguments {sorted(missing)}")
        if not fargs(c):
            issues.append(f"constraint {i + 1} has no arguments (FArgs empty)")
    return issues


def graph_consistent(eg: EpistemicGraph, pi: RestrictedValueSet,
                     cap_override: bool = False) -> bool:
    from .entail import consistent

    return consistent(eg.constraints, eg.args, pi, cap_override)


# ---------------------------------------------------------------------------
# .eg text format

def parse_eg(text: str) -> EpistemicGraph:
    args: list[str] = []
    arcs: set[tuple[str, str]] = set()
    labels: dict[tuple[str, str], frozenset[str]] = {}
    constraints: list[Formula] = []
    pc: Optional[Term] = None
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        # '#' opens a comment unless it spells the constants #t / #f
        line = re.split(r"#(?![tf]\b)", raw, maxsplit=1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low in ("arguments:", "edges:", "constraints:"):
            section = low[:-1]
            continue
        if low.startswith("pc:"):
            pc = parse_term(line[3:].strip(), set(args))
            continue
        try:
            if section == "arguments":
                if not line.isidentifier():
                    raise ValueError(f"bad argument name {line!r}")
                args.append(line)
            elif section == "edges":
                arc, lab = _parse_edge(line, set(args))
                if arc in arcs:
                    raise ValueError(f"duplicate arc {arc}")
                arcs.add(arc)
                labels[arc] = lab
            elif section == "constraints":
                constraints.append(parse_formula(line, set(args)))
            else:
                raise ValueError("content before any section header")
        except (ValueError, ParseError) as e:
            raise ValueError(f"line {lineno}: {e}") from e
    g = LabelledGraph(tuple(args), frozenset(arcs), labels)
    return EpistemicGraph(g, tuple(constraints), pc)


def _parse_edge(line: str, known: set[str]) -> tuple[tuple[str, str], frozenset[str]]:
    head, _, lab = line.partition("[")
    if "->" not in head:
        raise ValueError(f"edge line needs 'SRC -> DST': {line!r}")
    src, _, dst = head.partition("->")
    src, dst = src.strip(), dst.strip()
    for name in (src, dst):
        if name not in known:
            raise ValueError(f"unknown argument {name!r} in edge")
    label_set: frozenset[str] = frozenset()
    if lab:
        lab = lab.rstrip("]").strip()
        if lab:
            parts = [p.strip() for p in lab.split(",")]
            if any(p not in LABELS for p in parts):
                raise ValueError(f"labels must be among {LABELS}: {line!r}")
            label_set = frozenset(parts)
    return (src, dst), label_set


def dump_eg(eg: EpistemicGraph) -> str:
    lines = ["arguments:"]
    lines.extend(eg.graph.args)
    lines.append("")
    lines.append("edges:")
    for (s, d) in sorted(eg.graph.arcs):
        lab = ",".join(sorted(eg.graph.labels.get((s, d), frozenset())))
        lines.append(f"{s} -> {d} [{lab}]")
    lines.append("")
    lines.append("constraints:")
    lines.extend(pretty(c) for c in eg.constraints)
    if eg.pc is not None:
        lines.append(f"pc: {pretty_term(eg.pc)}")
    return "\n".join(lines) + "\n"


def eg_to_json(eg: EpistemicGraph) -> dict:
    return {
        "arguments": list(eg.graph.args),
        "edges": [
            {"from": s, "to": d,
             "labels": sorted(eg.graph.labels.get((s, d), frozenset()))}
            for (s, d) in sorted(eg.graph.arcs)
        ],
        "constraints": [pretty(c) for c in eg.constraints],
        **({"pc": pretty_term(eg.pc)} if eg.pc is not None else {}),
    }


def eg_from_json(data: dict) -> EpistemicGraph:
    args = tuple(data["arguments"])
    arcs = set()
    labels = {}
    for e in data.get("edges", []):
        arc = (e["from"], e["to"])
        arcs.add(arc)
        labels[arc] = frozenset(e.get("labels", []))
    constraints = tuple(
        parse_formula(c, set(args)) for c in data.get("constraints", [])
    )
    pc = parse_term(data["pc"], set(args)) if "pc" in data else None
    return EpistemicGraph(LabelledGraph(args, frozenset(arcs), labels),
                          constraints, pc)


def load_eg(path: str) -> EpistemicGraph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json"):
        return eg_from_json(json.loads(text))
    return parse_eg(text)
