import { describe, expect, it } from "vitest";

import type { GraphInfo, SessionState } from "../src/api.js";
import {
  SessionView,
  formatBelief,
  fractionToNumber,
  snapToPi,
} from "../src/state.js";

const GRAPH: GraphInfo = {
  arguments: ["A", "B", "C"],
  edges: [
    { from: "B", to: "A", labels: ["+"] },
    { from: "C", to: "A", labels: ["-"] },
  ],
  constraints: ["p(B) > 0.5 -> p(A) > 0.5"],
  pi: ["0", "1/4", "1/2", "3/4", "1"],
};

function consistentState(): SessionState {
  return {
    goal: "A",
    consistent: true,
    asserted: { B: { comparator: ">", value: "1/2" } },
    history: [
      { action: "assert", argument: "B", comparator: ">", value: "1/2" },
    ],
    ranges: {
      A: { min: "3/4", max: "1" },
      B: { min: "3/4", max: "1" },
      C: { min: "0", max: "1" },
    },
  };
}

describe("rational formatting", () => {
  it("parses fraction and decimal strings", () => {
    expect(fractionToNumber("17/20")).toBeCloseTo(0.85);
    expect(fractionToNumber("0.45")).toBeCloseTo(0.45);
    expect(fractionToNumber("1")).toBe(1);
  });

  it("formats beliefs as short decimals", () => {
    expect(formatBelief("2/5")).toBe("0.4");
    expect(formatBelief("1/3")).toBe("0.333");
    expect(formatBelief("1")).toBe("1");
  });
});

describe("snapToPi", () => {
  const pi = GRAPH.pi;

  it("returns the service's own string for the nearest member", () => {
    expect(snapToPi(pi, 0.3)).toBe("1/4");
    expect(snapToPi(pi, 0.49)).toBe("1/2");
    expect(snapToPi(pi, 0.95)).toBe("1");
  });

  it("clamps outside the unit interval", () => {
    expect(snapToPi(pi, -2)).toBe("0");
    expect(snapToPi(pi, 7)).toBe("1");
  });

  it("round-trips every member exactly", () => {
    for (const v of pi) {
      expect(snapToPi(pi, fractionToNumber(v))).toBe(v);
    }
  });
});

describe("SessionView", () => {
  it("derives nodes, goal flag and ranges from service state", () => {
    const view = new SessionView(GRAPH, "1");
    view.applyState(consistentState());
    const nodes = view.nodes();
    expect(nodes.map((n) => n.name)).toEqual(["A", "B", "C"]);
    expect(nodes[0].isGoal).toBe(true);
    expect(nodes[1].asserted).toBe("p(B) > 1/2");
    expect(nodes[2].asserted).toBeNull();
    expect(view.floor("A")).toBe("0.75");
    expect(view.ceiling("A")).toBe("1");
  });

  it("reports an ok banner while consistent", () => {
    const view = new SessionView(GRAPH, "1");
    view.applyState(consistentState());
    expect(view.banner().kind).toBe("ok");
  });

  it("surfaces the conflict core when inconsistent", () => {
    const view = new SessionView(GRAPH, "1");
    view.applyState({
      goal: "A",
      consistent: false,
      asserted: {},
      history: [],
      conflict: [
        { arg: "B", cmp: ">", x: "1/2" },
        { arg: "A", cmp: "<", x: "1/2" },
      ],
    });
    const banner = view.banner();
    expect(banner.kind).toBe("conflict");
    expect(banner.text).toContain("p(B) > 1/2");
    expect(banner.text).toContain("p(A) < 1/2");
  });

  it("invalidates moves when the state changes", () => {
    const view = new SessionView(GRAPH, "1");
    view.applyState(consistentState());
    view.applyMoves({
      consistent: true,
      moves: [
        {
          argument: "B",
          feasible: true,
          optimistic: "1",
          pessimistic: "3/4",
          warnings: [],
        },
        {
          argument: "C",
          feasible: false,
          optimistic: null,
          pessimistic: null,
          warnings: ["no support reaches the goal"],
        },
      ],
    });
    const panel = view.movePanel();
    expect(panel[0]).toMatchObject({
      argument: "B",
      rank: 1,
      goalRange: "[0.75, 1]",
    });
    expect(panel[1].goalRange).toBe("infeasible");
    view.applyState(consistentState());
    expect(view.movePanel()).toEqual([]);
  });

  it("renders history lines for both actions", () => {
    const view = new SessionView(GRAPH, "1");
    const st = consistentState();
    st.history.push({ action: "retract", argument: "B" });
    view.applyState(st);
    expect(view.historyLines()).toEqual([
      "assert p(B) > 1/2",
      "retract p(B)",
    ]);
  });
});
