/** View state for a dialogue session.
 *
 * Everything displayed is derived from service responses; the only local
 * computation is presentation (rational-string formatting and snapping a
 * slider position to the nearest value-set member so assertions always
 * travel as exact members of the restricted set).
 */

import type {
  GraphInfo,
  MoveInfo,
  MovesResponse,
  SessionState,
} from "./api.js";

/** Parse a service rational ("17/20", "0.85", "1") for display purposes. */
export function fractionToNumber(s: string): number {
  const slash = s.indexOf("/");
  if (slash >= 0) {
    const p = Number(s.slice(0, slash));
    const q = Number(s.slice(slash + 1));
    return p / q;
  }
  return Number(s);
}

/** Compact decimal rendering of a service rational. */
export function formatBelief(s: string): string {
  const v = fractionToNumber(s);
  return String(Math.round(v * 1000) / 1000);
}

/** Snap a raw slider position to the nearest value-set member, returned
 * as the service's own string so the assertion round-trips exactly. */
export function snapToPi(pi: string[], raw: number): string {
  let best = pi[0];
  let dist = Infinity;
  for (const s of pi) {
    const d = Math.abs(fractionToNumber(s) - raw);
    if (d < dist) {
      dist = d;
      best = s;
    }
  }
  return best;
}

export interface NodeView {
  name: string;
  isGoal: boolean;
  asserted: string | null; // "p(F) > 1/2" style, from the service state
  range: { min: string; max: string } | null;
}

export interface EdgeView {
  from: string;
  to: string;
  labels: string;
}

export interface MoveView {
  argument: string;
  rank: number;
  feasible: boolean;
  goalRange: string; // "[0.85, 1]" or "infeasible"
  warnings: string[];
}

export interface Banner {
  kind: "ok" | "conflict" | "error";
  text: string;
}

export class SessionView {
  state: SessionState | null = null;
  moves: MoveInfo[] | null = null;

  constructor(
    public readonly graph: GraphInfo,
    public readonly sessionId: string,
  ) {}

  applyState(state: SessionState): void {
    this.state = state;
    this.moves = null; // stale after any assertion change
  }

  applyMoves(res: MovesResponse): void {
    this.moves = res.moves;
  }

  banner(): Banner {
    if (!this.state) {
      return { kind: "error", text: "no session state yet" };
    }
    if (this.state.consistent) {
      return { kind: "ok", text: "assertions are consistent" };
    }
    const core = (this.state.conflict ?? [])
      .map((c) => `p(${c.arg}) ${c.cmp} ${c.x}`)
      .join(", ");
    return { kind: "conflict", text: `inconsistent: ${core}` };
  }

  nodes(): NodeView[] {
    const st = this.state;
    return this.graph.arguments.map((name) => {
      const a = st?.asserted[name];
      const r = st?.ranges?.[name] ?? null;
      return {
        name,
        isGoal: st?.goal === name,
        asserted: a ? `p(${name}) ${a.comparator} ${a.value}` : null,
        range: r,
      };
    });
  }

  edges(): EdgeView[] {
    return this.graph.edges.map((e) => ({
      from: e.from,
      to: e.to,
      labels: e.labels.join(","),
    }));
  }

  /** Displayed ceiling of an argument's belief, as a decimal string. */
  ceiling(arg: string): string | null {
    const r = this.state?.ranges?.[arg];
    return r ? formatBelief(r.max) : null;
  }

  floor(arg: string): string | null {
    const r = this.state?.ranges?.[arg];
    return r ? formatBelief(r.min) : null;
  }

  movePanel(): MoveView[] {
    if (!this.moves) return [];
    return this.moves.map((m, i) => ({
      argument: m.argument,
      rank: i + 1,
      feasible: m.feasible,
      goalRange:
        m.feasible && m.optimistic !== null && m.pessimistic !== null
          ? `[${formatBelief(m.pessimistic)}, ${formatBelief(m.optimistic)}]`
          : "infeasible",
      warnings: m.warnings,
    }));
  }

  historyLines(): string[] {
    return (this.state?.history ?? []).map((h) =>
      h.action === "assert"
        ? `assert p(${h.argument}) ${h.comparator} ${h.value}`
        : `retract p(${h.argument})`,
    );
  }
}
