/** Typed client for the reasoning service. Rationals stay strings ("p/q"
 * or decimals) end to end; nothing here interprets them beyond transport. */

export interface GraphEdge {
  from: string;
  to: string;
  labels: string[];
}

export interface GraphInfo {
  arguments: string[];
  edges: GraphEdge[];
  constraints: string[];
  pc?: string;
  pi: string[];
}

export interface BeliefRange {
  min: string;
  max: string;
}

export interface Assertion {
  comparator: string;
  value: string;
}

export interface ConflictEntry {
  arg: string;
  cmp: string;
  x: string;
}

export interface HistoryEntry {
  action: string;
  argument: string;
  comparator?: string;
  value?: string;
}

export interface SessionState {
  goal: string;
  consistent: boolean;
  asserted: Record<string, Assertion>;
  history: HistoryEntry[];
  ranges?: Record<string, BeliefRange | null>;
  conflict?: ConflictEntry[];
}

export interface SessionCreated extends SessionState {
  id: string;
}

export interface MoveInfo {
  argument: string;
  feasible: boolean;
  optimistic: string | null;
  pessimistic: string | null;
  warnings: string[];
}

export interface MovesResponse {
  consistent: boolean;
  moves: MoveInfo[];
  conflict?: ConflictEntry[];
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    detail: string,
  ) {
    super(detail);
  }
}

async function unwrap<T>(res: Response): Promise<T> {
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    const detail =
      typeof body === "object" && body !== null && "detail" in body
        ? String((body as { detail: unknown }).detail)
        : res.statusText;
    throw new ApiError(res.status, detail);
  }
  return body as T;
}

export class Client {
  constructor(private readonly base: string) {}

  private url(path: string): string {
    return this.base.replace(/\/$/, "") + path;
  }

  private async get<T>(path: string): Promise<T> {
    return unwrap<T>(await fetch(this.url(path)));
  }

  private async send<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    return unwrap<T>(
      await fetch(this.url(path), {
        method,
        headers: { "content-type": "application/json" },
        body: body === undefined ? undefined : JSON.stringify(body),
      }),
    );
  }

  graph(): Promise<GraphInfo> {
    return this.get("/graph");
  }

  createSession(goal?: string): Promise<SessionCreated> {
    return this.send("POST", "/session", goal ? { goal } : {});
  }

  assert(
    sid: string,
    arg: string,
    cmp: string,
    x: string,
  ): Promise<SessionState> {
    return this.send("POST", `/session/${sid}/assert`, { arg, cmp, x });
  }

  retract(sid: string, arg: string): Promise<SessionState> {
    return this.send("DELETE", `/session/${sid}/assert/${arg}`);
  }

  state(sid: string): Promise<SessionState> {
    return this.get(`/session/${sid}/state`);
  }

  moves(sid: string): Promise<MovesResponse> {
    return this.get(`/session/${sid}/moves`);
  }

  entail(query: string, assume: string[] = []): Promise<{ holds: boolean }> {
    return this.send("POST", "/query/entail", { query, assume });
  }
}
