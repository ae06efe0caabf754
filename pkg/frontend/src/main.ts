/** Page wiring: load the graph, open a session, and keep the view in sync
 * with the service. Every state change waits on the service response; the
 * page never predicts a result locally. */

import { ApiError, Client } from "./api.js";
import { SessionView, snapToPi } from "./state.js";
import {
  renderBanner,
  renderConstraints,
  renderEdges,
  renderHistory,
  renderMovePanel,
  renderNode,
  renderSlider,
} from "./render.js";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function showError(message: string): void {
  el("banner").innerHTML = renderBanner({ kind: "error", text: message });
}

async function refresh(view: SessionView, client: Client): Promise<void> {
  el("banner").innerHTML = renderBanner(view.banner());
  el("nodes").innerHTML = view
    .nodes()
    .map((n) => renderNode(n) + renderSlider(view.graph.pi, n.name))
    .join("");
  el("edges").innerHTML = renderEdges(view);
  el("history").innerHTML = renderHistory(view.historyLines());
  for (const input of document.querySelectorAll<HTMLInputElement>(
    "input.belief",
  )) {
    input.addEventListener("change", () => {
      const values = (input.dataset.values ?? "").split(",");
      const snapped = snapToPi(values, Number(input.value) / (values.length - 1));
      void assertBelief(view, client, input.dataset.arg ?? "", snapped);
    });
  }
  const moves = await client.moves(view.sessionId);
  view.applyMoves(moves);
  el("moves").innerHTML = renderMovePanel(view.movePanel());
}

async function assertBelief(
  view: SessionView,
  client: Client,
  arg: string,
  value: string,
): Promise<void> {
  try {
    view.applyState(await client.assert(view.sessionId, arg, "=", value));
    await refresh(view, client);
  } catch (e) {
    showError(e instanceof ApiError ? e.message : String(e));
  }
}

export async function boot(base: string): Promise<void> {
  const client = new Client(base);
  try {
    const graph = await client.graph();
    el("constraints").innerHTML = renderConstraints(graph);
    const created = await client.createSession();
    const view = new SessionView(graph, created.id);
    view.applyState(created);
    await refresh(view, client);
  } catch (e) {
    showError(e instanceof ApiError ? e.message : String(e));
  }
}

if (typeof document !== "undefined" && document.getElementById("banner")) {
  const base =
    new URLSearchParams(window.location.search).get("service") ??
    "http://127.0.0.1:8123";
  void boot(base);
}
