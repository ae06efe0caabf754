/** HTML string rendering for the session view. Kept DOM-free so it can be
 * unit tested under node; main.ts injects the strings into the page. */

import type { GraphInfo } from "./api.js";
import type { Banner, MoveView, NodeView, SessionView } from "./state.js";
import { formatBelief, fractionToNumber } from "./state.js";

const LABEL_CLASS: Record<string, string> = {
  "+": "support",
  "-": "attack",
  "*": "dependent",
};

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderBanner(b: Banner): string {
  return `<div class="banner banner-${b.kind}">${esc(b.text)}</div>`;
}

export function renderConstraints(graph: GraphInfo): string {
  const items = graph.constraints
    .map((c) => `<li><code>${esc(c)}</code></li>`)
    .join("");
  const pc = graph.pc
    ? `<p class="pc">pc: <code>${esc(graph.pc)}</code></p>`
    : "";
  return `<ol class="constraints">${items}</ol>${pc}`;
}

export function renderNode(n: NodeView): string {
  const cls = n.isGoal ? "node goal" : "node";
  const range = n.range
    ? `<span class="range">[${formatBelief(n.range.min)}, ${formatBelief(
        n.range.max,
      )}]</span>`
    : "";
  const asserted = n.asserted
    ? `<span class="asserted">${esc(n.asserted)}</span>`
    : "";
  return `<div class="${cls}" data-arg="${esc(n.name)}">` +
    `<strong>${esc(n.name)}</strong>${range}${asserted}</div>`;
}

export function renderEdges(view: SessionView): string {
  const rows = view
    .edges()
    .map((e) => {
      const cls = e.labels
        .split(",")
        .map((l) => LABEL_CLASS[l] ?? "unlabelled")
        .join(" ");
      return `<li class="edge ${cls}">${esc(e.from)} &rarr; ${esc(
        e.to,
      )} [${esc(e.labels)}]</li>`;
    })
    .join("");
  return `<ul class="edges">${rows}</ul>`;
}

export function renderMovePanel(moves: MoveView[]): string {
  if (moves.length === 0) {
    return `<p class="moves-empty">no moves available</p>`;
  }
  const rows = moves
    .map((m) => {
      const warn = m.warnings
        .map((w) => `<div class="warning">${esc(w)}</div>`)
        .join("");
      return (
        `<li class="move" data-arg="${esc(m.argument)}">` +
        `<strong>${m.rank}. ${esc(m.argument)}</strong> ` +
        `<span class="goal-range">${esc(m.goalRange)}</span>${warn}</li>`
      );
    })
    .join("");
  return `<ol class="moves">${rows}</ol>`;
}

export function renderSlider(pi: string[], name: string): string {
  // the slider runs over value-set indices, so every position is a member
  const ticks = pi.map((v) => fractionToNumber(v));
  return (
    `<input type="range" class="belief" data-arg="${esc(name)}" ` +
    `min="0" max="${pi.length - 1}" step="1" ` +
    `data-values="${esc(pi.join(","))}" ` +
    `title="${ticks.map((t) => String(t)).join(" ")}">`
  );
}

export function renderHistory(lines: string[]): string {
  const rows = lines.map((l) => `<li>${esc(l)}</li>`).join("");
  return `<ul class="history">${rows}</ul>`;
}
