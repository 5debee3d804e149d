// Pure string renderers for the three panes. Keeping them free of DOM
// access makes the interesting logic testable without a browser.

import { layoutMap } from "./layout.js";
import type { ChatMessage, HypothesisPayload, MapPayload } from "./types.js";
import { displayLabel } from "./types.js";

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function shorten(text: string, limit = 42): string {
  return text.length <= limit ? text : text.slice(0, limit - 1) + "…";
}

export function renderMapSvg(map: MapPayload | null, width = 760): string {
  if (!map || map.nodes.length === 0) {
    return `<svg class="map" viewBox="0 0 ${width} 120" role="img"></svg>`;
  }
  const layout = layoutMap(map, width);
  const parts: string[] = [];
  parts.push(`<svg class="map" viewBox="0 0 ${layout.width} ${layout.height}" role="img">`);
  parts.push(
    '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ' +
    'markerWidth="7" markerHeight="7" orient="auto-start-reverse">' +
    '<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>',
  );
  for (const { edge, from, to, label } of layout.edges) {
    parts.push(
      `<line class="edge edge-${edge.kind}" x1="${from.x}" y1="${from.y}" ` +
      `x2="${to.x}" y2="${to.y}" marker-end="url(#arrow)"/>`,
    );
    if (label !== null) {
      const mx = (from.x + to.x) / 2;
      const my = (from.y + to.y) / 2;
      parts.push(`<text class="edge-label" x="${mx}" y="${my}">${escapeXml(label)}</text>`);
    }
  }
  for (const spot of layout.nodes) {
    const { node, x, y } = spot;
    const label = escapeXml(shorten(displayLabel(node)));
    if (node.kind === "product") {
      parts.push(`<ellipse class="node product" cx="${x}" cy="${y}" rx="80" ry="28"/>`);
    } else if (node.kind === "customer") {
      parts.push(`<circle class="node customer" cx="${x}" cy="${y}" r="30"/>`);
    } else if (node.kind === "feature") {
      parts.push(
        `<rect class="node feature" x="${x - 90}" y="${y - 22}" width="180" height="44" ` +
        'stroke-dasharray="6 3"/>',
      );
    } else {
      parts.push(`<rect class="node problem" x="${x - 90}" y="${y - 22}" width="180" height="44"/>`);
    }
    parts.push(`<text class="node-label" x="${x}" y="${y}">${label}</text>`);
  }
  parts.push("</svg>");
  return parts.join("");
}

export function renderChatHtml(messages: ChatMessage[]): string {
  return messages
    .map((m) => `<div class="bubble ${m.speaker}">${escapeXml(m.text)}</div>`)
    .join("");
}

export function renderHypothesesHtml(hypotheses: HypothesisPayload[] | null): string {
  if (!hypotheses || hypotheses.length === 0) {
    return '<p class="placeholder">Hypotheses appear here once the interview finishes.</p>';
  }
  const items = hypotheses
    .map((h) =>
      `<li><span class="badge ${h.kind}">${h.kind}</span>` +
      `<span class="statement">${escapeXml(h.statement)}</span></li>`)
    .join("");
  return `<ul class="hypotheses">${items}</ul>`;
}
