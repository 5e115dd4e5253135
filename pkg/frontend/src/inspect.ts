/** Read-only branch inspection: counts, validation findings, and the
 * Graphviz text for the whole branch. */

import { escapeHtml } from "./render.js";
import type { FullView } from "./types.js";

export function renderInspect(view: FullView): string {
  const findings = view.validation.findings
    .map(
      (finding) =>
        `<li class="finding ${finding.severity}">` +
        `${escapeHtml(finding.severity)} [${escapeHtml(finding.branch)}] ` +
        `${escapeHtml(finding.location)}: ${escapeHtml(finding.message)}` +
        ` (${escapeHtml(finding.code)})</li>`,
    )
    .join("");
  const verdict = view.validation.ok
    ? `<span class="ok">valid</span>`
    : `<span class="bad">invalid</span>`;
  return (
    `<section class="inspect">` +
    `<h2>${escapeHtml(view.branch)}</h2>` +
    `<p>${view.graph.nodes.length} states, ${view.graph.edges.length} operations, ` +
    `${verdict}</p>` +
    (findings ? `<ul class="findings">${findings}</ul>` : "") +
    `<pre class="dot">${escapeHtml(view.dot)}</pre>` +
    `</section>`
  );
}
