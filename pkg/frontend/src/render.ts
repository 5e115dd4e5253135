/** Pure HTML renderers. Every interactive element carries data-action
 * attributes; wiring happens by delegation in main.ts, so these stay
 * testable as plain string builders. */

import type { ConsoleStore, EventRecord } from "./store.js";
import type {
  AlarmView,
  OutEdge,
  PartialView,
  Proposal,
  SceneView,
  SessionSummary,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

function chip(cls: string, label: string): string {
  return `<span class="chip ${cls}">${escapeHtml(label)}</span>`;
}

export function renderEdgeRow(
  edge: OutEdge,
  src: string,
  proposeBlocked: boolean,
): string {
  const classes = ["edge"];
  if (edge.pruned) classes.push("pruned");
  if (edge.risky) classes.push("risky");
  const marks =
    (edge.risky ? `<span class="badge risky">risky</span>` : "") +
    (edge.pruned ? `<span class="badge pruned">pruned</span>` : "");
  const disabled = proposeBlocked || edge.pruned ? " disabled" : "";
  const srcAttr = escapeHtml(src);
  const opAttr = escapeHtml(edge.op);
  return (
    `<tr class="${classes.join(" ")}" data-op="${opAttr}">` +
    `<td class="op">${escapeHtml(edge.op)}</td>` +
    `<td class="target">${escapeHtml(edge.target)}</td>` +
    `<td class="cost">${edge.cost}</td>` +
    `<td class="marks">${marks}</td>` +
    `<td class="act">` +
    `<button data-action="propose" data-src="${srcAttr}" data-op="${opAttr}"${disabled}>propose</button>` +
    `<button data-action="risky" data-src="${srcAttr}" data-op="${opAttr}" data-on="${!edge.risky}">` +
    `${edge.risky ? "clear risky" : "mark risky"}</button>` +
    `</td></tr>`
  );
}

export function renderPending(pending: Proposal | null): string {
  if (!pending) {
    return `<div class="pending empty">no pending proposal</div>`;
  }
  const [src, op] = pending.edge;
  const label = `${escapeHtml(pending.id)}: ${escapeHtml(src)} --${escapeHtml(op)}--&gt;`;
  if (pending.decided === null) {
    const pid = escapeHtml(pending.id);
    return (
      `<div class="pending undecided">${label}` +
      ` proposed by ${escapeHtml(pending.proposed_by)}` +
      ` <button data-action="approve" data-proposal="${pid}">approve</button>` +
      ` <button data-action="veto" data-proposal="${pid}">veto</button>` +
      `</div>`
    );
  }
  return (
    `<div class="pending decided">${label} ${escapeHtml(pending.decided)}` +
    ` by ${escapeHtml(pending.decided_by ?? "?")}</div>`
  );
}

export function renderScene(
  scene: SceneView | null,
  staleFacts: number[],
): string {
  if (!scene) return "";
  const stale = new Set(staleFacts);
  const cells = scene.values
    .map((value, index) => {
      const cls = stale.has(index) ? "fact stale" : "fact";
      return `<li class="${cls}">${escapeHtml(value ?? "?")}</li>`;
    })
    .join("");
  return `<ol class="scene" title="facts as of t=${scene.as_of}">${cells}</ol>`;
}

export function renderAlarms(alarms: AlarmView[]): string {
  if (alarms.length === 0) return "";
  const items = alarms
    .map((alarm) => {
      const move = `${escapeHtml(alarm.previous ?? "?")} -&gt; ${escapeHtml(alarm.new ?? "?")}`;
      return `<div class="alarm">${escapeHtml(alarm.kind)}: ${move}</div>`;
    })
    .join("");
  return `<div class="alarms">${items}</div>`;
}

export function renderView(view: PartialView): string {
  const flagChips = Object.entries(view.flags)
    .filter(([, value]) => value)
    .map(
      ([name]) =>
        `<button class="chip flag" data-action="flag" data-name="${escapeHtml(name)}"` +
        ` data-value="false" title="clear flag">${escapeHtml(name)}</button>`,
    )
    .join("");
  const rows = view.out_edges
    .map((edge) => renderEdgeRow(edge, view.current, view.pending !== null))
    .join("");
  const confirmations = view.awaiting_confirmation
    .map(
      (token) =>
        `<button data-action="confirm" data-token="${escapeHtml(token)}">` +
        `confirm ${escapeHtml(token)}</button>`,
    )
    .join(" ");
  const estimate =
    view.estimate_state !== null && view.estimate_state !== view.current
      ? chip("estimate", `sensors say ${view.estimate_state}`)
      : "";
  return (
    `<section class="view">` +
    `<header>` +
    `<h2 class="current">${escapeHtml(view.current)}</h2>` +
    chip(`mode ${escapeHtml(view.mode)}`, view.mode) +
    (view.degraded ? chip("degraded", "degraded") : "") +
    estimate +
    (view.prediction ? chip("prediction", `suggested: ${view.prediction}`) : "") +
    flagChips +
    ` <button data-action="flag" data-name="takeover" data-value="true">take over</button>` +
    `</header>` +
    renderAlarms(view.alarms) +
    renderScene(view.scene, view.stale_facts) +
    `<table class="edges"><thead><tr>` +
    `<th>operation</th><th>target</th><th>cost</th><th></th><th></th>` +
    `</tr></thead><tbody>${rows}</tbody></table>` +
    renderPending(view.pending) +
    (confirmations ? `<div class="confirmations">${confirmations}</div>` : "") +
    `</section>`
  );
}

export function renderEventLog(events: EventRecord[], limit = 30): string {
  const recent = events.slice(-limit).reverse();
  const items = recent
    .map(
      (event) =>
        `<li class="ev"><span class="seq">#${event.seq}</span>` +
        ` <span class="kind">${escapeHtml(event.kind)}</span>` +
        ` <code>${escapeHtml(JSON.stringify(event.payload))}</code></li>`,
    )
    .join("");
  return `<ul class="eventlog">${items}</ul>`;
}

export function renderSessionBar(
  branches: string[],
  sessions: SessionSummary[],
  activeSession: string | null,
): string {
  const branchOptions = branches
    .map((name) => `<option value="${escapeHtml(name)}">${escapeHtml(name)}</option>`)
    .join("");
  const modeOptions = ["supervised", "autonomous", "manual"]
    .map((mode) => `<option value="${mode}">${mode}</option>`)
    .join("");
  const tabs = sessions
    .map((summary) => {
      const active = summary.session === activeSession ? " active" : "";
      return (
        `<button class="session-tab${active}" data-action="attach"` +
        ` data-session="${escapeHtml(summary.session)}">` +
        `${escapeHtml(summary.session)} (${escapeHtml(summary.current)})</button>`
      );
    })
    .join("");
  return (
    `<nav class="bar">` +
    `<select id="branch">${branchOptions}</select>` +
    `<select id="mode">${modeOptions}</select>` +
    `<input id="initial" placeholder="initial state (optional)">` +
    `<button data-action="create">new session</button>` +
    `<button data-action="inspect">inspect branch</button>` +
    `<span class="tabs">${tabs}</span>` +
    `</nav>`
  );
}

export function renderConnection(store: ConsoleStore): string {
  return (
    `<span class="conn ${store.connection}">${store.connection}</span>` +
    (store.notice ? `<span class="notice">${escapeHtml(store.notice)}</span>` : "")
  );
}

export function renderApp(
  store: ConsoleStore,
  branches: string[],
  sessions: SessionSummary[],
  inspectHtml = "",
): string {
  const body = store.view
    ? renderView(store.view) + renderEventLog(store.events)
    : inspectHtml ||
      `<p class="hint">create a session or pick one above to begin</p>`;
  return (
    renderSessionBar(branches, sessions, store.sessionId) +
    `<div class="status">${renderConnection(store)}</div>` +
    body
  );
}
