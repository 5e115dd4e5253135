/** Browser bootstrap: wires the API client, the event stream, and the
 * renderers onto the #app element. All logic lives in the imported
 * modules; this file only reads the DOM and schedules work. */

import { dispatchAction } from "./actions.js";
import { ApiClient } from "./api.js";
import { renderInspect } from "./inspect.js";
import { renderApp } from "./render.js";
import { streamEvents } from "./sse.js";
import { ConsoleStore } from "./store.js";
import type { SessionSummary } from "./types.js";

const RETRY_MS = 1000;

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}

export function init(root: HTMLElement): void {
  const api = new ApiClient("");
  const store = new ConsoleStore();
  let branches: string[] = [];
  let sessions: SessionSummary[] = [];
  let inspectHtml = "";
  let streamAbort: AbortController | null = null;

  const rerender = () => {
    root.innerHTML = renderApp(store, branches, sessions, inspectHtml);
  };

  const refresh = async () => {
    if (!store.sessionId) return;
    try {
      store.setView(await api.view(store.sessionId));
      sessions = await api.sessions();
    } catch (err) {
      store.notice = err instanceof Error ? err.message : String(err);
    }
    rerender();
  };

  const followStream = async (sid: string) => {
    streamAbort?.abort();
    const abort = new AbortController();
    streamAbort = abort;
    while (store.sessionId === sid && !abort.signal.aborted) {
      try {
        store.connection = "live";
        rerender();
        await streamEvents(
          `/sessions/${encodeURIComponent(sid)}/events?after=${store.lastSeq}`,
          async (message) => {
            if (store.ingest(message)) await refresh();
          },
          { signal: abort.signal },
        );
      } catch {
        // dropped connection, retry below
      }
      if (store.sessionId !== sid || abort.signal.aborted) break;
      store.connection = "lost";
      rerender();
      await sleep(RETRY_MS);
    }
  };

  const attach = async (sid: string) => {
    store.attach(sid);
    inspectHtml = "";
    await refresh();
    void followStream(sid);
  };

  const value = (id: string): string => {
    const el = root.querySelector<HTMLInputElement | HTMLSelectElement>(`#${id}`);
    return el ? el.value : "";
  };

  root.addEventListener("click", (ev) => {
    const target = ev.target as Element | null;
    const button = target?.closest<HTMLElement>("[data-action]");
    if (!button) return;
    const action = button.dataset.action ?? "";
    if (action === "attach") {
      void attach(button.dataset.session ?? "");
    } else if (action === "create") {
      const req = {
        branch: value("branch"),
        mode: value("mode") || undefined,
        initial: value("initial") || undefined,
      };
      void api
        .createSession(req)
        .then((summary) => attach(summary.session))
        .catch((err) => {
          store.notice = err instanceof Error ? err.message : String(err);
          rerender();
        });
    } else if (action === "inspect") {
      void api
        .inspect(value("branch"))
        .then((full) => {
          streamAbort?.abort();
          store.sessionId = null;
          store.view = null;
          store.connection = "idle";
          inspectHtml = renderInspect(full);
          rerender();
        })
        .catch((err) => {
          store.notice = err instanceof Error ? err.message : String(err);
          rerender();
        });
    } else {
      void dispatchAction(
        {
          api,
          store,
          actor: "console",
          refresh,
          notify: (message) => {
            store.notice = message;
            rerender();
          },
        },
        action,
        { ...button.dataset },
      );
    }
  });

  void (async () => {
    try {
      branches = await api.branches();
      sessions = await api.sessions();
    } catch (err) {
      store.notice = err instanceof Error ? err.message : String(err);
    }
    rerender();
  })();
}

if (typeof document !== "undefined") {
  const root = document.getElementById("app");
  if (root) init(root);
}
