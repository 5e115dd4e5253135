/** Maps data-action clicks to API calls. Kept free of DOM types so the
 * unit tests can drive it with fake clients. */

import type { ApiClient } from "./api.js";
import type { ConsoleStore } from "./store.js";

export type CommandApi = Pick<
  ApiClient,
  "propose" | "decide" | "setRisky" | "setFlag" | "confirm"
>;

export interface ActionContext {
  api: CommandApi;
  store: ConsoleStore;
  actor: string;
  refresh(): Promise<void>;
  notify(message: string): void;
}

export type ActionData = Record<string, string | undefined>;

/** Handle one console action. Unknown actions and API rejections turn
 * into notices, never exceptions; every accepted command refreshes. */
export async function dispatchAction(
  ctx: ActionContext,
  action: string,
  data: ActionData,
): Promise<void> {
  const sid = ctx.store.sessionId;
  if (!sid) {
    ctx.notify("no session attached");
    return;
  }
  try {
    switch (action) {
      case "propose":
        await ctx.api.propose(
          sid,
          [data.src ?? ctx.store.view?.current ?? "", data.op ?? ""],
          ctx.actor,
        );
        break;
      case "approve":
        await ctx.api.decide(sid, data.proposal ?? "", "approved", ctx.actor);
        break;
      case "veto":
        await ctx.api.decide(sid, data.proposal ?? "", "vetoed", ctx.actor);
        break;
      case "risky":
        await ctx.api.setRisky(
          sid,
          [data.src ?? "", data.op ?? ""],
          data.on === "true",
          ctx.actor,
        );
        break;
      case "flag":
        await ctx.api.setFlag(
          sid,
          data.name ?? "",
          data.value === "true",
          ctx.actor,
        );
        break;
      case "confirm":
        await ctx.api.confirm(sid, data.token ?? "", ctx.actor);
        break;
      default:
        ctx.notify(`unknown action ${action}`);
        return;
    }
    ctx.store.notice = "";
    await ctx.refresh();
  } catch (err) {
    ctx.notify(err instanceof Error ? err.message : String(err));
  }
}
