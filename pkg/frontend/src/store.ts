/** Console-side session state: the latest partial view, the event feed,
 * and the stream position used for reconnect and replay dedupe. */

import type { SseMessage } from "./sse.js";
import type { PartialView, SessionEvent } from "./types.js";

export interface EventRecord extends SessionEvent {
  seq: number;
}

export type Connection = "idle" | "connecting" | "live" | "lost";

const EVENT_CAP = 200;

export class ConsoleStore {
  sessionId: string | null = null;
  view: PartialView | null = null;
  events: EventRecord[] = [];
  lastSeq = 0;
  connection: Connection = "idle";
  notice = "";

  attach(sessionId: string): void {
    this.sessionId = sessionId;
    this.view = null;
    this.events = [];
    this.lastSeq = 0;
    this.connection = "connecting";
    this.notice = "";
  }

  /** Record one stream message. Returns true when it was new, meaning
   * the view should be refreshed; replayed or unnumbered messages are
   * dropped. */
  ingest(message: SseMessage): boolean {
    if (message.id === null || message.id <= this.lastSeq) return false;
    let decoded: SessionEvent;
    try {
      decoded = JSON.parse(message.data) as SessionEvent;
    } catch {
      return false;
    }
    this.lastSeq = message.id;
    this.events.push({ ...decoded, seq: message.id });
    if (this.events.length > EVENT_CAP) {
      this.events.splice(0, this.events.length - EVENT_CAP);
    }
    return true;
  }

  setView(view: PartialView): void {
    this.view = view;
  }

  latest(): EventRecord | null {
    return this.events.length > 0 ? this.events[this.events.length - 1]! : null;
  }
}
