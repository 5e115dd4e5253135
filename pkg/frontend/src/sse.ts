/** Incremental parser and fetch-based reader for Server-Sent Events.
 *
 * The same code path serves the browser and the Node test harness, so
 * the console does not depend on the EventSource global.
 */

export interface SseMessage {
  id: number | null;
  event: string;
  data: string;
}

export class SseParser {
  private buffer = "";
  private id: number | null = null;
  private event = "";
  private data: string[] = [];

  /** Feed one chunk of stream text; returns the messages it completed. */
  feed(chunk: string): SseMessage[] {
    this.buffer += chunk;
    const out: SseMessage[] = [];
    for (;;) {
      const nl = this.buffer.indexOf("\n");
      if (nl < 0) break;
      let line = this.buffer.slice(0, nl);
      this.buffer = this.buffer.slice(nl + 1);
      if (line.endsWith("\r")) line = line.slice(0, -1);
      const message = this.line(line);
      if (message) out.push(message);
    }
    return out;
  }

  private line(line: string): SseMessage | null {
    if (line === "") return this.dispatch();
    if (line.startsWith(":")) return null; // keep-alive comment
    let field = line;
    let value = "";
    const colon = line.indexOf(":");
    if (colon >= 0) {
      field = line.slice(0, colon);
      value = line.slice(colon + 1);
      if (value.startsWith(" ")) value = value.slice(1);
    }
    if (field === "id") {
      const parsed = Number(value);
      this.id = Number.isFinite(parsed) ? parsed : null;
    } else if (field === "event") {
      this.event = value;
    } else if (field === "data") {
      this.data.push(value);
    }
    return null;
  }

  private dispatch(): SseMessage | null {
    if (this.data.length === 0) {
      this.event = "";
      return null;
    }
    const message: SseMessage = {
      id: this.id,
      event: this.event || "message",
      data: this.data.join("\n"),
    };
    this.event = "";
    this.data = [];
    return message;
  }
}

type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** Read an event stream until it closes or the signal aborts.
 * Messages are handed to onMessage in arrival order, one at a time. */
export async function streamEvents(
  url: string,
  onMessage: (message: SseMessage) => void | Promise<void>,
  options: { fetchImpl?: FetchLike; signal?: AbortSignal } = {},
): Promise<void> {
  const fetchImpl =
    options.fetchImpl ?? ((input: string, init?: RequestInit) => fetch(input, init));
  const res = await fetchImpl(url, {
    headers: { accept: "text/event-stream" },
    signal: options.signal,
  });
  if (!res.ok || !res.body) {
    throw new Error(`event stream failed: HTTP ${res.status}`);
  }
  const reader = res.body.getReader();
  const decoder = new TextDecoder();
  const parser = new SseParser();
  try {
    for (;;) {
      const { done, value } = await reader.read();
      if (done) break;
      for (const message of parser.feed(decoder.decode(value, { stream: true }))) {
        await onMessage(message);
      }
    }
  } finally {
    reader.releaseLock();
  }
}
