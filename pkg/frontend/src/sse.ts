// Server-sent-events over fetch streaming, with cursor-based resumption.
// One code path for browser and node (both ship fetch + ReadableStream),
// which also lets the scripted e2e session drive the exact client the UI uses.
import type { StudioEvent } from "./types.js";

export interface SseFrame {
  id?: string;
  event?: string;
  data: string;
}

/** Incremental parser for the `id:`/`event:`/`data:` framing. */
export class SseParser {
  private buffer = "";

  feed(chunk: string): SseFrame[] {
    this.buffer += chunk.replace(/\r\n/g, "\n");
    const frames: SseFrame[] = [];
    let cut: number;
    while ((cut = this.buffer.indexOf("\n\n")) >= 0) {
      const block = this.buffer.slice(0, cut);
      this.buffer = this.buffer.slice(cut + 2);
      const frame: SseFrame = { data: "" };
      const dataLines: string[] = [];
      for (const line of block.split("\n")) {
        if (line.startsWith("id: ")) frame.id = line.slice(4);
        else if (line.startsWith("event: ")) frame.event = line.slice(7);
        else if (line.startsWith("data: ")) dataLines.push(line.slice(6));
        else if (line.startsWith("data:")) dataLines.push(line.slice(5));
      }
      frame.data = dataLines.join("\n");
      if (frame.data.length > 0 || frame.event) frames.push(frame);
    }
    return frames;
  }
}

export function decodeEvent(frame: SseFrame): StudioEvent {
  const payload = JSON.parse(frame.data) as Record<string, unknown>;
  return {
    kind: frame.event ?? "message",
    sequence: Number(payload.sequence ?? frame.id ?? -1),
    ...payload,
  } as StudioEvent;
}

export interface StreamOptions {
  /** Resume position: first sequence number still wanted. */
  fromSeq?: number;
  /** Called for every not-yet-seen event, in sequence order. */
  onEvent: (event: StudioEvent) => void;
  /** Wall-clock cap; the stream gives up after this many milliseconds. */
  timeoutMs?: number;
  fetchImpl?: typeof fetch;
}

/** Protocol violation: the server skipped a sequence. Never retried. */
export class EventGapError extends Error {}

/**
 * Consume a job's event stream until its terminal event, reconnecting with
 * the cursor on transport errors. Duplicate sequences (replays after a
 * reconnect) are dropped, so the caller sees each event exactly once.
 */
export async function streamJobEvents(
  urlFor: (fromSeq: number) => string,
  opts: StreamOptions,
): Promise<number> {
  const fetchImpl = opts.fetchImpl ?? fetch;
  const deadline = Date.now() + (opts.timeoutMs ?? 120_000);
  let cursor = opts.fromSeq ?? 0;
  let terminal = false;

  while (!terminal) {
    if (Date.now() > deadline) throw new Error("event stream timed out");
    let resp: Response;
    try {
      resp = await fetchImpl(urlFor(cursor));
    } catch {
      await new Promise((r) => setTimeout(r, 250));
      continue;
    }
    if (!resp.ok || !resp.body) {
      await new Promise((r) => setTimeout(r, 250));
      continue;
    }
    const reader = resp.body.getReader();
    const decoder = new TextDecoder();
    const parser = new SseParser();
    try {
      for (;;) {
        const { done, value } = await reader.read();
        if (done) break;
        for (const frame of parser.feed(decoder.decode(value, { stream: true }))) {
          const event = decodeEvent(frame);
          if (event.sequence < cursor) continue; // replayed after reconnect
          if (event.sequence > cursor) {
            throw new EventGapError(
              `event gap: expected ${cursor}, got ${event.sequence}`,
            );
          }
          cursor = event.sequence + 1;
          opts.onEvent(event);
          if (event.kind === "terminal") terminal = true;
        }
        if (Date.now() > deadline) throw new Error("event stream timed out");
      }
    } catch (err) {
      if (err instanceof EventGapError) throw err;
      // dropped connection: fall through and reconnect at the cursor
    } finally {
      reader.releaseLock();
    }
  }
  return cursor;
}
