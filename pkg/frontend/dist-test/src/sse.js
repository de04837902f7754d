/** Incremental parser for the `id:`/`event:`/`data:` framing. */
export class SseParser {
    buffer = "";
    feed(chunk) {
        this.buffer += chunk.replace(/\r\n/g, "\n");
        const frames = [];
        let cut;
        while ((cut = this.buffer.indexOf("\n\n")) >= 0) {
            const block = this.buffer.slice(0, cut);
            this.buffer = this.buffer.slice(cut + 2);
            const frame = { data: "" };
            const dataLines = [];
            for (const line of block.split("\n")) {
                if (line.startsWith("id: "))
                    frame.id = line.slice(4);
                else if (line.startsWith("event: "))
                    frame.event = line.slice(7);
                else if (line.startsWith("data: "))
                    dataLines.push(line.slice(6));
                else if (line.startsWith("data:"))
                    dataLines.push(line.slice(5));
            }
            frame.data = dataLines.join("\n");
            if (frame.data.length > 0 || frame.event)
                frames.push(frame);
        }
        return frames;
    }
}
export function decodeEvent(frame) {
    const payload = JSON.parse(frame.data);
    return {
        kind: frame.event ?? "message",
        sequence: Number(payload.sequence ?? frame.id ?? -1),
        ...payload,
    };
}
/** Protocol violation: the server skipped a sequence. Never retried. */
export class EventGapError extends Error {
}
/**
 * Consume a job's event stream until its terminal event, reconnecting with
 * the cursor on transport errors. Duplicate sequences (replays after a
 * reconnect) are dropped, so the caller sees each event exactly once.
 */
export async function streamJobEvents(urlFor, opts) {
    const fetchImpl = opts.fetchImpl ?? fetch;
    const deadline = Date.now() + (opts.timeoutMs ?? 120_000);
    let cursor = opts.fromSeq ?? 0;
    let terminal = false;
    while (!terminal) {
        if (Date.now() > deadline)
            throw new Error("event stream timed out");
        let resp;
        try {
            resp = await fetchImpl(urlFor(cursor));
        }
        catch {
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
                if (done)
                    break;
                for (const frame of parser.feed(decoder.decode(value, { stream: true }))) {
                    const event = decodeEvent(frame);
                    if (event.sequence < cursor)
                        continue; // replayed after reconnect
                    if (event.sequence > cursor) {
                        throw new EventGapError(`event gap: expected ${cursor}, got ${event.sequence}`);
                    }
                    cursor = event.sequence + 1;
                    opts.onEvent(event);
                    if (event.kind === "terminal")
                        terminal = true;
                }
                if (Date.now() > deadline)
                    throw new Error("event stream timed out");
            }
        }
        catch (err) {
            if (err instanceof EventGapError)
                throw err;
            // dropped connection: fall through and reconnect at the cursor
        }
        finally {
            reader.releaseLock();
        }
    }
    return cursor;
}
