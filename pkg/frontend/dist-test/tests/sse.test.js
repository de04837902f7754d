import assert from "node:assert/strict";
import { test } from "node:test";
import { SseParser, decodeEvent, streamJobEvents } from "../src/sse.js";
test("parser handles split frames and multiple events per chunk", () => {
    const parser = new SseParser();
    assert.deepEqual(parser.feed("id: 0\nevent: state_change\nda"), []);
    const frames = parser.feed('ta: {"sequence": 0}\n\nid: 1\nevent: iteration\ndata: {"sequence": 1}\n\n');
    assert.equal(frames.length, 2);
    assert.equal(frames[0].event, "state_change");
    assert.equal(frames[1].id, "1");
});
test("decodeEvent merges framing and payload", () => {
    const event = decodeEvent({
        id: "4",
        event: "frame",
        data: '{"sequence": 4, "candidate": "a", "url": "/api/blobs/z"}',
    });
    assert.equal(event.kind, "frame");
    assert.equal(event.sequence, 4);
    assert.equal(event.candidate, "a");
});
function sseBody(events) {
    return events
        .map(([seq, kind, payload]) => `id: ${seq}\nevent: ${kind}\ndata: ${JSON.stringify({ sequence: seq, ...payload })}\n\n`)
        .join("");
}
function fetchFromScript(script) {
    let call = 0;
    return (async (url) => {
        const step = script[Math.min(call, script.length - 1)];
        call += 1;
        const from = Number(String(url).match(/from=(\d+)/)?.[1] ?? -1);
        assert.equal(from, step.from, `reconnect cursor for call ${call}`);
        const encoder = new TextEncoder();
        let sent = false;
        const stream = new ReadableStream({
            pull(controller) {
                if (!sent) {
                    sent = true;
                    controller.enqueue(encoder.encode(step.body));
                }
                else if (step.breakAfter) {
                    controller.error(new Error("connection lost"));
                }
                else {
                    controller.close();
                }
            },
        });
        return new Response(stream, { status: 200 });
    });
}
test("stream resumes at the cursor and delivers each event exactly once", async () => {
    const delivered = [];
    // First connection dies after two events; the replacement replays from 0
    // (server replay) and the client must dedupe up to its cursor.
    const fetchImpl = fetchFromScript([
        {
            from: 0,
            body: sseBody([
                [0, "state_change", { state: "semantic" }],
                [1, "iteration", { candidate: "a", iteration: 0, loss: 1 }],
            ]),
            breakAfter: true,
        },
        {
            from: 2,
            body: sseBody([
                [2, "iteration", { candidate: "a", iteration: 1, loss: 0.5 }],
                [3, "terminal", { state: "done", selected: [] }],
            ]),
        },
    ]);
    const cursor = await streamJobEvents((from) => `http://svc/api/jobs/x/events?from=${from}`, { onEvent: (e) => delivered.push(e), fetchImpl, timeoutMs: 5000 });
    assert.equal(cursor, 4);
    assert.deepEqual(delivered.map((e) => e.sequence), [0, 1, 2, 3]);
    assert.equal(delivered.at(-1).kind, "terminal");
});
test("stream drops server replays below the cursor", async () => {
    const delivered = [];
    const fetchImpl = fetchFromScript([
        {
            from: 0,
            body: sseBody([
                [0, "state_change", { state: "semantic" }],
                [1, "iteration", { candidate: "a", iteration: 0, loss: 1 }],
            ]),
            breakAfter: true,
        },
        {
            // a server that ignores ?from and replays everything
            from: 2,
            body: sseBody([
                [0, "state_change", { state: "semantic" }],
                [1, "iteration", { candidate: "a", iteration: 0, loss: 1 }],
                [2, "terminal", { state: "done", selected: [] }],
            ]),
        },
    ]);
    await streamJobEvents((from) => `http://svc/e?from=${from}`, {
        onEvent: (e) => delivered.push(e.sequence),
        fetchImpl,
        timeoutMs: 5000,
    });
    assert.deepEqual(delivered, [0, 1, 2]);
});
test("a gap in sequences is a hard error", async () => {
    const fetchImpl = fetchFromScript([
        {
            from: 0,
            body: sseBody([
                [0, "state_change", { state: "semantic" }],
                [2, "terminal", { state: "done", selected: [] }],
            ]),
        },
    ]);
    await assert.rejects(streamJobEvents((from) => `http://svc/e?from=${from}`, {
        onEvent: () => { },
        fetchImpl,
        timeoutMs: 5000,
    }), /event gap/);
});
