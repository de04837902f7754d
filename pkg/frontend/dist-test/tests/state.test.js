import assert from "node:assert/strict";
import { test } from "node:test";
import { initialView, reduce, sortCandidates } from "../src/state.js";
function ev(sequence, kind, rest = {}) {
    return { sequence, kind, ...rest };
}
test("cursor equals last rendered sequence plus one", () => {
    let view = initialView("j1");
    view = reduce(view, ev(0, "state_change", { state: "concretizing", restart_count: 0 }));
    view = reduce(view, ev(1, "iteration", { candidate: "a", iteration: 0, loss: 1.0 }));
    assert.equal(view.cursor, 2);
    assert.equal(view.state, "concretizing");
});
test("out-of-order or skipped events are rejected", () => {
    let view = initialView("j1");
    view = reduce(view, ev(0, "state_change", { state: "semantic" }));
    assert.throws(() => reduce(view, ev(2, "iteration", { candidate: "a", iteration: 1, loss: 0.5 })));
    assert.throws(() => reduce(view, ev(0, "state_change", { state: "semantic" })));
});
test("loss series accumulates per candidate in order", () => {
    let view = initialView("j1");
    const seq = [
        ev(0, "iteration", { candidate: "a", iteration: 0, loss: 3.0 }),
        ev(1, "iteration", { candidate: "b", iteration: 0, loss: 9.0 }),
        ev(2, "iteration", { candidate: "a", iteration: 1, loss: 2.0 }),
    ];
    for (const e of seq)
        view = reduce(view, e);
    assert.deepEqual(view.losses.get("a").map((p) => p.loss), [3.0, 2.0]);
    assert.equal(view.losses.get("b").length, 1);
});
test("frame playback order equals event sequence order", () => {
    let view = initialView("j1");
    view = reduce(view, ev(0, "frame", { candidate: "a", iteration: 0, url: "/api/blobs/x" }));
    view = reduce(view, ev(1, "iteration", { candidate: "a", iteration: 1, loss: 1 }));
    view = reduce(view, ev(2, "frame", { candidate: "a", iteration: 2, url: "/api/blobs/y" }));
    assert.deepEqual(view.frameOrder, [0, 2]);
    assert.equal(view.latestFrame.url, "/api/blobs/y");
    assert.equal(view.latestFrame.iteration, 2);
});
test("region and ranked and terminal events land in the view", () => {
    let view = initialView("j1");
    view = reduce(view, ev(0, "region", { candidate: "a", box: [1, 2, 3, 4], start: 5, length: 7 }));
    view = reduce(view, ev(1, "ranked", { attempt: 0, qualified: 2, tau: 1.25 }));
    view = reduce(view, ev(2, "terminal", { state: "done", restart_count: 0, selected: ["a"] }));
    assert.deepEqual(view.regions.get("a").box, [1, 2, 3, 4]);
    assert.equal(view.qualified, 2);
    assert.equal(view.tau, 1.25);
    assert.ok(view.terminal);
    assert.equal(view.terminalState, "done");
    assert.deepEqual(view.selected, ["a"]);
});
function cand(id, score) {
    return {
        id,
        character: "O",
        attempt: 0,
        score,
        qualified: true,
        selected: false,
        region: { start: 0, length: 1 },
        images: { sem: "", sty: "", tex: "", svg: "" },
    };
}
test("gallery sorting: score descending with id tiebreak, or plain id", () => {
    const pool = [cand("b", 1.0), cand("a", 1.0), cand("c", 2.0)];
    assert.deepEqual(sortCandidates(pool, "score").map((c) => c.id), ["c", "a", "b"]);
    assert.deepEqual(sortCandidates(pool, "id").map((c) => c.id), ["a", "b", "c"]);
    // input untouched
    assert.deepEqual(pool.map((c) => c.id), ["b", "a", "c"]);
});
