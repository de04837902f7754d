export function initialView(jobId) {
    return {
        jobId,
        state: "parsing",
        restartCount: 0,
        cursor: 0,
        terminal: false,
        terminalState: null,
        losses: new Map(),
        latestFrame: null,
        frameOrder: [],
        regions: new Map(),
        concretization: null,
        qualified: null,
        tau: null,
        selected: [],
        candidates: [],
        accepted: null,
        error: null,
    };
}
/** Apply one server event. Throws on out-of-order sequences: the transport
 * layer guarantees exactly-once, in-order delivery, and the UI depends on it. */
export function reduce(view, event) {
    if (event.sequence !== view.cursor) {
        throw new Error(`reducer expected sequence ${view.cursor}, got ${event.sequence}`);
    }
    const next = { ...view, cursor: event.sequence + 1 };
    switch (event.kind) {
        case "state_change": {
            next.state = String(event.state);
            next.restartCount = Number(event.restart_count ?? view.restartCount);
            break;
        }
        case "concretized": {
            next.concretization = {
                stylize: String(event.stylize ?? ""),
                texture: String(event.texture ?? ""),
            };
            break;
        }
        case "region": {
            const regions = new Map(view.regions);
            regions.set(String(event.candidate), {
                box: event.box ?? [],
                start: Number(event.start ?? 0),
                length: Number(event.length ?? 0),
            });
            next.regions = regions;
            break;
        }
        case "iteration": {
            const key = String(event.candidate);
            const losses = new Map(view.losses);
            const series = [...(losses.get(key) ?? [])];
            series.push({
                iteration: Number(event.iteration),
                loss: Number(event.loss),
            });
            losses.set(key, series);
            next.losses = losses;
            break;
        }
        case "frame": {
            next.latestFrame = {
                candidate: String(event.candidate),
                iteration: Number(event.iteration),
                url: String(event.url ?? ""),
            };
            next.frameOrder = [...view.frameOrder, event.sequence];
            break;
        }
        case "ranked": {
            next.qualified = Number(event.qualified);
            next.tau = Number(event.tau);
            break;
        }
        case "restart": {
            next.restartCount = Number(event.restart_count ?? view.restartCount + 1);
            break;
        }
        case "terminal": {
            next.terminal = true;
            next.terminalState = String(event.state);
            next.selected = event.selected ?? [];
            if (event.error)
                next.error = String(event.error);
            break;
        }
        default:
            break; // parsed/candidate/...: surfaced via status & gallery fetches
    }
    return next;
}
export function sortCandidates(candidates, key) {
    const copy = [...candidates];
    if (key === "score") {
        copy.sort((a, b) => b.score - a.score || a.id.localeCompare(b.id));
    }
    else {
        copy.sort((a, b) => a.id.localeCompare(b.id));
    }
    return copy;
}
