// Bootstraps the studio: form submission, event-stream attachment (resumable
// via the job id in the URL hash), live progress, gallery, accept and rerun.
import { StudioApi } from "./api.js";
import { initialView, reduce } from "./state.js";
import { readForm, renderGallery, renderProgress, renderStatus } from "./views.js";
import { streamJobEvents } from "./sse.js";
const api = new StudioApi("");
let view = null;
let sortKey = "score";
function $(id) {
    const node = document.getElementById(id);
    if (!node)
        throw new Error(`missing #${id}`);
    return node;
}
function repaint() {
    if (!view)
        return;
    renderStatus(view, $("status"));
    renderProgress(view, $("progress"));
}
async function refreshGallery() {
    if (!view)
        return;
    const [status, candidates] = await Promise.all([
        api.getJob(view.jobId),
        api.listCandidates(view.jobId),
    ]);
    view = { ...view, candidates, accepted: status.accepted };
    renderGallery(candidates, status.accepted, sortKey, $("gallery"), {
        onAccept: async (candidateId) => {
            await api.selectCandidate(view.jobId, candidateId);
            await refreshGallery();
        },
    });
}
async function attach(jobId) {
    view = initialView(jobId);
    window.location.hash = `job=${jobId}`;
    $("gallery").replaceChildren();
    repaint();
    await streamJobEvents((from) => api.eventsUrl(jobId, from), {
        fromSeq: 0,
        timeoutMs: 10 * 60_000,
        onEvent: (event) => {
            if (!view)
                return;
            view = reduce(view, event);
            repaint();
        },
    });
    await refreshGallery();
}
function wire() {
    $("submit").addEventListener("click", async () => {
        const form = readForm(document.body);
        if (!form.text || !form.concept) {
            $("status").textContent = "need characters and a concept";
            return;
        }
        const jobId = await api.submitJob({
            text: form.text,
            concept: form.concept,
            raw_text: `A ${form.concept} in ${form.domain || "general"} design`,
            domain: form.domain,
            k: form.k,
            seed: form.seed,
        });
        void attach(jobId);
    });
    $("rerun").addEventListener("click", async () => {
        if (!view)
            return;
        const form = readForm(document.body);
        const newId = await api.rerunJob(view.jobId, {
            seed: form.seed,
            concept: form.concept || undefined,
            k: form.k,
        });
        void attach(newId);
    });
    $("sort").addEventListener("change", (ev) => {
        sortKey = ev.target.value;
        void refreshGallery();
    });
    const match = window.location.hash.match(/job=([0-9a-f]+)/);
    if (match)
        void attach(match[1]);
}
wire();
