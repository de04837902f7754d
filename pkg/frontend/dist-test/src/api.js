export class ApiError extends Error {
    status;
    constructor(status, message) {
        super(message);
        this.status = status;
    }
}
async function check(resp) {
    if (!resp.ok) {
        let detail = resp.statusText;
        try {
            const body = await resp.json();
            detail = body.detail ?? detail;
        }
        catch {
            // non-JSON error body; keep the status text
        }
        throw new ApiError(resp.status, detail);
    }
    return resp;
}
export class StudioApi {
    base;
    constructor(base = "") {
        this.base = base;
    }
    async submitJob(body) {
        const resp = await check(await fetch(`${this.base}/api/jobs`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
        }));
        const data = await resp.json();
        return data.job_id;
    }
    async getJob(jobId) {
        const resp = await check(await fetch(`${this.base}/api/jobs/${jobId}`));
        return (await resp.json());
    }
    async listCandidates(jobId) {
        const resp = await check(await fetch(`${this.base}/api/jobs/${jobId}/candidates`));
        const data = await resp.json();
        return data.candidates;
    }
    async selectCandidate(jobId, candidateId) {
        await check(await fetch(`${this.base}/api/jobs/${jobId}/select`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify({ candidate_id: candidateId }),
        }));
    }
    async rerunJob(jobId, overrides) {
        const resp = await check(await fetch(`${this.base}/api/jobs/${jobId}/rerun`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(overrides),
        }));
        const data = await resp.json();
        return data.job_id;
    }
    eventsUrl(jobId, fromSeq) {
        return `${this.base}/api/jobs/${jobId}/events?from=${fromSeq}`;
    }
}
