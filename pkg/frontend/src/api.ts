// Typed client for the documented endpoints. The UI never computes scores
// or rankings itself; everything rendered comes from these responses.
import type { CandidateInfo, JobStatus, SubmitBody } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function check(resp: Response): Promise<Response> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = await resp.json();
      detail = body.detail ?? detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return resp;
}

export class StudioApi {
  constructor(private base: string = "") {}

  async submitJob(body: SubmitBody): Promise<string> {
    const resp = await check(
      await fetch(`${this.base}/api/jobs`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(body),
      }),
    );
    const data = await resp.json();
    return data.job_id as string;
  }

  async getJob(jobId: string): Promise<JobStatus> {
    const resp = await check(await fetch(`${this.base}/api/jobs/${jobId}`));
    return (await resp.json()) as JobStatus;
  }

  async listCandidates(jobId: string): Promise<CandidateInfo[]> {
    const resp = await check(
      await fetch(`${this.base}/api/jobs/${jobId}/candidates`),
    );
    const data = await resp.json();
    return data.candidates as CandidateInfo[];
  }

  async selectCandidate(jobId: string, candidateId: string): Promise<void> {
    await check(
      await fetch(`${this.base}/api/jobs/${jobId}/select`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ candidate_id: candidateId }),
      }),
    );
  }

  async rerunJob(jobId: string, overrides: SubmitBody): Promise<string> {
    const resp = await check(
      await fetch(`${this.base}/api/jobs/${jobId}/rerun`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(overrides),
      }),
    );
    const data = await resp.json();
    return data.job_id as string;
  }

  eventsUrl(jobId: string, fromSeq: number): string {
    return `${this.base}/api/jobs/${jobId}/events?from=${fromSeq}`;
  }
}
