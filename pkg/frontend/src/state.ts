// Single reducer over server events; all UI state flows through here.
import type { CandidateInfo, StudioEvent } from "./types.js";

export interface LossPoint {
  iteration: number;
  loss: number;
}

export interface JobView {
  jobId: string;
  state: string;
  restartCount: number;
  cursor: number; // == last rendered sequence + 1
  terminal: boolean;
  terminalState: string | null;
  losses: Map<string, LossPoint[]>; // per candidate
  latestFrame: { candidate: string; iteration: number; url: string } | null;
  frameOrder: number[]; // sequences of frame events, for playback-order checks
  regions: Map<string, { box: number[]; start: number; length: number }>;
  concretization: { stylize: string; texture: string } | null;
  qualified: number | null;
  tau: number | null;
  selected: string[];
  candidates: CandidateInfo[];
  accepted: string | null;
  error: string | null;
}

export function initialView(jobId: string): JobView {
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
export function reduce(view: JobView, event: StudioEvent): JobView {
  if (event.sequence !== view.cursor) {
    throw new Error(
      `reducer expected sequence ${view.cursor}, got ${event.sequence}`,
    );
  }
  const next: JobView = { ...view, cursor: event.sequence + 1 };
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
        box: (event.box as number[]) ?? [],
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
      next.selected = (event.selected as string[]) ?? [];
      if (event.error) next.error = String(event.error);
      break;
    }
    default:
      break; // parsed/candidate/...: surfaced via status & gallery fetches
  }
  return next;
}

export type SortKey = "score" | "id";

export function sortCandidates(
  candidates: CandidateInfo[],
  key: SortKey,
): CandidateInfo[] {
  const copy = [...candidates];
  if (key === "score") {
    copy.sort((a, b) => b.score - a.score || a.id.localeCompare(b.id));
  } else {
    copy.sort((a, b) => a.id.localeCompare(b.id));
  }
  return copy;
}
