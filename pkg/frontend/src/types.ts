// Wire types for the studio service API.

export interface JobStatus {
  job_id: string;
  state: string;
  restart_count: number;
  terminal: boolean;
  error: string | null;
  rerun_of: string | null;
  selected: string[];
  accepted: string | null;
  tau: number | null;
  event_count: number;
}

export interface CandidateImages {
  sem: string;
  sty: string;
  tex: string;
  svg: string;
}

export interface CandidateInfo {
  id: string;
  character: string;
  attempt: number;
  score: number;
  qualified: boolean;
  selected: boolean;
  region: { start: number; length: number };
  images: CandidateImages;
}

export interface StudioEvent {
  sequence: number;
  kind: string;
  // kind-specific payload fields, already JSON-decoded
  [key: string]: unknown;
}

export interface SubmitBody {
  raw_text?: string;
  text?: string;
  concept?: string;
  domain?: string;
  k?: number;
  seed?: number;
  tau?: number;
  iterations?: number;
  min_len?: number;
  max_len?: number;
  seeds_per_attempt?: number;
  canvas_px?: number;
  min_points?: number;
  crop_px?: number;
  crop_count?: number;
  frame_stride?: number;
  workers?: number;
}
