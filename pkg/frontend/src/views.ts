// DOM rendering: form, live progress (frame + loss sparkline + region box),
// candidate gallery, rerun controls. No virtual DOM; targeted updates only.
import type { CandidateInfo } from "./types.js";
import type { JobView, LossPoint, SortKey } from "./state.js";
import { sortCandidates } from "./state.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

export interface FormValues {
  text: string;
  concept: string;
  domain: string;
  k: number;
  seed: number;
}

export function readForm(root: HTMLElement): FormValues {
  const get = (id: string) =>
    (root.querySelector(`#${id}`) as HTMLInputElement).value;
  return {
    text: get("f-text").trim(),
    concept: get("f-concept").trim(),
    domain: get("f-domain").trim(),
    k: parseInt(get("f-k"), 10) || 1,
    seed: parseInt(get("f-seed"), 10) || 0,
  };
}

export function renderStatus(view: JobView, node: HTMLElement): void {
  const bits = [
    `job ${view.jobId}`,
    `state: ${view.terminalState ?? view.state}`,
    `restarts: ${view.restartCount}`,
  ];
  if (view.concretization) bits.push(`prompt: ${view.concretization.stylize}`);
  if (view.qualified !== null && view.tau !== null)
    bits.push(`qualified: ${view.qualified} (tau ${view.tau.toFixed(3)})`);
  if (view.error) bits.push(`error: ${view.error}`);
  node.textContent = bits.join("  ·  ");
  node.dataset.terminal = String(view.terminal);
}

export function renderProgress(view: JobView, canvas: HTMLCanvasElement): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.fillStyle = "#111";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  const frame = view.latestFrame;
  const done = () => drawSparkline(view, ctx, canvas);
  if (frame && frame.url) {
    const img = new Image();
    img.onload = () => {
      const size = Math.min(canvas.width, canvas.height) - 40;
      ctx.drawImage(img, 20, 20, size, size);
      const region = view.regions.get(frame.candidate);
      if (region && region.box.length === 4) {
        const s = size / img.naturalWidth;
        ctx.strokeStyle = "#c084fc";
        ctx.lineWidth = 2;
        ctx.strokeRect(
          20 + region.box[0] * s,
          20 + region.box[1] * s,
          (region.box[2] - region.box[0]) * s,
          (region.box[3] - region.box[1]) * s,
        );
      }
      done();
    };
    img.src = frame.url;
  } else {
    done();
  }
}

function drawSparkline(
  view: JobView,
  ctx: CanvasRenderingContext2D,
  canvas: HTMLCanvasElement,
): void {
  const series: LossPoint[] =
    (view.latestFrame && view.losses.get(view.latestFrame.candidate)) ??
    [...view.losses.values()].at(-1) ??
    [];
  if (series.length < 2) return;
  const w = canvas.width - 40;
  const h = 48;
  const y0 = canvas.height - 16;
  const max = Math.max(...series.map((p) => p.loss));
  const min = Math.min(...series.map((p) => p.loss));
  const span = max - min || 1;
  ctx.strokeStyle = "#4ade80";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  series.forEach((p, i) => {
    const x = 20 + (i / (series.length - 1)) * w;
    const y = y0 - ((p.loss - min) / span) * h;
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
  ctx.fillStyle = "#9ca3af";
  ctx.font = "11px monospace";
  ctx.fillText(`loss ${series.at(-1)!.loss.toExponential(2)}`, 20, y0 + 12);
}

export interface GalleryHandlers {
  onAccept: (candidateId: string) => void;
}

export function renderGallery(
  candidates: CandidateInfo[],
  accepted: string | null,
  sortKey: SortKey,
  node: HTMLElement,
  handlers: GalleryHandlers,
): void {
  node.replaceChildren();
  for (const cand of sortCandidates(candidates, sortKey)) {
    const card = el("div", { class: "card", "data-id": cand.id });
    const img = el("img", { src: cand.images.tex, alt: cand.id });
    const overlay = el("img", { src: cand.images.svg, class: "overlay" });
    const pics = el("div", { class: "pics" });
    pics.append(img, overlay);
    const caption = el(
      "div",
      { class: "caption" },
      `${cand.character} · ${cand.id} · score ${cand.score.toFixed(3)}` +
        (cand.qualified ? "" : " · below cut"),
    );
    const row = el("div", { class: "row" });
    for (const [label, url] of [
      ["layout", cand.images.sem],
      ["styled", cand.images.sty],
      ["textured", cand.images.tex],
    ] as const) {
      const link = el("a", { href: url, target: "_blank" }, label);
      row.append(link);
    }
    const accept = el("button", { class: "accept" });
    accept.textContent = accepted === cand.id ? "accepted ✓" : "accept";
    if (cand.id === accepted) card.classList.add("accepted");
    accept.addEventListener("click", () => handlers.onAccept(cand.id));
    card.append(pics, caption, row, accept);
    node.append(card);
  }
}
