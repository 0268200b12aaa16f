// Step-response preview: reset and reset-free traces side by side with
// jump markers; diverged runs get an explicit "unstable" annotation.

import type { TrajectoryResponse } from "./api.js";

export interface TraceStyle {
  color: string;
  label: string;
}

export function plotTraces(
  canvas: HTMLCanvasElement,
  traces: { data: TrajectoryResponse; style: TraceStyle }[],
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  const W = canvas.width;
  const H = canvas.height;
  ctx.clearRect(0, 0, W, H);
  if (!traces.length) return;

  let tMax = 1e-9;
  let yMin = 0;
  let yMax = 1e-9;
  for (const { data } of traces) {
    if (data.times.length) tMax = Math.max(tMax, data.times[data.times.length - 1]);
    for (const v of data.y) {
      if (Number.isFinite(v)) {
        yMin = Math.min(yMin, v);
        yMax = Math.max(yMax, v);
      }
    }
  }
  const pad = 28;
  const sx = (t: number) => pad + ((W - 2 * pad) * t) / tMax;
  const sy = (v: number) =>
    H - pad - ((H - 2 * pad) * (v - yMin)) / Math.max(yMax - yMin, 1e-9);

  ctx.strokeStyle = "#49536b";
  ctx.lineWidth = 1;
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  if (yMin < 0 && yMax > 0) {
    ctx.beginPath();
    ctx.moveTo(pad, sy(0));
    ctx.lineTo(W - pad, sy(0));
    ctx.stroke();
  }

  let legendY = pad + 14;
  for (const { data, style } of traces) {
    ctx.strokeStyle = style.color;
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    data.times.forEach((t, i) => {
      const x = sx(t);
      const y = sy(data.y[i]);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();

    ctx.fillStyle = style.color;
    for (const tj of data.jumps) {
      ctx.beginPath();
      ctx.arc(sx(tj), sy(interp(data, tj)), 2.5, 0, 2 * Math.PI);
      ctx.fill();
    }

    const label = data.diverged ? `${style.label} — UNSTABLE` : style.label;
    ctx.font = "12px system-ui, sans-serif";
    ctx.fillText(label, pad + 8, legendY);
    legendY += 16;
  }
}

function interp(data: TrajectoryResponse, t: number): number {
  const { times, y } = data;
  let lo = 0;
  let hi = times.length - 1;
  while (hi - lo > 1) {
    const mid = (lo + hi) >> 1;
    if (times[mid] <= t) lo = mid;
    else hi = mid;
  }
  const span = times[hi] - times[lo] || 1;
  const f = (t - times[lo]) / span;
  return y[lo] + f * (y[hi] - y[lo]);
}
