// Canvas painters for the separation view and the badge.

import type { RegionDoc } from "./api.js";
import { ghostFamily } from "./ghosts.js";
import type { ViewState } from "./state.js";
import { toScreen, type Viewport } from "./viewport.js";

export const COLORS = {
  grid: "#2a2f3a",
  axis: "#49536b",
  nyquist: "#4ea1ff",
  inverted: "#7ee0a0",
  hull: "#46b3e6",
  encircled: "rgba(110, 170, 255, 0.12)",
  controller: "#ff9f5a",
  controllerFill: "rgba(255, 159, 90, 0.18)",
  ghost: "rgba(255, 159, 90, 0.35)",
  distance: "#ffd166",
  certified: "#3ecf6f",
  uncertified: "#ff5964",
};

function splitLoops(region: RegionDoc): [number, number][][] {
  const pts = region.boundary;
  const lens = region.loops ?? [pts.length];
  const out: [number, number][][] = [];
  let at = 0;
  for (const n of lens) {
    out.push(pts.slice(at, at + n));
    at += n;
  }
  return out;
}

export function drawPolyline(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  pts: [number, number][],
  color: string,
  width = 1.5,
  close = false,
): void {
  if (pts.length < 2) return;
  ctx.strokeStyle = color;
  ctx.lineWidth = width;
  ctx.beginPath();
  const [x0, y0] = toScreen(vp, pts[0][0], pts[0][1]);
  ctx.moveTo(x0, y0);
  for (let i = 1; i < pts.length; i++) {
    const [x, y] = toScreen(vp, pts[i][0], pts[i][1]);
    ctx.lineTo(x, y);
  }
  if (close) ctx.closePath();
  ctx.stroke();
}

export function drawRegion(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  region: RegionDoc,
  stroke: string,
  fill?: string,
): void {
  for (const loop of splitLoops(region)) {
    if (fill && loop.length > 2) {
      ctx.fillStyle = fill;
      ctx.beginPath();
      const [x0, y0] = toScreen(vp, loop[0][0], loop[0][1]);
      ctx.moveTo(x0, y0);
      for (let i = 1; i < loop.length; i++) {
        const [x, y] = toScreen(vp, loop[i][0], loop[i][1]);
        ctx.lineTo(x, y);
      }
      ctx.closePath();
      ctx.fill();
    }
    drawPolyline(ctx, vp, loop, stroke, 1.5, true);
  }
}

function drawAxes(ctx: CanvasRenderingContext2D, vp: Viewport): void {
  ctx.strokeStyle = COLORS.axis;
  ctx.lineWidth = 1;
  const [ox, oy] = toScreen(vp, 0, 0);
  ctx.beginPath();
  ctx.moveTo(0, oy);
  ctx.lineTo(vp.width, oy);
  ctx.moveTo(ox, 0);
  ctx.lineTo(ox, vp.height);
  ctx.stroke();
}

/** Nearest pair between the controller region boundary and the inverted
 * graph polylines — annotation only; the authoritative number is the
 * service's separation value. */
export function nearestPair(
  controller: [number, number][],
  inverted: [number, number][][],
): { a: [number, number]; b: [number, number]; dist: number } | null {
  let best: { a: [number, number]; b: [number, number]; dist: number } | null = null;
  const flat: [number, number][] = [];
  for (const loop of inverted) {
    const stride = Math.max(1, Math.floor(loop.length / 600));
    for (let i = 0; i < loop.length; i += stride) flat.push(loop[i]);
  }
  const cstride = Math.max(1, Math.floor(controller.length / 400));
  for (let i = 0; i < controller.length; i += cstride) {
    const [cx, cy] = controller[i];
    for (const [px, py] of flat) {
      const d = Math.hypot(cx - px, cy - py);
      if (!best || d < best.dist) best = { a: [cx, cy], b: [px, py], dist: d };
    }
  }
  return best;
}

export function renderSeparationView(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  state: ViewState,
): void {
  ctx.clearRect(0, 0, vp.width, vp.height);
  drawAxes(ctx, vp);

  if (state.invertedRegion) {
    const loops = splitLoops(state.invertedRegion);
    for (const loop of loops) drawPolyline(ctx, vp, loop, COLORS.inverted, 1.2);
  }

  const ev = state.lastEvaluation;
  if (ev) {
    drawRegion(ctx, vp, ev.controller_region, COLORS.controller, COLORS.controllerFill);
    if (state.overlays.tauGhosts) {
      // the anchor of the NEGATED region is -kappa
      const anchor: [number, number] = [-ev.kappa[0], -ev.kappa[1]];
      for (const ghost of ghostFamily(ev.controller_region.boundary, anchor)) {
        drawPolyline(ctx, vp, ghost, COLORS.ghost, 1.0, true);
      }
    }
    if (state.invertedRegion && ev.separation > 0) {
      const pair = nearestPair(
        ev.controller_region.boundary,
        splitLoops(state.invertedRegion),
      );
      if (pair) {
        drawPolyline(ctx, vp, [pair.a, pair.b], COLORS.distance, 1.5);
        const [mx, my] = toScreen(
          vp,
          (pair.a[0] + pair.b[0]) / 2,
          (pair.a[1] + pair.b[1]) / 2,
        );
        ctx.fillStyle = COLORS.distance;
        ctx.font = "12px system-ui, sans-serif";
        const bound = ev.gain_bound === null ? "∞" : Number(ev.gain_bound).toPrecision(4);
        ctx.fillText(`r = ${Number(ev.separation).toPrecision(3)}  (γ ≤ ${bound})`, mx + 8, my - 6);
      }
    }
  }
}
