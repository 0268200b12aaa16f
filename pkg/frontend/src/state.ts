// View state: slider values, overlay toggles, viewport, and the last
// results received from the service. Pure reducers; no geometry here.

import type { EvaluateResponse, RegionDoc, TrajectoryResponse } from "./api.js";

export interface SliderRange {
  min: number;
  max: number;
  step: number;
}

export const SLIDERS: Record<"kp" | "kr" | "gammaHat", SliderRange> = {
  kp: { min: 0.0, max: 5.0, step: 0.01 },
  kr: { min: -2.0, max: 2.0, step: 0.01 },
  gammaHat: { min: 0.1, max: 50.0, step: 0.1 },
};

export interface Overlays {
  hull: boolean;
  encircled: boolean;
  tauGhosts: boolean;
}

export interface ViewState {
  session: string | null;
  nP: number | null;
  kp: number;
  kr: number;
  gammaHat: number;
  overlays: Overlays;
  nyquist: [number, number][];
  invertedRegion: RegionDoc | null;
  lastEvaluation: EvaluateResponse | null;
  lastTraces: { reset?: TrajectoryResponse; lti?: TrajectoryResponse };
  serviceOk: boolean;
  pendingRequests: number;
}

export function initialState(): ViewState {
  return {
    session: null,
    nP: null,
    kp: 2.35,
    kr: -1.0,
    gammaHat: 1.0,
    overlays: { hull: true, encircled: true, tauGhosts: false },
    nyquist: [],
    invertedRegion: null,
    lastEvaluation: null,
    lastTraces: {},
    serviceOk: true,
    pendingRequests: 0,
  };
}

export function clamp(value: number, range: SliderRange): number {
  if (Number.isNaN(value)) return range.min;
  const snapped = Math.round(value / range.step) * range.step;
  return Math.min(range.max, Math.max(range.min, Number(snapped.toFixed(10))));
}

export function setControl(
  state: ViewState,
  control: "kp" | "kr" | "gammaHat",
  value: number,
): ViewState {
  return { ...state, [control]: clamp(value, SLIDERS[control]) };
}

/** The displayed separation string is exactly what the service sent. */
export function separationDisplay(state: ViewState): string {
  const ev = state.lastEvaluation;
  if (!ev) return "–";
  return ev.separationText;
}

export function gainBoundDisplay(state: ViewState): string {
  const ev = state.lastEvaluation;
  if (!ev) return "–";
  return ev.gain_bound === null ? "∞" : String(ev.gain_bound);
}

export type Badge = "certified" | "uncertified" | "unknown";

/** Badge verdict. The gain-target comparison is a pure threshold on the
 * service's separation value, so target changes re-badge without any
 * geometry refetch. */
export function badge(state: ViewState): Badge {
  const ev = state.lastEvaluation;
  if (!ev) return "unknown";
  if (!ev.certified) return "uncertified";
  return ev.separation >= 1.0 / state.gammaHat ? "certified" : "uncertified";
}
