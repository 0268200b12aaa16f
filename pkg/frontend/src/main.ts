// Studio wiring: plant entry, sliders, separation view, previews.

import { ApiClient, ServiceError, type EvaluateResponse } from "./api.js";
import { LatestWins } from "./latest.js";
import { renderSeparationView } from "./render.js";
import { plotTraces } from "./simplot.js";
import {
  SLIDERS,
  badge,
  gainBoundDisplay,
  initialState,
  separationDisplay,
  setControl,
  type ViewState,
} from "./state.js";
import { fitViewport, pan, zoom, type Viewport } from "./viewport.js";

const api = new ApiClient("");
let state: ViewState = initialState();
let viewport: Viewport | null = null;

const $ = <T extends HTMLElement>(id: string) => document.getElementById(id) as T;

const canvas = $<HTMLCanvasElement>("plane");
const simCanvas = $<HTMLCanvasElement>("simplot");
const ctx = canvas.getContext("2d")!;

function setBanner(message: string | null): void {
  const el = $("banner");
  el.textContent = message ?? "";
  el.style.display = message ? "block" : "none";
  for (const input of document.querySelectorAll("input, button")) {
    (input as HTMLInputElement).disabled = message !== null && input.id !== "load";
  }
}

function redraw(): void {
  if (!viewport) return;
  renderSeparationView(ctx, viewport, state);
  const b = badge(state);
  const el = $("badge");
  el.textContent =
    b === "certified" ? "CERTIFIED" : b === "uncertified" ? "NOT CERTIFIED" : "—";
  el.className = `badge ${b}`;
  $("sep-value").textContent = separationDisplay(state);
  $("gain-value").textContent = gainBoundDisplay(state);
  $("np-value").textContent = state.nP === null ? "–" : String(state.nP);
}

const evaluator = new LatestWins<
  { kp: number; kr: number; gammaHat: number },
  EvaluateResponse
>(
  (args) => api.evaluate(state.session!, args.kp, args.kr, args.gammaHat),
  (result) => {
    state = { ...state, lastEvaluation: result, serviceOk: true };
    setBanner(null);
    redraw();
  },
  (err) => {
    if (err instanceof ServiceError) setBanner(String(err.message));
  },
  30,
);

function onSlider(control: "kp" | "kr" | "gammaHat", raw: number): void {
  state = setControl(state, control, raw);
  $(`${control}-readout`).textContent = String(state[control]);
  if (!state.session) return;
  if (control === "gammaHat") {
    redraw(); // pure re-threshold of the badge; no geometry refetch
    return;
  }
  evaluator.request({ kp: state.kp, kr: state.kr, gammaHat: state.gammaHat });
}

async function loadPlant(): Promise<void> {
  const num = parseCoeffs($<HTMLInputElement>("num").value);
  const den = parseCoeffs($<HTMLInputElement>("den").value);
  if (!num.length || !den.length) {
    setBanner("enter numerator and denominator coefficients");
    return;
  }
  try {
    const resp = await api.loadPlant({ num, den });
    state = {
      ...initialState(),
      session: resp.session,
      nP: resp.n_p,
      nyquist: resp.nyquist,
      invertedRegion: resp.inverted,
      kp: state.kp,
      kr: state.kr,
      gammaHat: state.gammaHat,
    };
    setBanner(null);
    viewport = fitViewport(regionExtent(), canvas.width, canvas.height);
    await evaluator.requestNow({ kp: state.kp, kr: state.kr, gammaHat: state.gammaHat });
    redraw();
  } catch (err) {
    setBanner(err instanceof Error ? err.message : String(err));
  }
}

function regionExtent(): [number, number][] {
  // fit around the controller region's likely extent plus the origin area
  const pts: [number, number][] = [
    [-4, -3],
    [2, 3],
  ];
  if (state.invertedRegion) {
    const clipped = state.invertedRegion.boundary.filter(
      ([x, y]) => Math.hypot(x, y) < 6,
    );
    pts.push(...clipped);
  }
  return pts;
}

function parseCoeffs(text: string): number[] {
  return text
    .split(/[\s,]+/)
    .filter((t) => t.length)
    .map(Number)
    .filter((v) => Number.isFinite(v));
}

async function preview(): Promise<void> {
  if (!state.session) return;
  const horizon = 30;
  $("sim-status").textContent = "running…";
  try {
    const [reset, lti] = await Promise.all([
      api.simulate(state.session, state.kp, state.kr, horizon, "reset"),
      api.simulate(state.session, state.kp, state.kr, horizon, "lti"),
    ]);
    state = { ...state, lastTraces: { reset, lti } };
    plotTraces(simCanvas, [
      { data: reset, style: { color: "#4ea1ff", label: "reset" } },
      { data: lti, style: { color: "#ff9f5a", label: "reset-free" } },
    ]);
    $("sim-status").textContent = reset.diverged || lti.diverged ? "diverged" : "done";
  } catch (err) {
    $("sim-status").textContent = err instanceof Error ? err.message : String(err);
  }
}

function wire(): void {
  for (const control of ["kp", "kr", "gammaHat"] as const) {
    const input = $<HTMLInputElement>(control);
    const range = SLIDERS[control];
    input.min = String(range.min);
    input.max = String(range.max);
    input.step = String(range.step);
    input.value = String(state[control]);
    $(`${control}-readout`).textContent = String(state[control]);
    input.addEventListener("input", () => onSlider(control, Number(input.value)));
  }
  $("load").addEventListener("click", () => void loadPlant());
  $("preview").addEventListener("click", () => void preview());
  $<HTMLInputElement>("ghosts").addEventListener("change", (e) => {
    state = {
      ...state,
      overlays: { ...state.overlays, tauGhosts: (e.target as HTMLInputElement).checked },
    };
    redraw();
  });

  let dragging = false;
  let last: [number, number] = [0, 0];
  canvas.addEventListener("mousedown", (e) => {
    dragging = true;
    last = [e.offsetX, e.offsetY];
  });
  window.addEventListener("mouseup", () => (dragging = false));
  canvas.addEventListener("mousemove", (e) => {
    if (!dragging || !viewport) return;
    viewport = pan(viewport, e.offsetX - last[0], e.offsetY - last[1]);
    last = [e.offsetX, e.offsetY];
    redraw();
  });
  canvas.addEventListener("wheel", (e) => {
    if (!viewport) return;
    e.preventDefault();
    viewport = zoom(viewport, e.deltaY > 0 ? 1.1 : 1 / 1.1, e.offsetX, e.offsetY);
    redraw();
  });
}

wire();
redraw();
