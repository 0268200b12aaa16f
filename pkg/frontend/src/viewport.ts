// Complex-plane viewport with a strictly equal-scale mapping: distances
// are visual information here, so the aspect ratio is never distorted.

export interface Viewport {
  centerX: number;
  centerY: number;
  /** world units per pixel, identical for both axes */
  scale: number;
  width: number;
  height: number;
}

export function fitViewport(
  points: [number, number][],
  width: number,
  height: number,
  margin = 0.1,
): Viewport {
  let xmin = -1, xmax = 1, ymin = -1, ymax = 1;
  if (points.length) {
    xmin = Math.min(...points.map((p) => p[0]));
    xmax = Math.max(...points.map((p) => p[0]));
    ymin = Math.min(...points.map((p) => p[1]));
    ymax = Math.max(...points.map((p) => p[1]));
  }
  const spanX = Math.max(xmax - xmin, 1e-6);
  const spanY = Math.max(ymax - ymin, 1e-6);
  const scale = Math.max(
    (spanX * (1 + 2 * margin)) / width,
    (spanY * (1 + 2 * margin)) / height,
  );
  return {
    centerX: (xmin + xmax) / 2,
    centerY: (ymin + ymax) / 2,
    scale,
    width,
    height,
  };
}

export function toScreen(vp: Viewport, x: number, y: number): [number, number] {
  return [
    vp.width / 2 + (x - vp.centerX) / vp.scale,
    vp.height / 2 - (y - vp.centerY) / vp.scale,
  ];
}

export function toWorld(vp: Viewport, px: number, py: number): [number, number] {
  return [
    vp.centerX + (px - vp.width / 2) * vp.scale,
    vp.centerY - (py - vp.height / 2) * vp.scale,
  ];
}

export function pan(vp: Viewport, dxPx: number, dyPx: number): Viewport {
  return {
    ...vp,
    centerX: vp.centerX - dxPx * vp.scale,
    centerY: vp.centerY + dyPx * vp.scale,
  };
}

/** Zoom about a screen anchor; the anchored world point stays put. */
export function zoom(vp: Viewport, factor: number, px: number, py: number): Viewport {
  const [wx, wy] = toWorld(vp, px, py);
  const scale = vp.scale * factor;
  return {
    ...vp,
    scale,
    centerX: wx - (px - vp.width / 2) * scale,
    centerY: wy + (py - vp.height / 2) * scale,
  };
}

/** Equal-scale invariant: world distances map isotropically to pixels. */
export function pixelsPerUnit(vp: Viewport): number {
  return 1 / vp.scale;
}
