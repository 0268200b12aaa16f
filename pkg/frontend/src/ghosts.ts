// Scaled ghost outlines of the controller region about its anchor point:
// kappa + tau * (z - kappa) for a few tau values. A pure affine transform
// of the polyline the service already sent; no geometry is recomputed.

export const GHOST_TAUS = [0.25, 0.5, 0.75];

export function ghostOutline(
  boundary: [number, number][],
  kappa: [number, number],
  tau: number,
): [number, number][] {
  const [kx, ky] = kappa;
  return boundary.map(([x, y]) => [kx + tau * (x - kx), ky + tau * (y - ky)]);
}

export function ghostFamily(
  boundary: [number, number][],
  kappa: [number, number],
  taus: number[] = GHOST_TAUS,
): [number, number][][] {
  return taus.map((tau) => ghostOutline(boundary, kappa, tau));
}
