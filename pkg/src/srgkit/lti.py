"""Real-rational SISO transfer functions and their scaled-graph geometry.

Provides evaluation, pole finding, Nyquist contours on the clockwise
D-contour (with indentation around imaginary-axis poles), winding numbers,
the winding-extended scaled graph (hull of the Nyquist image plus the set
of points whose clockwise winding count exceeds minus the unstable pole
count), its Moebius inverse, and a controllable-canonical state-space
realization.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .complex_sets import (
    BOUNDARY_SAMPLES,
    Region,
    Sampled,
    convex_hull_2d,
    hull_boundary_arcs,
    lift,
)

__all__ = [
    "TransferFunction",
    "NyquistContour",
    "ExtendedSRG",
    "PlantSrg",
    "EvaluationAtPoleError",
    "PointOnContourError",
    "UndersampledContourError",
    "evaluate",
    "poles",
    "zeros",
    "rhp_pole_count",
    "nyquist_contour",
    "winding_number",
    "winding_numbers",
    "extended_srg",
    "inverted_extended_srg",
    "to_state_space",
    "get_plant_srg",
]

DEFAULT_SAMPLES = 4096
INDENT_RADIUS = 1e-4
RESIDUE_LIMIT = 0.1
ON_CONTOUR_TOL = 1e-9
WINDING_GRID = 128


class EvaluationAtPoleError(ZeroDivisionError):
    pass


class PointOnContourError(ValueError):
    pass


class UndersampledContourError(RuntimeError):
    pass


@dataclass(frozen=True)
class TransferFunction:
    """Proper real-rational SISO transfer function, coefficients in
    descending powers of s."""

    num: tuple
    den: tuple

    def __init__(self, num, den):
        num = _strip(num)
        den = tuple(float(c) for c in den)
        if not den or any(not math.isfinite(c) for c in den):
            raise ValueError("denominator coefficients must be finite and nonempty")
        if den[0] == 0.0:
            raise ValueError("denominator leading coefficient must be nonzero")
        if len(num) > len(den):
            raise ValueError("transfer function must be proper (deg num <= deg den)")
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @property
    def order(self):
        return len(self.den) - 1

    def __call__(self, s):
        return evaluate(self, s)

    def to_dict(self):
        return {"num": list(self.num), "den": list(self.den)}

    @classmethod
    def from_dict(cls, doc):
        try:
            num = [float(c) for c in doc["num"]]
            den = [float(c) for c in doc["den"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed transfer function document: {exc}") from exc
        return cls(num, den)

    def __repr__(self):
        return f"TransferFunction(num={list(self.num)}, den={list(self.den)})"


def _strip(coeffs):
    vals = [float(c) for c in coeffs]
    if any(not math.isfinite(v) for v in vals):
        raise ValueError("coefficients must be finite")
    while vals and vals[0] == 0.0:
        vals.pop(0)
    return tuple(vals)


def evaluate(G, s):
    """Rational evaluation num(s)/den(s) by Horner's scheme."""
    s = np.asarray(s, dtype=complex)
    n = np.polyval(G.num, s) if G.num else np.zeros_like(s)
    d = np.polyval(G.den, s)
    scale = np.abs(np.asarray(G.den)).max()
    bad = np.abs(d) <= 1e-14 * max(scale, 1.0) * np.maximum(np.abs(s), 1.0) ** (
        len(G.den) - 1
    )
    if np.any(bad):
        raise EvaluationAtPoleError(f"evaluation at pole: s={s[bad] if s.ndim else s}")
    out = n / d
    return complex(out) if out.ndim == 0 else out


def _newton_polish(roots, coeffs):
    p = np.asarray(coeffs, dtype=complex)
    dp = np.polyder(p)
    val = np.polyval(p, roots)
    der = np.polyval(dp, roots)
    safe = np.abs(der) > 1e-300
    step = np.zeros_like(roots)
    step[safe] = val[safe] / der[safe]
    polished = roots - step
    worse = np.abs(np.polyval(p, polished)) > np.abs(val)
    polished[worse] = roots[worse]
    return polished


def poles(G):
    """Denominator roots via companion-matrix eigenvalues, Newton-polished."""
    if len(G.den) <= 1:
        return np.empty(0, dtype=complex)
    r = np.roots(G.den).astype(complex)
    return _newton_polish(r, G.den)


def zeros(G):
    if len(G.num) <= 1:
        return np.empty(0, dtype=complex)
    r = np.roots(G.num).astype(complex)
    return _newton_polish(r, G.num)


def rhp_pole_count(G, tol=1e-9):
    """Number of poles with strictly positive real part."""
    p = poles(G)
    return int(np.sum(p.real > tol))


@dataclass
class NyquistContour:
    """Image of the clockwise D-contour.

    ``samples`` are the image points, ``frequencies`` the matching s-plane
    contour points, ``indentations`` the imaginary-axis pole locations that
    were detoured into the right half-plane.
    """

    samples: np.ndarray
    frequencies: np.ndarray
    indentations: list

    def __post_init__(self):
        self.samples = np.ascontiguousarray(self.samples, dtype=np.complex128)
        self.frequencies = np.ascontiguousarray(self.frequencies, dtype=np.complex128)

    def __len__(self):
        return len(self.samples)

    def to_dict(self):
        return {
            "samples": [[float(z.real), float(z.imag)] for z in self.samples],
            "indentations": [[float(p.real), float(p.imag)] for p in self.indentations],
        }


def _auto_omega_max(G, start=1e4, cap=1e8):
    wm = start
    probe = np.logspace(-2, 2, 64)
    peak = np.abs(evaluate(G, 1j * probe)).max()
    strictly_proper = len(G.num) < len(G.den)
    while strictly_proper and wm < cap:
        if abs(evaluate(G, 1j * wm)) < 1e-6 * max(peak, 1e-12):
            break
        wm *= 10.0
    return wm


def _positive_grid(G, omega_max, n):
    half = max(n // 2, 512)
    w = np.logspace(-4, np.log10(omega_max), half)
    imag_poles = [p for p in poles(G) if abs(p.real) <= 1e-9 and abs(p.imag) > 1e-9]
    keep = np.ones(len(w), dtype=bool)
    for p in imag_poles:
        keep &= np.abs(w - abs(p.imag)) > INDENT_RADIUS
    return np.sort(w[keep]), imag_poles


def nyquist_contour(G, omega_max=None, n=DEFAULT_SAMPLES, extra_omegas=None):
    """Clockwise D-contour image with log-dense sampling near omega = 0.

    Semicircular indentations of radius 1e-4 detour into the right
    half-plane around imaginary-axis poles; the infinite arc is closed
    through the image of ``|s| = omega_max``.
    """
    if len(G.num) > len(G.den):
        raise ValueError("improper transfer function")
    if omega_max is None:
        omega_max = _auto_omega_max(G)
    w, imag_poles = _positive_grid(G, omega_max, n)
    if extra_omegas is not None and len(extra_omegas):
        extra = np.asarray(extra_omegas, dtype=float)
        extra = extra[(extra > 0) & (extra < omega_max)]
        for p in imag_poles:
            extra = extra[np.abs(extra - abs(p.imag)) > INDENT_RADIUS]
        w = np.unique(np.concatenate([w, extra]))

    pole_at_zero = any(abs(p) <= 1e-9 for p in poles(G))
    s_up = [1j * w]
    if not pole_at_zero:
        s_up.insert(0, np.array([0j]))
    else:
        # quarter indentation from the origin into Re > 0
        th = np.linspace(0.0, np.pi / 2, 64)
        s_up.insert(0, INDENT_RADIUS * np.exp(1j * (np.pi / 2 - th))[::-1])
    # full indentations around jw poles with w > 0
    s_pos = np.concatenate(s_up)
    for p in sorted(imag_poles, key=lambda q: abs(q.imag)):
        wp = abs(p.imag)
        th = np.linspace(-np.pi / 2, np.pi / 2, 128)
        arc = 1j * wp + INDENT_RADIUS * np.exp(1j * th)
        idx = np.searchsorted(s_pos.imag, wp)
        s_pos = np.concatenate([s_pos[:idx], arc, s_pos[idx:]])

    # mirror for the negative-frequency leg (conjugate symmetry by construction)
    s_neg = np.conj(s_pos[::-1])
    if not pole_at_zero:
        s_neg = s_neg[:-1]  # drop duplicate origin sample
    th_arc = np.linspace(np.pi / 2, -np.pi / 2, 128)
    s_arc = omega_max * np.exp(1j * th_arc)
    s_all = np.concatenate([s_neg, s_pos, s_arc, s_neg[:1]])
    z = evaluate(G, s_all)
    indents = [1j * abs(p.imag) * np.sign(p.imag) for p in imag_poles]
    indents += [0j] if pole_at_zero else []
    return NyquistContour(z, s_all, indents)


def winding_numbers(contour, points):
    """Clockwise winding counts for an array of probe points."""
    samples = contour.samples if isinstance(contour, NyquistContour) else np.asarray(
        contour, dtype=complex
    )
    if abs(samples[0] - samples[-1]) > 0:
        samples = np.append(samples, samples[0])
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    gap = np.abs(pts[:, None] - samples[None, :: max(len(samples) // 2048, 1)]).min(axis=1)
    if np.any(gap < ON_CONTOUR_TOL):
        raise PointOnContourError("probe point lies on the contour")
    counts, residues = _kernels.winding_batch(samples, pts)
    if np.any(residues > RESIDUE_LIMIT):
        raise UndersampledContourError(
            f"winding residue {residues.max():.3f} exceeds {RESIDUE_LIMIT}; refine the contour"
        )
    return counts


def winding_number(contour, z):
    """Clockwise winding count of a closed contour around one point."""
    return int(winding_numbers(contour, np.array([z]))[0])


@dataclass
class ExtendedSRG:
    """Hull of the Nyquist image plus the winding-qualified point set."""

    hull: Region
    encircled: Region
    n_p: int

    def to_dict(self):
        return {
            "hull": self.hull.to_dict(),
            "encircled": self.encircled.to_dict(),
            "n_p": self.n_p,
        }


# ---------------------------------------------------------------------------
# the cached per-plant geometry engine


class PlantSrg:
    """Cached scaled-graph geometry of one plant.

    Builds the Nyquist contour (with gap-driven refinement of the inverted
    image), the lift-space hull polygon, and exposes membership tests and
    the inverse boundary decomposition used for separation distances.
    """

    def __init__(self, G, omega_max=None, samples=DEFAULT_SAMPLES, refine_rounds=3,
                 work_clip=60.0):
        self.G = G
        self.samples_requested = samples
        self.work_clip = float(work_clip)
        self.n_p = rhp_pole_count(G)
        contour = nyquist_contour(G, omega_max, samples)
        extra = np.empty(0)
        for _ in range(refine_rounds):
            new = self._refinement_omegas(contour)
            if new.size == 0:
                break
            extra = np.unique(np.concatenate([extra, new]))
            contour = nyquist_contour(G, omega_max, samples, extra_omegas=extra)
        self.contour = contour
        self._decimated = self._decimate(contour.samples)
        self.far_radius = 2.0 * float(np.abs(contour.samples).max()) + 1.0
        lifted = lift(contour.samples)
        self.hull_poly = convex_hull_2d(lifted)
        self._hull_curve = hull_boundary_arcs(self.hull_poly, BOUNDARY_SAMPLES)
        self._encircled_cache = {}
        self._inverted_cache = {}
        # wedge-indexed arrays for the O(log k) point-in-hull test
        hp = self.hull_poly
        if len(hp) >= 3:
            c = hp.mean(axis=0)
            ang = np.arctan2(hp[:, 1] - c[1], hp[:, 0] - c[0])
            order = np.argsort(ang)
            self._hull_c = c
            self._hull_v = hp[order]
            self._hull_ang = ang[order]
            self._hull_scale = max(float(np.abs(hp).max()), 1.0)
        else:
            self._hull_c = None
            self._hull_scale = 1.0

    # -- construction helpers -------------------------------------------------

    def _refinement_omegas(self, contour):
        """Frequencies to insert where the inverted image has large gaps."""
        s = contour.frequencies
        z = contour.samples
        on_axis = (np.abs(s.real) < 1e-12) & (s.imag > 0)
        w_im = s.imag[on_axis]
        zz = z[on_axis]
        if len(zz) < 4:
            return np.empty(0)
        order = np.argsort(w_im)
        w_im, zz = w_im[order], zz[order]
        mask = np.abs(zz) > 1.0 / (10.0 * self.work_clip)
        inv = np.where(mask, 1.0 / np.conj(np.where(mask, zz, 1.0)), np.nan)
        within = np.abs(inv) <= self.work_clip
        gaps = np.abs(np.diff(inv))
        both = within[:-1] & within[1:]
        target = self.work_clip / 400.0
        need = both & (gaps > target)
        # also keep the direct image well resolved for the hull
        zgaps = np.abs(np.diff(zz))
        need |= zgaps > max(np.abs(zz).max() / 400.0, 1e-12)
        if not need.any():
            return np.empty(0)
        mids = np.sqrt(w_im[:-1][need] * w_im[1:][need])
        return mids[np.isfinite(mids)]

    @staticmethod
    def _decimate(samples, target=3000):
        if len(samples) <= target:
            pts = samples
        else:
            stride = int(np.ceil(len(samples) / target))
            pts = samples[::stride]
        if abs(pts[0] - pts[-1]) > 0:
            pts = np.append(pts, pts[0])
        return np.ascontiguousarray(pts, dtype=np.complex128)

    # -- membership ------------------------------------------------------------

    def hull_contains(self, points, slack=1e-12):
        """Exact hull membership through the lift polygon.

        Convex polygon test by wedge lookup: O(log k) per point.
        """
        P = lift(points)
        hull = self.hull_poly
        if len(hull) == 1:
            return (np.abs(P[:, 0] - hull[0, 0]) <= 1e-9) & (
                np.abs(P[:, 1] - hull[0, 1]) <= 1e-9
            )
        if len(hull) == 2:
            a, b = hull
            d = b - a
            t = ((P - a) @ d) / float(d @ d)
            proj = a + np.clip(t, 0.0, 1.0)[:, None] * d
            return np.hypot(*(P - proj).T) <= 1e-9
        c = self._hull_c
        V = self._hull_v
        theta = np.arctan2(P[:, 1] - c[1], P[:, 0] - c[0])
        j = np.searchsorted(self._hull_ang, theta) - 1
        j %= len(V)
        a = V[j]
        b = V[(j + 1) % len(V)]
        cross = (b[:, 0] - a[:, 0]) * (P[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (
            P[:, 0] - a[:, 0]
        )
        return cross >= -slack * self._hull_scale**2

    def contains(self, points):
        """Membership in the winding-extended scaled graph.

        Probes with an ambiguous winding sum sit on or next to the contour
        itself; they count as members (the conservative direction: reported
        separations can only shrink).
        """
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        out = self.hull_contains(pts)
        rest = ~out
        if rest.any():
            probe = pts[rest]
            counts, residues = _kernels.winding_batch(self._decimated, probe)
            on_curve = residues > RESIDUE_LIMIT
            qualifies = on_curve | (counts + self.n_p > 0)
            out[np.flatnonzero(rest)[qualifies]] = True
        return out

    def inverse_contains(self, points):
        """Membership in the Moebius inverse of the extended graph."""
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        out = np.zeros(len(pts), dtype=bool)
        tiny = np.abs(pts) < 1.0 / self.far_radius
        out[tiny] = self.n_p > 0  # far field belongs to the graph iff n_p > 0
        rest = ~tiny
        if rest.any():
            out[rest] = self.contains(1.0 / np.conj(pts[rest]))
        return out

    # -- boundary decomposition ------------------------------------------------

    def boundary_polylines(self):
        """Boundary candidates of the extended graph: contour + hull arcs."""
        return [self.contour.samples, self._hull_curve, np.conj(self._hull_curve)]

    def inverse_boundary_polylines(self, clip=None):
        """Inverted boundary candidates, split and clipped to |w| <= clip."""
        clip = self.work_clip if clip is None else float(clip)
        out = []
        for poly in self.boundary_polylines():
            out.extend(_invert_and_clip(poly, clip))
        if self.n_p > 0:
            th = np.linspace(0.0, 2.0 * np.pi, 256)
            out.append(np.exp(1j * th) / self.far_radius)
        return out

    def inverted_region(self, clip=None):
        """The inverse graph as a sampled region with an exact oracle."""
        key = self.work_clip if clip is None else float(clip)
        cached = self._inverted_cache.get(key)
        if cached is None:
            loops = self.inverse_boundary_polylines(clip)
            cached = Sampled(
                loops,
                unbounded=bool(self.contains(np.array([0j]))[0]),
                conjugate_closed=True,
                oracle=self.inverse_contains,
            )
            self._inverted_cache[key] = cached
        return cached

    # -- exported regions -------------------------------------------------------

    def hull_region(self):
        if len(self.hull_poly) <= 2:
            curve = self._hull_curve
            loop = np.concatenate([curve, np.conj(curve)[::-1]])
            return Sampled([loop], conjugate_closed=True)
        return Sampled(
            [self._hull_curve, np.conj(self._hull_curve)[::-1]], conjugate_closed=True
        )

    def encircled_region(self, grid=WINDING_GRID):
        """Sampled region of points whose winding count plus n_p is positive."""
        if grid in self._encircled_cache:
            return self._encircled_cache[grid]
        z = self.contour.samples
        margin = 0.1 * max(np.ptp(z.real), np.ptp(z.imag), 1e-6)
        xs = np.linspace(z.real.min() - margin, z.real.max() + margin, grid)
        ys = np.linspace(z.imag.min() - margin, z.imag.max() + margin, grid)
        X, Y = np.meshgrid(xs, ys)
        probes = (X + 1j * Y).ravel()
        near = np.abs(probes[:, None] - self._decimated[None, ::4]).min(axis=1) < 2.0 * (
            xs[1] - xs[0]
        )
        counts = np.zeros(probes.shape, dtype=np.int64)
        counts[~near], _ = _kernels.winding_batch(self._decimated, probes[~near])
        if near.any():
            cnear, res = _kernels.winding_batch(self.contour.samples, probes[near])
            # probes sitting on the curve get an ambiguous count; snap to inside
            cnear[res > RESIDUE_LIMIT] = 1 - self.n_p
            counts[near] = cnear
        mask = (counts + self.n_p > 0).reshape(grid, grid)
        loops = _mask_loops(xs, ys, mask)
        region = Sampled(loops, unbounded=self.n_p > 0, conjugate_closed=True)
        self._encircled_cache[grid] = region
        return region

    def extended(self, grid=WINDING_GRID):
        return ExtendedSRG(self.hull_region(), self.encircled_region(grid), self.n_p)


def _invert_and_clip(poly, clip):
    """Vertex-wise inversion of a polyline, split where it leaves |w| <= clip."""
    finite = np.abs(poly) > 1.0 / (50.0 * clip)
    w = np.full(poly.shape, np.nan + 0j)
    w[finite] = 1.0 / np.conj(poly[finite])
    w[np.abs(w) > clip] = np.nan
    out = []
    start = None
    for i, ok in enumerate(np.isfinite(w.real)):
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            if i - start >= 2:
                out.append(w[start:i])
            start = None
    if start is not None and len(w) - start >= 2:
        out.append(w[start:])
    return out


def _mask_loops(xs, ys, mask):
    """Marching-squares boundary loops of a boolean grid mask."""
    ny, nx = mask.shape
    padded = np.zeros((ny + 2, nx + 2), dtype=bool)
    padded[1:-1, 1:-1] = mask
    dx = xs[1] - xs[0] if len(xs) > 1 else 1.0
    dy = ys[1] - ys[0] if len(ys) > 1 else 1.0
    x0 = xs[0] - dx
    y0 = ys[0] - dy

    # horizontal/vertical half-grid edge points between cell corners
    segs = {}

    def addseg(a, b):
        segs.setdefault(a, []).append(b)

    for j in range(padded.shape[0] - 1):
        for i in range(padded.shape[1] - 1):
            idx = (
                (1 if padded[j, i] else 0)
                | (2 if padded[j, i + 1] else 0)
                | (4 if padded[j + 1, i + 1] else 0)
                | (8 if padded[j + 1, i] else 0)
            )
            if idx in (0, 15):
                continue
            top = (i + 0.5, j)
            bottom = (i + 0.5, j + 1)
            left = (i, j + 0.5)
            right = (i + 1, j + 0.5)
            table = {
                1: [(left, top)],
                2: [(top, right)],
                3: [(left, right)],
                4: [(right, bottom)],
                5: [(left, top), (right, bottom)],
                6: [(top, bottom)],
                7: [(left, bottom)],
                8: [(bottom, left)],
                9: [(bottom, top)],
                10: [(top, left), (bottom, right)],
                11: [(bottom, right)],
                12: [(right, left)],
                13: [(right, top)],
                14: [(top, left)],
            }
            for a, b in table[idx]:
                addseg(a, b)

    loops = []
    while segs:
        start = next(iter(segs))
        chain = [start]
        cur = start
        while True:
            nxts = segs.get(cur)
            if not nxts:
                break
            nxt = nxts.pop()
            if not nxts:
                del segs[cur]
            chain.append(nxt)
            cur = nxt
            if cur == start:
                break
        if len(chain) >= 4:
            pts = np.array([complex(x0 + (c[0]) * dx, y0 + (c[1]) * dy) for c in chain])
            loops.append(pts)
    return loops


@functools.lru_cache(maxsize=16)
def _cached_srg(num, den, omega_max, samples):
    return PlantSrg(TransferFunction(num, den), omega_max, samples)


def get_plant_srg(G, omega_max=None, samples=DEFAULT_SAMPLES):
    """Per-plant geometry cache keyed by coefficients and grid settings."""
    return _cached_srg(G.num, G.den, omega_max, samples)


def extended_srg(G, omega_max=None, samples=DEFAULT_SAMPLES, grid=WINDING_GRID):
    """Hull plus winding-qualified set of a plant's Nyquist image."""
    return get_plant_srg(G, omega_max, samples).extended(grid)


def inverted_extended_srg(G, omega_max=None, samples=DEFAULT_SAMPLES, clip=None):
    """Moebius inverse of the extended graph as a sampled region."""
    return get_plant_srg(G, omega_max, samples).inverted_region(clip)


# ---------------------------------------------------------------------------
# realization


def to_state_space(G):
    """Controllable canonical realization (A, B, C, D)."""
    if len(G.num) > len(G.den):
        raise ValueError("improper transfer function")
    den = np.asarray(G.den, dtype=float)
    num = np.asarray(G.num, dtype=float) if G.num else np.zeros(1)
    num = num / den[0]
    den = den / den[0]
    n = len(den) - 1
    num = np.concatenate([np.zeros(n + 1 - len(num)), num])
    D = num[0]
    rem = num[1:] - D * den[1:]
    A = np.zeros((n, n))
    if n:
        A[0, :] = -den[1:]
        if n > 1:
            A[1:, :-1] = np.eye(n - 1)
    B = np.zeros(n)
    if n:
        B[0] = 1.0
    C = rem
    return A, B, C, float(D)
