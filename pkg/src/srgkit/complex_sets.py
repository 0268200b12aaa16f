"""Geometry of conjugate-symmetric sets in the extended complex plane.

Regions come in four kinds: discs centered on the real axis, unions of a
right and a left half-disc, affine (real translate + real scale) images of
a base region, and sampled regions stored as closed boundary loops.  All
sets handled here are symmetric about the real axis.

The scaled-graph calculus acts on these regions: real scaling, real
translation, Moebius inversion ``r e^{j phi} -> (1/r) e^{j phi}``, set
distance, containing-disc radius, star-shape and chord-property predicates,
and the hull of a point set under arcs of circles centered on the real
axis.  That hull is computed exactly through the parabola lift
``z -> (Re z, |z|^2)``, which maps such arcs (within one closed half-plane)
to straight segments, so the hull reduces to a planar convex hull.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "INFINITY",
    "GEOM_TOL",
    "BOUNDARY_SAMPLES",
    "Region",
    "Disc",
    "HalfDiscUnion",
    "TranslatedScaled",
    "Sampled",
    "EmptyRegionError",
    "scale_region",
    "translate_region",
    "mobius_invert",
    "mobius_invert_point",
    "region_distance",
    "region_radius",
    "region_contains",
    "is_star_shaped_about",
    "has_chord_property",
    "h_convex_hull",
    "region_from_dict",
]

INFINITY = complex(math.inf, math.inf)
GEOM_TOL = 1e-9
BOUNDARY_SAMPLES = 2048
STAR_TAU_GRID = np.linspace(0.1, 1.0, 10)
STAR_BOUNDARY_SAMPLES = 512


def is_infinite(z) -> bool:
    return not (math.isfinite(z.real) and math.isfinite(z.imag))


class EmptyRegionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# region kinds


class Region:
    kind = "abstract"

    def to_dict(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__}>"


@dataclass(frozen=True)
class Disc(Region):
    """Closed disc; the center must lie on the real axis."""

    center: float
    radius: float
    kind = "disc"

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("disc radius must be nonnegative")
        if not math.isfinite(self.center) or not math.isfinite(self.radius):
            raise ValueError("disc parameters must be finite")

    def to_dict(self, samples=BOUNDARY_SAMPLES):
        return {
            "kind": "disc",
            "center": [self.center, 0.0],
            "radius": self.radius,
            "boundary": _poly_export(_boundary_points(self, samples)),
        }


@dataclass(frozen=True)
class HalfDiscUnion(Region):
    """Union of a right half-disc (Re >= 0) and a left half-disc (Re <= 0)."""

    r_right: float
    r_left: float
    kind = "half_disc_union"

    def __post_init__(self):
        if self.r_right < 0 or self.r_left < 0:
            raise ValueError("half-disc radii must be nonnegative")

    def to_dict(self, samples=BOUNDARY_SAMPLES):
        return {
            "kind": "half_disc_union",
            "r_right": self.r_right,
            "r_left": self.r_left,
            "boundary": _poly_export(_boundary_points(self, samples)),
        }


@dataclass(frozen=True)
class TranslatedScaled(Region):
    """Affine image ``{factor * z + offset}`` of a base region, offset real."""

    base: Region
    offset: float
    factor: float
    kind = "translated_scaled"

    def __post_init__(self):
        if self.factor == 0:
            raise ValueError("scale factor must be nonzero")
        if not math.isfinite(self.offset) or not math.isfinite(self.factor):
            raise ValueError("affine parameters must be finite")

    def to_dict(self, samples=BOUNDARY_SAMPLES):
        return {
            "kind": "translated_scaled",
            "offset": self.offset,
            "factor": self.factor,
            "base": self.base.to_dict(samples=64),
            "boundary": _poly_export(_boundary_points(self, samples)),
        }


class Sampled(Region):
    """Region stored as closed boundary loops with even-odd membership.

    ``unbounded`` marks sets that extend past the sampled window (their
    containing-disc radius is infinite).  An optional ``oracle`` callable
    overrides the even-odd membership test; it is attached by producers
    that know the exact set (and is not preserved by serialization).
    """

    kind = "sampled"

    def __init__(self, loops, unbounded=False, conjugate_closed=True, oracle=None):
        self.loops = tuple(np.ascontiguousarray(l, dtype=np.complex128) for l in loops)
        self.unbounded = bool(unbounded)
        self.conjugate_closed = bool(conjugate_closed)
        self.oracle = oracle
        self._all_points = None
        self._reps = None

    @property
    def is_empty(self):
        return len(self.loops) == 0 and not self.unbounded

    def all_points(self):
        if self._all_points is None:
            if not self.loops:
                self._all_points = np.empty(0, dtype=np.complex128)
            else:
                self._all_points = np.concatenate(self.loops)
        return self._all_points

    def to_dict(self, samples=None):
        pts = self.all_points()
        return {
            "kind": "sampled",
            "boundary": _poly_export(pts),
            "loops": [int(len(l)) for l in self.loops],
            "unbounded": self.unbounded,
            "conjugate_closed": self.conjugate_closed,
        }

    def __repr__(self):
        n = sum(len(l) for l in self.loops)
        return f"<Sampled {len(self.loops)} loops, {n} pts, unbounded={self.unbounded}>"


def _poly_export(points):
    return [[float(z.real), float(z.imag)] for z in points]


def region_from_dict(doc):
    kind = doc.get("kind")
    if kind == "disc":
        return Disc(float(doc["center"][0]), float(doc["radius"]))
    if kind == "half_disc_union":
        return HalfDiscUnion(float(doc["r_right"]), float(doc["r_left"]))
    if kind == "translated_scaled":
        return TranslatedScaled(
            region_from_dict(doc["base"]), float(doc["offset"]), float(doc["factor"])
        )
    if kind == "sampled":
        pts = np.array([complex(p[0], p[1]) for p in doc["boundary"]], dtype=complex)
        lens = doc.get("loops") or [len(pts)]
        loops, at = [], 0
        for m in lens:
            loops.append(pts[at : at + m])
            at += m
        return Sampled(
            loops,
            unbounded=doc.get("unbounded", False),
            conjugate_closed=doc.get("conjugate_closed", True),
        )
    raise ValueError(f"unknown region kind {kind!r}")


# ---------------------------------------------------------------------------
# normal form: every region reduces to a disc, an affine half-disc union
# (radii already scaled, factor folded to +-1 via a swap) or a sampled set


def _reduce(region):
    if isinstance(region, Disc):
        return ("disc", region.center, region.radius)
    if isinstance(region, HalfDiscUnion):
        return ("hdu", region.r_right, region.r_left, 0.0)
    if isinstance(region, TranslatedScaled):
        inner = _reduce(region.base)
        f, t = region.factor, region.offset
        if inner[0] == "disc":
            _, c, r = inner
            return ("disc", f * c + t, abs(f) * r)
        if inner[0] == "hdu":
            _, rr, rl, off = inner
            rr, rl = abs(f) * rr, abs(f) * rl
            if f < 0:
                rr, rl = rl, rr
            return ("hdu", rr, rl, f * off + t)
        # sampled base: materialize pointwise
        base = inner[1]
        loops = [f * l + t for l in base.loops]
        return ("sampled", Sampled(loops, base.unbounded, base.conjugate_closed))
    if isinstance(region, Sampled):
        return ("sampled", region)
    raise TypeError(f"not a region: {region!r}")


# ---------------------------------------------------------------------------
# boundary sampling


def _boundary_points(region, n=BOUNDARY_SAMPLES):
    form = _reduce(region)
    if form[0] == "disc":
        _, c, r = form
        th = np.linspace(0.0, 2.0 * np.pi, max(n, 16), endpoint=False)
        return c + r * np.exp(1j * th)
    if form[0] == "hdu":
        _, rr, rl, off = form
        return _hdu_boundary(rr, rl, off, n)
    sampled = form[1]
    return sampled.all_points()


def _hdu_boundary(rr, rl, off, n):
    parts = []
    m = max(n // 4, 16)
    if rr > 0:
        th = np.linspace(-np.pi / 2, np.pi / 2, 2 * m)
        parts.append(rr * np.exp(1j * th))
    if rl > 0:
        th = np.linspace(np.pi / 2, 3 * np.pi / 2, 2 * m)
        parts.append(rl * np.exp(1j * th))
    hi, lo = max(rr, rl), min(rr, rl)
    if hi > lo:  # exposed pieces of the larger diameter edge
        seg = np.linspace(lo, hi, m)
        parts.append(1j * seg)
        parts.append(-1j * seg)
    if not parts:
        parts.append(np.zeros(1, dtype=complex))
    return np.concatenate(parts) + off


def _hdu_loop(rr, rl, off, n):
    """Single closed boundary loop of a half-disc union."""
    m = max(n // 4, 16)
    th_r = np.linspace(np.pi / 2, -np.pi / 2, 2 * m)
    th_l = np.linspace(-np.pi / 2, -3 * np.pi / 2, 2 * m)
    right = rr * np.exp(1j * th_r) if rr > 0 else np.array([0j])
    left = rl * np.exp(1j * th_l) if rl > 0 else np.array([0j])
    pieces = [right, np.array([-1j * rr, -1j * rl]), left, np.array([1j * rl, 1j * rr])]
    return np.concatenate(pieces) + off


# ---------------------------------------------------------------------------
# pointwise distance / membership for the parametric forms


def _pdist_disc(c, r, W):
    return np.maximum(np.abs(W - c) - r, 0.0)


def _pdist_half_disc(W, r, side):
    """Distance to one closed half-disc of radius r about the origin."""
    x = W.real * side
    y = W.imag
    d = np.empty_like(x)
    front = x >= 0.0
    d[front] = np.maximum(np.hypot(x[front], y[front]) - r, 0.0)
    xb, yb = x[~front], y[~front]
    d[~front] = np.hypot(xb, np.maximum(np.abs(yb) - r, 0.0))
    return d


def _pdist_hdu(rr, rl, off, W):
    Z = W - off
    return np.minimum(_pdist_half_disc(Z, rr, +1.0), _pdist_half_disc(Z, rl, -1.0))


def _pdist_loops(loops, W):
    """Raw distance to the boundary polylines, ignoring interiors."""
    out = np.full(W.shape, np.inf)
    for loop in loops:
        loop = loop[np.isfinite(loop.real) & np.isfinite(loop.imag)]
        if len(loop) == 0:
            continue
        if len(loop) == 1:
            out = np.minimum(out, np.abs(W - loop[0]))
            continue
        s0, s1 = loop[:-1], loop[1:]
        d = s1 - s0
        l2 = (d * np.conj(d)).real
        l2 = np.where(l2 > 0, l2, 1.0)
        for lo in range(0, W.shape[0], 256):
            p = W[lo : lo + 256, np.newaxis]
            t = np.clip(((p - s0) * np.conj(d)).real / l2, 0.0, 1.0)
            proj = s0 + t * d
            out[lo : lo + 256] = np.minimum(out[lo : lo + 256], np.abs(p - proj).min(axis=1))
    return out


def _form_pdist(form, W):
    W = np.atleast_1d(np.asarray(W, dtype=complex))
    if form[0] == "disc":
        return _pdist_disc(form[1], form[2], W)
    if form[0] == "hdu":
        return _pdist_hdu(form[1], form[2], form[3], W)
    sampled = form[1]
    out = _pdist_loops(sampled.loops, W)
    inside = _form_contains(form, W)
    out[inside] = 0.0
    return out


def _inside_loops(loops, W):
    """Even-odd (ray casting) membership over a family of closed loops."""
    W = np.atleast_1d(np.asarray(W, dtype=complex))
    inside = np.zeros(W.shape, dtype=bool)
    for loop in loops:
        if len(loop) < 3:
            continue
        x0, y0 = loop[:-1].real, loop[:-1].imag
        x1, y1 = loop[1:].real, loop[1:].imag
        if abs(loop[0] - loop[-1]) > 0:
            x0 = np.append(x0, loop[-1].real)
            y0 = np.append(y0, loop[-1].imag)
            x1 = np.append(x1, loop[0].real)
            y1 = np.append(y1, loop[0].imag)
        dy = y1 - y0
        dy = np.where(dy == 0.0, 1e-300, dy)
        for lo in range(0, W.shape[0], 256):
            px = W[lo : lo + 256].real[:, np.newaxis]
            py = W[lo : lo + 256].imag[:, np.newaxis]
            straddle = (y0 > py) != (y1 > py)
            xcross = x0 + (py - y0) * (x1 - x0) / dy
            hits = straddle & (px < xcross)
            inside[lo : lo + 256] ^= (hits.sum(axis=1) % 2).astype(bool)
    return inside


def _form_contains(form, W, tol=0.0):
    W = np.atleast_1d(np.asarray(W, dtype=complex))
    if form[0] == "disc":
        return np.abs(W - form[1]) <= form[2] + tol
    if form[0] == "hdu":
        return _pdist_hdu(form[1], form[2], form[3], W) <= tol
    sampled = form[1]
    if sampled.oracle is not None:
        inside = np.atleast_1d(np.asarray(sampled.oracle(W), dtype=bool))
    else:
        inside = _inside_loops(sampled.loops, W)
    if tol > 0.0 and not inside.all():
        inside = inside | (_pdist_loops(sampled.loops, W) <= tol)
    return inside


def region_contains(region, z, tol=0.0):
    """Set membership; ``z`` may be a scalar or an array."""
    form = _reduce(region)
    res = _form_contains(form, z, tol)
    if np.isscalar(z) or isinstance(z, complex):
        return bool(res[0])
    return res


def _contains_with_slack(form, W, slack):
    return _form_contains(form, W) | (_form_pdist(form, W) <= slack)


# ---------------------------------------------------------------------------
# calculus operations


def scale_region(region, alpha):
    """Image ``{alpha z}`` of a region; alpha must be a nonzero real."""
    alpha = float(alpha)
    if alpha == 0.0:
        raise ValueError("scale factor must be nonzero")
    if isinstance(region, Disc):
        return Disc(alpha * region.center, abs(alpha) * region.radius)
    if isinstance(region, HalfDiscUnion):
        rr, rl = abs(alpha) * region.r_right, abs(alpha) * region.r_left
        if alpha < 0:
            rr, rl = rl, rr
        return HalfDiscUnion(rr, rl)
    if isinstance(region, TranslatedScaled):
        return TranslatedScaled(region.base, alpha * region.offset, alpha * region.factor)
    if isinstance(region, Sampled):
        return Sampled(
            [alpha * l for l in region.loops], region.unbounded, region.conjugate_closed
        )
    raise TypeError(f"not a region: {region!r}")


def translate_region(region, c):
    """Image ``{z + c}`` of a region for real c."""
    c = float(c)
    if c == 0.0:
        return region
    if isinstance(region, Disc):
        return Disc(region.center + c, region.radius)
    if isinstance(region, HalfDiscUnion):
        return TranslatedScaled(region, c, 1.0)
    if isinstance(region, TranslatedScaled):
        return TranslatedScaled(region.base, region.offset + c, region.factor)
    if isinstance(region, Sampled):
        return Sampled([l + c for l in region.loops], region.unbounded, region.conjugate_closed)
    raise TypeError(f"not a region: {region!r}")


def mobius_invert_point(z):
    """Moebius inversion ``r e^{j phi} -> (1/r) e^{j phi}`` of one point."""
    if is_infinite(z):
        return 0j
    if z == 0:
        return INFINITY
    return 1.0 / np.conj(z)


def mobius_invert(region):
    """Pointwise Moebius inversion of a region.

    Real-centered discs away from the origin stay discs; discs containing
    the origin invert to the complement of a disc, returned as a sampled
    region flagged unbounded.  Sampled regions map vertex-wise.
    """
    form = _reduce(region)
    if form[0] == "disc":
        _, c, r = form
        a, b = c - r, c + r
        if a * b > GEOM_TOL:  # origin strictly outside
            ia, ib = 1.0 / b, 1.0 / a
            return Disc(0.5 * (ia + ib), 0.5 * abs(ib - ia))
        if abs(a) <= GEOM_TOL or abs(b) <= GEOM_TOL:
            # origin on the boundary: image is a closed half-plane
            q = 1.0 / b if abs(a) <= GEOM_TOL else 1.0 / a
            return _half_plane_region(q, right=abs(a) <= GEOM_TOL)
        # origin interior: complement of the open disc with intercepts (1/a, 1/b)
        ia, ib = 1.0 / a, 1.0 / b
        hole = Disc(0.5 * (ia + ib), 0.5 * abs(ib - ia))
        frame = 1e6 * np.exp(1j * np.linspace(0, 2 * np.pi, 256))
        frame[-1] = frame[0]
        return Sampled(
            [_close(_boundary_loop_of_disc(hole)), frame], unbounded=True
        )
    if form[0] == "hdu":
        loop = _hdu_loop(form[1], form[2], form[3], BOUNDARY_SAMPLES)
        base = Sampled([loop], unbounded=False)
        contains0 = bool(_form_contains(("sampled", base), np.array([0j]))[0])
        inv = _invert_loops(base.loops)
        return Sampled(inv, unbounded=contains0)
    sampled = form[1]
    contains0 = bool(_form_contains(form, np.array([0j]))[0])
    inv = _invert_loops(sampled.loops)
    return Sampled(
        inv, unbounded=contains0 or sampled.unbounded, conjugate_closed=sampled.conjugate_closed
    )


def _invert_loops(loops):
    out = []
    for loop in loops:
        w = np.empty_like(loop)
        tinies = np.abs(loop) < 1e-300
        w[~tinies] = 1.0 / np.conj(loop[~tinies])
        w[tinies] = INFINITY
        out.append(w)
    return out


def _boundary_loop_of_disc(disc):
    th = np.linspace(0.0, 2.0 * np.pi, BOUNDARY_SAMPLES // 4)
    return disc.center + disc.radius * np.exp(1j * th)


def _half_plane_region(q, right=True, extent=1e6):
    s = 1.0 if right else -1.0
    ys = np.linspace(-extent, extent, 64)
    edge = q + 1j * ys
    far = q + s * extent
    loop = np.concatenate(
        [edge, np.array([far + 1j * extent, far - 1j * extent]), edge[:1]]
    )
    if not right:
        loop = np.conj(loop)[::-1]
    return Sampled([loop], unbounded=True)


def _close(loop):
    if len(loop) and abs(loop[0] - loop[-1]) > 0:
        return np.append(loop, loop[0])
    return loop


# ---------------------------------------------------------------------------
# metrics


def region_radius(region):
    """Radius of the smallest origin-centered disc containing the region."""
    form = _reduce(region)
    if form[0] == "disc":
        return abs(form[1]) + form[2]
    if form[0] == "hdu":
        _, rr, rl, t = form
        if t >= 0:
            return max(t + rr, math.hypot(t, rl))
        return max(-t + rl, math.hypot(t, rr))
    sampled = form[1]
    if sampled.unbounded:
        return math.inf
    pts = sampled.all_points()
    if pts.size == 0:
        return 0.0
    finite = np.isfinite(pts.real) & np.isfinite(pts.imag)
    if not finite.all():
        return math.inf
    return float(np.abs(pts).max())


def _interior_representatives(form):
    if form[0] == "disc":
        return np.array([complex(form[1], 0.0)])
    if form[0] == "hdu":
        _, rr, rl, t = form
        reps = [complex(t, 0.0)]
        if rr > 0:
            reps.append(complex(t + 0.5 * rr, 0.0))
        if rl > 0:
            reps.append(complex(t - 0.5 * rl, 0.0))
        return np.array(reps)
    sampled = form[1]
    if sampled._reps is not None:
        return sampled._reps
    cands = []
    for loop in sampled.loops:
        if len(loop) >= 3:
            finite = loop[np.isfinite(loop.real) & np.isfinite(loop.imag)]
            if len(finite):
                cands.append(finite.mean())
    if cands:
        cands = np.asarray(cands)
        reps = cands[_form_contains(form, cands)]
    else:
        reps = np.empty(0, dtype=complex)
    sampled._reps = reps
    return reps


def region_distance(a, b):
    """Infimum distance between two regions; 0 when they intersect.

    Analytic for disc/disc and disc/half-disc pairs; boundary-to-boundary
    with containment checks otherwise.  Two unbounded regions are at
    distance 0 by the ``|inf - inf| = 0`` convention.
    """
    fa, fb = _reduce(a), _reduce(b)
    if fa[0] == "sampled" and fa[1].is_empty:
        return math.inf
    if fb[0] == "sampled" and fb[1].is_empty:
        return math.inf
    ua = fa[0] == "sampled" and fa[1].unbounded
    ub = fb[0] == "sampled" and fb[1].unbounded
    if ua and ub:
        return 0.0
    if fa[0] == "disc" and fb[0] == "disc":
        return max(abs(fa[1] - fb[1]) - fa[2] - fb[2], 0.0)
    if fa[0] == "disc" and fb[0] == "hdu":
        d = _pdist_hdu(fb[1], fb[2], fb[3], np.array([complex(fa[1], 0.0)]))[0]
        return max(d - fa[2], 0.0)
    if fb[0] == "disc" and fa[0] == "hdu":
        return region_distance(b, a)
    return _generic_distance(fa, fb)


def _finite(pts):
    return pts[np.isfinite(pts.real) & np.isfinite(pts.imag)]


def _form_boundary(form, n=BOUNDARY_SAMPLES):
    if form[0] == "disc":
        return _boundary_points(Disc(form[1], form[2]), n)
    if form[0] == "hdu":
        return _hdu_boundary(form[1], form[2], form[3], n)
    return _finite(form[1].all_points())


def _decimated(points, target):
    if len(points) <= target:
        return points
    stride = int(np.ceil(len(points) / target))
    return points[::stride]


def _generic_distance(fa, fb):
    pa = _form_boundary(fa)
    pb = _form_boundary(fb)
    if pa.size == 0 or pb.size == 0:
        return math.inf

    # containment probes: coarse boundary samples plus interior representatives
    if _form_contains(fb, _decimated(pa, 256)).any():
        return 0.0
    if _form_contains(fa, _decimated(pb, 256)).any():
        return 0.0
    for reps, other in ((_interior_representatives(fa), fb), (_interior_representatives(fb), fa)):
        if reps.size and _form_contains(other, reps).any():
            return 0.0

    if fa[0] == "sampled" and fb[0] == "sampled":
        d = _kernels.polyline_gap(*_loops_packed(fa[1]), *_loops_packed(fb[1]))
        return float(d)

    # one side parametric: analytic point distance at the sampled vertices,
    # then exact-ish refinement of segments that could undercut that minimum
    if fa[0] == "sampled":
        fa, fb = fb, fa
        pa, pb = pb, pa
    if fb[0] != "sampled":
        best = min(
            float(_form_pdist(fa, pb).min()), float(_form_pdist(fb, pa).min())
        )
        return max(best, 0.0)
    best = float(_form_pdist(fa, pb).min())
    best = min(best, _segment_refine(fa, fb[1], best))
    if best < _dense_guard(fa, fb):
        # near-contact: adjudicate intersection with the full boundary sets
        if _form_contains(fb, pa).any() or _form_contains(fa, pb).any():
            return 0.0
    return max(best, 0.0)


def _dense_guard(fa, fb):
    """Scale below which a near-zero distance warrants dense membership checks."""
    ra = region_radius(Disc(fa[1], fa[2])) if fa[0] == "disc" else abs(fa[3]) + max(fa[1], fa[2])
    return max(0.02 * max(ra, 1.0), 1e-6)


def _segment_refine(form, sampled, best):
    """Subdivide polyline segments that could beat the vertex minimum.

    A segment with endpoint distances d0, d1 and length L can only come
    closer than ``best`` if min(d0, d1) - L < best (triangle inequality),
    so only those few segments get sampled densely.
    """
    for _ in range(2):
        improved = best
        for loop in sampled.loops:
            loop = _finite(loop)
            if len(loop) < 2:
                continue
            d = _form_pdist(form, loop)
            seg_len = np.abs(np.diff(loop))
            reach = np.minimum(d[:-1], d[1:]) - seg_len
            cand = np.flatnonzero(reach < best * (1.0 + 1e-9))
            for i in cand[:512]:
                n = int(min(max(seg_len[i] / max(best / 8.0, 1e-12), 2), 64))
                seg = np.linspace(loop[i], loop[i + 1], n + 1)
                improved = min(improved, float(_form_pdist(form, seg).min()))
        if improved >= best * (1.0 - 1e-12):
            break
        best = improved
    return best


def _loops_packed(sampled):
    """Pack loops into one vertex array plus a valid-segment mask."""
    pts, mask = [], []
    for loop in sampled.loops:
        loop = _finite(_close(loop))
        if len(loop) < 2:
            continue
        pts.append(loop)
        m = np.ones(len(loop), dtype=np.int8)
        m[-1] = 0  # joint to the next loop is not a segment
        mask.append(m)
    if not pts:
        return np.zeros(1, dtype=complex), np.zeros(0, dtype=np.int8)
    allpts = np.concatenate(pts)
    allmask = np.concatenate(mask)[: len(allpts) - 1]
    return allpts, allmask


# ---------------------------------------------------------------------------
# predicates


def is_star_shaped_about(region, kappa):
    """True when every scaled copy ``kappa + tau (z - kappa)`` stays inside.

    Exact for discs and for affine half-disc unions about their own
    anchor point; sampled tau-grid check otherwise.
    """
    kappa = complex(kappa)
    if is_infinite(kappa):
        raise ValueError("kappa must be finite")
    form = _reduce(region)
    if form[0] == "disc":
        return bool(abs(kappa - form[1]) <= form[2] + GEOM_TOL)
    if form[0] == "hdu":
        _, rr, rl, t = form
        if abs(kappa - t) <= GEOM_TOL:
            return True  # radially convex about its anchor
        return _star_sampled(form, kappa)
    return _star_sampled(form, kappa)


def _star_sampled(form, kappa):
    z = _form_boundary(form, STAR_BOUNDARY_SAMPLES)
    if z.size == 0:
        return False
    scale = max(float(np.abs(z).max()), 1.0)
    slack = 1e-7 * scale
    for tau in STAR_TAU_GRID:
        probe = kappa + tau * (z - kappa)
        if not _contains_with_slack(form, probe, slack).all():
            return False
    return True


def has_chord_property(region):
    """True when the vertical chord ``[z, conj z]`` stays inside for all z."""
    form = _reduce(region)
    if form[0] == "disc":
        return True  # real-centered discs are convex and conjugate-symmetric
    if form[0] == "hdu":
        return True  # each half-disc is convex; chords stay within their half
    sampled = form[1]
    z = _form_boundary(form, STAR_BOUNDARY_SAMPLES)
    z = z[np.abs(z.imag) > GEOM_TOL]
    if z.size == 0:
        return True
    scale = max(float(np.abs(z).max()), 1.0)
    slack = 1e-7 * scale
    for frac in np.linspace(-1.0, 1.0, 17):
        probe = z.real + 1j * frac * z.imag
        if not _contains_with_slack(form, probe, slack).all():
            return False
    return True


# ---------------------------------------------------------------------------
# hull under arcs of real-centered circles (parabola lift)


def lift(z):
    """Parabola lift ``z -> (Re z, |z|^2)`` as an (n, 2) array."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    return np.column_stack([z.real, (z * np.conj(z)).real])


def unlift(u, v):
    """Inverse of the lift into the closed upper half-plane."""
    y = np.sqrt(np.maximum(np.asarray(v) - np.asarray(u) ** 2, 0.0))
    return np.asarray(u) + 1j * y


def convex_hull_2d(pts):
    """Andrew monotone chain; returns hull vertices in ccw order.

    Degenerate inputs give back 1 or 2 points.
    """
    pts = np.unique(np.round(np.asarray(pts, dtype=float), 14), axis=0)
    if len(pts) <= 2:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                ax, ay = out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]
                bx, by = p[0] - out[-2][0], p[1] - out[-2][1]
                if ax * by - ay * bx <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        return pts[[0, -1]]
    return hull


def collapse_degenerate_hull(hull):
    """Reduce a sliver polygon (collinear points up to rounding) to a segment."""
    if len(hull) <= 2:
        return hull
    centered = hull - hull.mean(axis=0)
    svals = np.linalg.svd(centered, compute_uv=False)
    scale = max(svals[0], 1.0)
    if svals[-1] > 1e-10 * scale:
        return hull
    axis = np.linalg.svd(centered, compute_uv=True)[2][0]
    proj = centered @ axis
    return hull[[int(proj.argmin()), int(proj.argmax())]]


def _edge_to_arc(p0, p1, samples):
    """Map a lift-space segment back to its z-plane arc."""
    u0, v0 = p0
    u1, v1 = p1
    if abs(u1 - u0) > 1e-14:
        u = np.linspace(u0, u1, samples)
        v = v0 + (u - u0) * (v1 - v0) / (u1 - u0)
    else:
        v = np.linspace(v0, v1, samples)
        u = np.full(samples, 0.5 * (u0 + u1))
    return unlift(u, v)


def hull_boundary_arcs(hull_pts, total_samples=BOUNDARY_SAMPLES):
    """Boundary curve of a lifted hull polygon, mapped to the upper half-plane.

    Samples are distributed over the edges in proportion to their arc length
    in the z-plane.  Closed for a proper polygon; for a degenerate 2-vertex
    hull the single open arc is returned (the caller joins it with its
    mirror image).
    """
    m = len(hull_pts)
    if m == 1:
        return unlift(hull_pts[:, 0], hull_pts[:, 1])
    if m == 2:
        return _edge_to_arc(hull_pts[0], hull_pts[1], max(total_samples, 16))

    def arc_len(p0, p1):
        probe = _edge_to_arc(p0, p1, 9)
        return float(np.abs(np.diff(probe)).sum())

    edges = [(hull_pts[i], hull_pts[(i + 1) % m]) for i in range(m)]
    lengths = np.array([arc_len(p0, p1) for p0, p1 in edges])
    total = max(lengths.sum(), 1e-300)
    counts = np.maximum((total_samples * lengths / total).astype(int), 2)
    arcs = [
        _edge_to_arc(p0, p1, int(c) + 1)[:-1] for (p0, p1), c in zip(edges, counts)
    ]
    return np.concatenate(arcs + [arcs[0][:1]])


def h_convex_hull(points):
    """Hull of a point set under arcs of circles centered on the real axis.

    The input is closed under conjugation first.  Arcs within one closed
    half-plane map to straight segments under the parabola lift, so the
    hull is the planar convex hull there, mapped back and mirrored.  The
    result is a sampled region whose loops bound the hull; degenerate
    (collinear-lift) inputs produce the single lens loop between the arc
    and its mirror.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    if pts.size == 0:
        raise EmptyRegionError("hull of an empty point set")
    pts = np.concatenate([pts, np.conj(pts)])
    lifted = lift(pts)
    hull = collapse_degenerate_hull(convex_hull_2d(lifted))
    if len(hull) == 1:
        z = unlift(hull[:, 0], hull[:, 1])[0]
        if abs(z.imag) <= GEOM_TOL:
            return Sampled([np.array([z, z])], conjugate_closed=True)
        return Sampled([np.array([z, np.conj(z), z])], conjugate_closed=True)
    curve = hull_boundary_arcs(hull)
    if len(hull) == 2:
        # lens between the arc and its mirror image
        loop = np.concatenate([curve, np.conj(curve)[::-1]])
        return Sampled([loop], conjugate_closed=True)
    return Sampled([curve, np.conj(curve)[::-1]], conjugate_closed=True)
