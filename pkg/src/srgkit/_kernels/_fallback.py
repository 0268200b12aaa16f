"""Pure-numpy implementations of the hot kernels.

Same call signatures as the compiled extension; selected automatically
when the extension is unavailable or ``SRGKIT_PURE=1`` is set.
"""

import numpy as np

__all__ = ["winding_batch", "polyline_gap", "simulate_hybrid"]

# signal kind codes shared with the compiled kernel
SIG_STEP = 0
SIG_SINUSOID = 1
SIG_SAMPLES = 2

_PROBE_CHUNK = 64


def winding_batch(contour, probes):
    """Clockwise winding counts of a closed contour around each probe point.

    Returns ``(counts, residues)`` where ``counts[i]`` is the nearest integer
    to the accumulated clockwise turn and ``residues[i]`` the rounding gap
    (large residues flag an under-sampled contour).
    """
    contour = np.ascontiguousarray(contour, dtype=np.complex128)
    probes = np.atleast_1d(np.ascontiguousarray(probes, dtype=np.complex128))
    counts = np.empty(probes.shape[0], dtype=np.int64)
    residues = np.empty(probes.shape[0], dtype=np.float64)
    for lo in range(0, probes.shape[0], _PROBE_CHUNK):
        p = probes[lo : lo + _PROBE_CHUNK]
        v = contour[np.newaxis, :] - p[:, np.newaxis]
        ratio = v[:, 1:] * np.conj(v[:, :-1])
        ang = np.arctan2(ratio.imag, ratio.real)
        turn = -ang.sum(axis=1) / (2.0 * np.pi)
        c = np.rint(turn)
        counts[lo : lo + p.shape[0]] = c.astype(np.int64)
        residues[lo : lo + p.shape[0]] = np.abs(turn - c)
    return counts, residues


def _points_to_segments(points, s0, s1):
    """Min distance from each point to a family of segments."""
    if s0.shape[0] == 0 or points.shape[0] == 0:
        return np.inf
    d = s1 - s0
    l2 = (d * np.conj(d)).real
    l2 = np.where(l2 > 0.0, l2, 1.0)
    best = np.inf
    for lo in range(0, points.shape[0], 512):
        p = points[lo : lo + 512, np.newaxis]
        t = ((p - s0[np.newaxis, :]) * np.conj(d)[np.newaxis, :]).real / l2
        np.clip(t, 0.0, 1.0, out=t)
        proj = s0[np.newaxis, :] + t * d[np.newaxis, :]
        best = min(best, float(np.abs(p - proj).min()))
    return best


def _cross(o, a, b):
    return ((a - o) * np.conj(b - o)).imag


def _any_proper_crossing(a0, a1, b0, b1):
    if a0.shape[0] == 0 or b0.shape[0] == 0:
        return False
    for lo in range(0, a0.shape[0], 128):
        x0 = a0[lo : lo + 128, np.newaxis]
        x1 = a1[lo : lo + 128, np.newaxis]
        d1 = _cross(x0, x1, b0[np.newaxis, :]) * _cross(x0, x1, b1[np.newaxis, :])
        d2 = _cross(b0[np.newaxis, :], b1[np.newaxis, :], x0) * _cross(
            b0[np.newaxis, :], b1[np.newaxis, :], x1
        )
        if np.any((d1 < 0.0) & (d2 < 0.0)):
            return True
    return False


def _segment_arrays(points, seg_mask):
    points = np.ascontiguousarray(points, dtype=np.complex128)
    seg_mask = np.asarray(seg_mask, dtype=bool)
    return points, points[:-1][seg_mask], points[1:][seg_mask]


def polyline_gap(pa, mask_a, pb, mask_b, stop_below=0.0):
    """Minimum distance between two polyline families.

    ``mask_x[i]`` marks a valid segment between vertex ``i`` and ``i+1``,
    so several disjoint polylines can be packed into one array.  Returns
    exactly 0.0 when any two segments properly cross.
    """
    pa, a0, a1 = _segment_arrays(pa, mask_a)
    pb, b0, b1 = _segment_arrays(pb, mask_b)
    if _any_proper_crossing(a0, a1, b0, b1):
        return 0.0
    best = min(_points_to_segments(pa, b0, b1), _points_to_segments(pb, a0, a1))
    if best <= stop_below:
        return float(best)
    return float(best)


def _signal_value(kind, p0, p1, p2, stimes, svalues, t):
    if kind == SIG_STEP:
        return p0 if t >= p1 else 0.0
    if kind == SIG_SINUSOID:
        return p0 * np.sin(p1 * t + p2)
    # sampled signal: zero outside the provided support
    if t < stimes[0] or t > stimes[-1]:
        return 0.0
    return float(np.interp(t, stimes, svalues))


def simulate_hybrid(
    A,
    b,
    Mq,
    R_post,
    sig_kind,
    sig_p0,
    sig_p1,
    sig_p2,
    sig_times,
    sig_values,
    t_end,
    dt_max,
    dwell,
    v_tol,
    max_jumps,
    x0,
    diverge_limit,
):
    """RK4 integration of ``xdot = A x + b r(t)`` with a quadratic jump guard.

    ``Mq`` is a symmetric form on ``[x; r]``; a jump fires when its value
    crosses from positive to non-positive while armed, localized by
    bisection to ``|value| < v_tol``, after which ``x <- R_post x`` and
    jumps are re-armed only once the flow interior is re-entered and the
    dwell time has elapsed.

    Returns ``(times, states, jump_times, jump_pre, jump_post, status)``
    with status 0 = ok, 1 = diverged, 2 = jump budget exhausted.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    Mq = np.ascontiguousarray(Mq, dtype=np.float64)
    R_post = np.ascontiguousarray(R_post, dtype=np.float64)
    x = np.array(x0, dtype=np.float64)
    n = x.shape[0]

    def r_of(t):
        return _signal_value(sig_kind, sig_p0, sig_p1, sig_p2, sig_times, sig_values, t)

    def v_of(x, t):
        xr = np.empty(n + 1)
        xr[:n] = x
        xr[n] = r_of(t)
        return float(xr @ Mq @ xr)

    def rk4(x, t, h):
        r0 = r_of(t)
        rh = r_of(t + 0.5 * h)
        r1 = r_of(t + h)
        k1 = A @ x + b * r0
        k2 = A @ (x + 0.5 * h * k1) + b * rh
        k3 = A @ (x + 0.5 * h * k2) + b * rh
        k4 = A @ (x + h * k3) + b * r1
        return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    times = [0.0]
    states = [x.copy()]
    jump_times, jump_pre, jump_post = [], [], []
    status = 0
    t = 0.0
    last_jump = -np.inf
    v_prev = v_of(x, 0.0)
    armed = v_prev > 0.0

    # state strictly inside the jump set at start: reset immediately
    if v_prev < -v_tol:
        jump_times.append(0.0)
        jump_pre.append(x.copy())
        x = R_post @ x
        jump_post.append(x.copy())
        states[-1] = x.copy()
        last_jump = 0.0
        armed = False
        v_prev = v_of(x, 0.0)

    tiny = 1e-12
    while t < t_end - tiny:
        h = min(dt_max, t_end - t)
        x_new = rk4(x, t, h)
        v_new = v_of(x_new, t + h)
        if (not armed) and (t + h - last_jump >= dwell) and v_new > 0.0:
            armed = True
            x, t, v_prev = x_new, t + h, v_new
        elif armed and v_prev > 0.0 and v_new <= 0.0:
            lo, hi = 0.0, h
            xm, vm = x_new, v_new
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                if mid <= 0.0:
                    break
                xm = rk4(x, t, mid)
                vm = v_of(xm, t + mid)
                if abs(vm) < v_tol:
                    hi = mid
                    break
                if vm > 0.0:
                    lo = mid
                else:
                    hi = mid
                if hi - lo < 1e-16 * max(1.0, t):
                    break
            t_jump = t + max(hi, tiny)
            if abs(vm) >= v_tol:
                xm = rk4(x, t, hi)
            jump_times.append(t_jump)
            jump_pre.append(xm.copy())
            x = R_post @ xm
            jump_post.append(x.copy())
            t = t_jump
            last_jump = t
            armed = False
            v_prev = v_of(x, t)
            if len(jump_times) > max_jumps:
                status = 2
                times.append(t)
                states.append(x.copy())
                break
        else:
            x, t, v_prev = x_new, t + h, v_new
        times.append(t)
        states.append(x.copy())
        if np.max(np.abs(x)) > diverge_limit:
            status = 1
            break

    return (
        np.asarray(times),
        np.asarray(states),
        np.asarray(jump_times),
        np.asarray(jump_pre).reshape(-1, n),
        np.asarray(jump_post).reshape(-1, n),
        status,
    )
