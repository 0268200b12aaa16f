# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: winding-number batches, polyline distance, and the
hybrid RK4 stepper.  Mirrors the signatures in ``_fallback``."""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, fabs, hypot, sin, sqrt, INFINITY as C_INF

cnp.import_array()

SIG_STEP = 0
SIG_SINUSOID = 1
SIG_SAMPLES = 2


def winding_batch(cnp.complex128_t[::1] contour, cnp.complex128_t[::1] probes):
    cdef Py_ssize_t n = contour.shape[0]
    cdef Py_ssize_t m = probes.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] counts = np.empty(m, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] residues = np.empty(m, dtype=np.float64)
    cdef Py_ssize_t i, k
    cdef double px, py, ax, ay, bx, by, cross, dot, total, turn, rounded
    cdef double TWO_PI = 6.283185307179586476925286766559
    for i in range(m):
        px = probes[i].real
        py = probes[i].imag
        total = 0.0
        ax = contour[0].real - px
        ay = contour[0].imag - py
        for k in range(1, n):
            bx = contour[k].real - px
            by = contour[k].imag - py
            cross = ax * by - ay * bx
            dot = ax * bx + ay * by
            total += atan2(cross, dot)
            ax = bx
            ay = by
        turn = -total / TWO_PI
        rounded = round(turn)
        counts[i] = <long long> rounded
        residues[i] = fabs(turn - rounded)
    return counts, residues


cdef inline double _pt_seg(double px, double py, double ax, double ay,
                           double bx, double by) nogil:
    cdef double dx = bx - ax
    cdef double dy = by - ay
    cdef double l2 = dx * dx + dy * dy
    cdef double t
    if l2 <= 0.0:
        return hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / l2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return hypot(px - (ax + t * dx), py - (ay + t * dy))


cdef inline double _orient(double ox, double oy, double ax, double ay,
                           double bx, double by) nogil:
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


def polyline_gap(cnp.complex128_t[::1] pa, cnp.int8_t[::1] mask_a,
                 cnp.complex128_t[::1] pb, cnp.int8_t[::1] mask_b,
                 double stop_below=0.0):
    cdef Py_ssize_t na = pa.shape[0]
    cdef Py_ssize_t nb = pb.shape[0]
    cdef Py_ssize_t i, j
    cdef double best = C_INF
    cdef double d1, d2
    cdef double ax0, ay0, ax1, ay1, bx0, by0, bx1, by1

    # proper segment crossings
    for i in range(na - 1):
        if not mask_a[i]:
            continue
        ax0 = pa[i].real; ay0 = pa[i].imag
        ax1 = pa[i + 1].real; ay1 = pa[i + 1].imag
        for j in range(nb - 1):
            if not mask_b[j]:
                continue
            bx0 = pb[j].real; by0 = pb[j].imag
            bx1 = pb[j + 1].real; by1 = pb[j + 1].imag
            d1 = _orient(ax0, ay0, ax1, ay1, bx0, by0) * _orient(ax0, ay0, ax1, ay1, bx1, by1)
            if d1 < 0.0:
                d2 = _orient(bx0, by0, bx1, by1, ax0, ay0) * _orient(bx0, by0, bx1, by1, ax1, ay1)
                if d2 < 0.0:
                    return 0.0

    # vertex-to-segment distances in both directions
    for i in range(na):
        ax0 = pa[i].real; ay0 = pa[i].imag
        for j in range(nb - 1):
            if not mask_b[j]:
                continue
            d1 = _pt_seg(ax0, ay0, pb[j].real, pb[j].imag, pb[j + 1].real, pb[j + 1].imag)
            if d1 < best:
                best = d1
                if best <= stop_below:
                    return best
    for j in range(nb):
        bx0 = pb[j].real; by0 = pb[j].imag
        for i in range(na - 1):
            if not mask_a[i]:
                continue
            d1 = _pt_seg(bx0, by0, pa[i].real, pa[i].imag, pa[i + 1].real, pa[i + 1].imag)
            if d1 < best:
                best = d1
                if best <= stop_below:
                    return best
    return best


cdef double _sig_val(int kind, double p0, double p1, double p2,
                     double[::1] stimes, double[::1] svalues, double t) nogil:
    cdef Py_ssize_t n, lo, hi, mid
    cdef double frac
    if kind == 0:
        return p0 if t >= p1 else 0.0
    if kind == 1:
        return p0 * sin(p1 * t + p2)
    n = stimes.shape[0]
    if n == 0 or t < stimes[0] or t > stimes[n - 1]:
        return 0.0
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if stimes[mid] <= t:
            lo = mid
        else:
            hi = mid
    if stimes[hi] == stimes[lo]:
        return svalues[lo]
    frac = (t - stimes[lo]) / (stimes[hi] - stimes[lo])
    return svalues[lo] + frac * (svalues[hi] - svalues[lo])


cdef void _deriv(double[:, ::1] A, double[::1] b, double* x, double r,
                 double* out, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(n):
        acc = b[i] * r
        for j in range(n):
            acc += A[i, j] * x[j]
        out[i] = acc


cdef void _rk4(double[:, ::1] A, double[::1] b, int kind, double p0, double p1,
               double p2, double[::1] st, double[::1] sv, double* x, double t,
               double h, double* out, double* k1, double* k2, double* k3,
               double* k4, double* tmp, Py_ssize_t n) nogil:
    cdef Py_ssize_t i
    cdef double r0 = _sig_val(kind, p0, p1, p2, st, sv, t)
    cdef double rh = _sig_val(kind, p0, p1, p2, st, sv, t + 0.5 * h)
    cdef double r1 = _sig_val(kind, p0, p1, p2, st, sv, t + h)
    _deriv(A, b, x, r0, k1, n)
    for i in range(n):
        tmp[i] = x[i] + 0.5 * h * k1[i]
    _deriv(A, b, tmp, rh, k2, n)
    for i in range(n):
        tmp[i] = x[i] + 0.5 * h * k2[i]
    _deriv(A, b, tmp, rh, k3, n)
    for i in range(n):
        tmp[i] = x[i] + h * k3[i]
    _deriv(A, b, tmp, r1, k4, n)
    for i in range(n):
        out[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


cdef double _quad_val(double[:, ::1] Mq, double* x, double r, Py_ssize_t n) nogil:
    cdef Py_ssize_t i, j
    cdef double acc = 0.0
    cdef double xi_i
    for i in range(n + 1):
        xi_i = x[i] if i < n else r
        for j in range(n + 1):
            acc += xi_i * Mq[i, j] * (x[j] if j < n else r)
    return acc


def simulate_hybrid(double[:, ::1] A, double[::1] b, double[:, ::1] Mq,
                    double[:, ::1] R_post, int sig_kind, double sig_p0,
                    double sig_p1, double sig_p2, double[::1] sig_times,
                    double[::1] sig_values, double t_end, double dt_max,
                    double dwell, double v_tol, long max_jumps,
                    double[::1] x0, double diverge_limit):
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t cap = <Py_ssize_t> (t_end / dt_max) + 16
    cdef list jt = []
    cdef list jpre = []
    cdef list jpost = []

    times_arr = np.empty(cap, dtype=np.float64)
    states_arr = np.empty((cap, n), dtype=np.float64)
    cdef double[::1] times = times_arr
    cdef double[:, ::1] states = states_arr

    scratch = np.empty(8 * n, dtype=np.float64)
    cdef double[::1] buf = scratch
    cdef double* x = &buf[0]
    cdef double* xn = &buf[n]
    cdef double* xm = &buf[2 * n]
    cdef double* k1 = &buf[3 * n]
    cdef double* k2 = &buf[4 * n]
    cdef double* k3 = &buf[5 * n]
    cdef double* k4 = &buf[6 * n]
    cdef double* tmp = &buf[7 * n]

    cdef Py_ssize_t i, j, used
    cdef double t = 0.0, v_prev, v_new, vm, lo, hi, mid, r_now, t_jump, amax
    cdef double last_jump = -1e300
    cdef bint armed
    cdef int status = 0
    cdef long n_jumps = 0
    cdef double tiny = 1e-12
    cdef double h

    for i in range(n):
        x[i] = x0[i]
    times[0] = 0.0
    for i in range(n):
        states[0, i] = x[i]
    used = 1

    v_prev = _quad_val(Mq, x, _sig_val(sig_kind, sig_p0, sig_p1, sig_p2,
                                       sig_times, sig_values, 0.0), n)
    armed = v_prev > 0.0

    if v_prev < -v_tol:
        jt.append(0.0)
        jpre.append([x[i] for i in range(n)])
        for i in range(n):
            tmp[i] = 0.0
            for j in range(n):
                tmp[i] += R_post[i, j] * x[j]
        for i in range(n):
            x[i] = tmp[i]
        jpost.append([x[i] for i in range(n)])
        for i in range(n):
            states[0, i] = x[i]
        last_jump = 0.0
        armed = False
        v_prev = _quad_val(Mq, x, _sig_val(sig_kind, sig_p0, sig_p1, sig_p2,
                                           sig_times, sig_values, 0.0), n)
        n_jumps += 1

    while t < t_end - tiny:
        h = dt_max if dt_max < (t_end - t) else (t_end - t)
        _rk4(A, b, sig_kind, sig_p0, sig_p1, sig_p2, sig_times, sig_values,
             x, t, h, xn, k1, k2, k3, k4, tmp, n)
        r_now = _sig_val(sig_kind, sig_p0, sig_p1, sig_p2, sig_times, sig_values, t + h)
        v_new = _quad_val(Mq, xn, r_now, n)

        if (not armed) and (t + h - last_jump >= dwell) and v_new > 0.0:
            armed = True
            for i in range(n):
                x[i] = xn[i]
            t += h
            v_prev = v_new
        elif armed and v_prev > 0.0 and v_new <= 0.0:
            lo = 0.0
            hi = h
            for i in range(n):
                xm[i] = xn[i]
            vm = v_new
            for j in range(100):
                mid = 0.5 * (lo + hi)
                if mid <= 0.0:
                    break
                _rk4(A, b, sig_kind, sig_p0, sig_p1, sig_p2, sig_times,
                     sig_values, x, t, mid, xm, k1, k2, k3, k4, tmp, n)
                vm = _quad_val(Mq, xm, _sig_val(sig_kind, sig_p0, sig_p1,
                                                sig_p2, sig_times, sig_values,
                                                t + mid), n)
                if fabs(vm) < v_tol:
                    hi = mid
                    break
                if vm > 0.0:
                    lo = mid
                else:
                    hi = mid
                if hi - lo < 1e-16 * (1.0 if t < 1.0 else t):
                    break
            if fabs(vm) >= v_tol:
                _rk4(A, b, sig_kind, sig_p0, sig_p1, sig_p2, sig_times,
                     sig_values, x, t, hi, xm, k1, k2, k3, k4, tmp, n)
            t_jump = t + (hi if hi > tiny else tiny)
            jt.append(t_jump)
            jpre.append([xm[i] for i in range(n)])
            for i in range(n):
                tmp[i] = 0.0
                for j in range(n):
                    tmp[i] += R_post[i, j] * xm[j]
            for i in range(n):
                x[i] = tmp[i]
            jpost.append([x[i] for i in range(n)])
            t = t_jump
            last_jump = t
            armed = False
            v_prev = _quad_val(Mq, x, _sig_val(sig_kind, sig_p0, sig_p1,
                                               sig_p2, sig_times, sig_values, t), n)
            n_jumps += 1
            if n_jumps > max_jumps:
                status = 2
        else:
            for i in range(n):
                x[i] = xn[i]
            t += h
            v_prev = v_new

        if used >= cap:
            cap = cap + (cap >> 1) + 16
            times_arr = np.concatenate([times_arr, np.empty(cap - used, dtype=np.float64)])
            states_arr = np.concatenate(
                [states_arr, np.empty((cap - used, n), dtype=np.float64)], axis=0
            )
            times = times_arr
            states = states_arr
        times[used] = t
        for i in range(n):
            states[used, i] = x[i]
        used += 1

        amax = 0.0
        for i in range(n):
            if fabs(x[i]) > amax:
                amax = fabs(x[i])
        if amax > diverge_limit:
            status = 1
            break
        if status == 2:
            break

    pre_arr = np.asarray(jpre, dtype=np.float64).reshape(-1, n)
    post_arr = np.asarray(jpost, dtype=np.float64).reshape(-1, n)
    return (
        times_arr[:used].copy(),
        states_arr[:used].copy(),
        np.asarray(jt, dtype=np.float64),
        pre_arr,
        post_arr,
        status,
    )
