"""Graphical gain-selection procedure for the parallel reset controller.

Searches controller gains (kp, kr) so that the negated controller bound
keeps at least 1/gamma_hat of separation from the inverted extended graph
of the plant, which certifies the closed-loop L2-gain bound gamma_hat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analysis import certify
from .lti import DEFAULT_SAMPLES, get_plant_srg
from .reset_system import controller_sg_bound

__all__ = ["DesignReport", "feasibility", "find_min_kp", "find_max_abs_kr"]

RESOLUTION = 1e-3


@dataclass
class DesignReport:
    kp: float
    kr: float
    separation: float
    gain_bound: float
    feasible: bool
    search_trace: list = field(default_factory=list)
    plot_payload: dict = field(default_factory=dict)

    def to_dict(self):
        def fin(x):
            return x if math.isfinite(x) else None

        return {
            "kp": fin(self.kp),
            "kr": fin(self.kr),
            "separation": self.separation,
            "gain_bound": fin(self.gain_bound),
            "feasible": self.feasible,
            "search_trace": [list(t) for t in self.search_trace],
            "plot_payload": self.plot_payload,
        }


def feasibility(G, kp, kr, gamma_hat, omega_max=None, samples=DEFAULT_SAMPLES):
    """Certificate check plus the separation threshold 1/gamma_hat."""
    if gamma_hat <= 0:
        raise ValueError("gamma_hat must be positive")
    srg = get_plant_srg(G, omega_max, samples) if not hasattr(G, "inverted_region") else G
    report = certify(srg, controller_sg_bound(kp, kr), with_artifacts=False)
    ok = report.certified and report.separation >= 1.0 / gamma_hat
    return ok, report.separation


def _payload_report(srg, kp, kr):
    return certify(srg, controller_sg_bound(kp, kr), with_artifacts=True)


def find_min_kp(G, kr, gamma_hat, kp_range=(0.0, 10.0), resolution=RESOLUTION,
                omega_max=None, samples=DEFAULT_SAMPLES):
    """Smallest kp in the range meeting the separation threshold for fixed kr.

    Scans coarsely for a first feasible point, then bisects the feasibility
    boundary down to ``resolution``.  Separation is expected to be
    nondecreasing in kp past first feasibility; if the recorded trace
    violates that, the search falls back to a fine grid scan.
    """
    lo, hi = map(float, kp_range)
    if hi < lo:
        raise ValueError("empty kp range")
    srg = get_plant_srg(G, omega_max, samples)
    trace = []

    def check(kp):
        ok, sep = feasibility(srg, kp, kr, gamma_hat)
        trace.append((kp, kr, sep))
        return ok, sep

    steps = max(int((hi - lo) / max((hi - lo) / 40.0, resolution)), 1)
    grid = np.linspace(lo, hi, steps + 1)
    first_ok = None
    last_bad = lo
    for kp in grid:
        ok, _ = check(float(kp))
        if ok:
            first_ok = float(kp)
            break
        last_bad = float(kp)
    if first_ok is None:
        return DesignReport(kp=math.nan, kr=kr, separation=0.0, gain_bound=math.inf,
                            feasible=False, search_trace=trace)

    a, b = last_bad, first_ok
    while b - a > resolution:
        mid = 0.5 * (a + b)
        ok, _ = check(mid)
        if ok:
            b = mid
        else:
            a = mid

    # monotonicity audit over the feasible side of the trace
    feas = sorted((kp, sep) for kp, _, sep in trace if kp >= b - 1e-12)
    seps = [s for _, s in feas]
    if any(s2 < s1 - 1e-9 for s1, s2 in zip(seps, seps[1:])):
        fine = np.arange(lo, hi + 1e-12, 1e-2)
        b = None
        for kp in fine:
            ok, _ = check(float(kp))
            if ok:
                b = float(kp)
                break
        if b is None:
            return DesignReport(kp=math.nan, kr=kr, separation=0.0,
                                gain_bound=math.inf, feasible=False, search_trace=trace)

    final = _payload_report(srg, b, kr)
    return DesignReport(
        kp=b,
        kr=kr,
        separation=final.separation,
        gain_bound=final.gain_bound,
        feasible=True,
        search_trace=trace,
        plot_payload=final.artifacts,
    )


def find_max_abs_kr(G, kp, gamma_hat, kr_range=(-5.0, 5.0), resolution=RESOLUTION,
                    omega_max=None, samples=DEFAULT_SAMPLES):
    """Largest |kr| keeping feasibility for fixed kp, searching outward from 0.

    Both sign directions inside the range are searched; the report carries
    the larger-magnitude result.  Requires kr = 0 itself to be feasible.
    """
    lo, hi = map(float, kr_range)
    if hi < lo:
        raise ValueError("empty kr range")
    srg = get_plant_srg(G, omega_max, samples)
    trace = []

    def check(kr):
        ok, sep = feasibility(srg, kp, kr, gamma_hat)
        trace.append((kp, kr, sep))
        return ok, sep

    ok0, sep0 = check(0.0)
    if not ok0:
        return DesignReport(kp=kp, kr=math.nan, separation=sep0, gain_bound=math.inf,
                            feasible=False, search_trace=trace)

    best = 0.0
    for edge in (hi, lo):
        if edge == 0.0:
            continue
        sign = 1.0 if edge > 0 else -1.0
        span = abs(edge)
        ok_edge, _ = check(edge)
        if ok_edge:
            cand = span
        else:
            a, b = 0.0, span  # feasible at a, infeasible at b
            while b - a > resolution:
                mid = 0.5 * (a + b)
                ok, _ = check(sign * mid)
                if ok:
                    a = mid
                else:
                    b = mid
            cand = a
        if cand > abs(best):
            best = sign * cand

    final = _payload_report(srg, kp, best)
    return DesignReport(
        kp=kp,
        kr=best,
        separation=final.separation,
        gain_bound=final.gain_bound,
        feasible=final.certified and final.separation >= 1.0 / gamma_hat,
        search_trace=trace,
        plot_payload=final.artifacts,
    )
