"""Separation certificates for a plant in feedback with a bounded operator.

The certificate checks: finite gain of the feedback bound, the chord
property, star-shapedness about an anchor inside the bound, and a positive
separation between the inverted extended graph of the plant and the
negated bound.  A positive separation r yields the closed-loop L2-gain
bound 1/r.  Well-posedness of the interconnection is assumed and recorded,
never verified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .complex_sets import (
    has_chord_property,
    is_star_shaped_about,
    region_contains,
    region_distance,
    region_radius,
    scale_region,
    translate_region,
)
from .lti import DEFAULT_SAMPLES, PlantSrg, get_plant_srg

__all__ = ["CertificateReport", "certify", "tau_sweep_check", "AnalysisInconclusive"]


class AnalysisInconclusive(RuntimeError):
    """Raised when winding numbers are too noisy to trust; refine the grid."""


@dataclass
class CertificateReport:
    certified: bool
    gain_finite: bool
    chord_ok: bool
    star_ok: bool
    kappa: complex
    separation: float
    gain_bound: float
    well_posedness_assumed: bool = True
    artifacts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "certified": self.certified,
            "gain_finite": self.gain_finite,
            "chord_ok": self.chord_ok,
            "star_ok": self.star_ok,
            "kappa": [self.kappa.real, self.kappa.imag],
            "separation": self.separation,
            "gain_bound": self.gain_bound if math.isfinite(self.gain_bound) else None,
            "well_posedness_assumed": self.well_posedness_assumed,
            "notes": self.notes,
            "artifacts": self.artifacts,
        }


def _resolve_srg(G, omega_max, samples):
    if isinstance(G, PlantSrg):
        return G
    return get_plant_srg(G, omega_max, samples)


def certify(G, bound, omega_max=None, samples=DEFAULT_SAMPLES, with_artifacts=True):
    """Assemble the separation certificate for plant G against an SgBound.

    ``G`` may be a :class:`TransferFunction` or an already-built
    :class:`PlantSrg` (reusing its cached geometry).
    """
    srg = _resolve_srg(G, omega_max, samples)
    shape = bound.shape
    kappa = complex(bound.kappa)
    notes = ["well-posedness of the interconnection is assumed, not verified"]

    gain_finite = math.isfinite(region_radius(shape))
    chord_ok = has_chord_property(shape)
    if not chord_ok:
        # the theorem needs the chord property on one side only
        plant_side = srg.inverted_region()
        chord_ok = has_chord_property(plant_side)
        if chord_ok:
            notes.append("chord property holds on the plant side only")
    star_ok = bool(region_contains(shape, kappa, tol=1e-9)) and is_star_shaped_about(
        shape, kappa
    )

    inv_region = srg.inverted_region()
    negated = scale_region(shape, -1.0)
    separation = float(region_distance(inv_region, negated))
    gain_bound = 1.0 / separation if separation > 0 else math.inf

    certified = bool(gain_finite and chord_ok and star_ok and separation > 0.0)
    artifacts = {}
    if with_artifacts:
        artifacts = {
            "inverted_srg": inv_region.to_dict(),
            "negated_bound": negated.to_dict(),
            "n_p": srg.n_p,
        }
    return CertificateReport(
        certified=certified,
        gain_finite=gain_finite,
        chord_ok=chord_ok,
        star_ok=star_ok,
        kappa=kappa,
        separation=separation,
        gain_bound=gain_bound,
        artifacts=artifacts,
        notes=notes,
    )


def tau_sweep_check(G, bound, taus=None, omega_max=None, samples=DEFAULT_SAMPLES):
    """Positive separation for the whole scaled family kappa + tau (S - kappa).

    This is the homotopy family behind the separation condition; the
    endpoint tau = 1 coincides with the plain certificate distance.
    """
    if taus is None:
        taus = np.linspace(0.1, 1.0, 10)
    taus = list(taus)
    if not taus:
        raise ValueError("taus must be nonempty")
    srg = _resolve_srg(G, omega_max, samples)
    inv_region = srg.inverted_region()
    kappa = float(np.real(bound.kappa))
    for tau in taus:
        member = translate_region(
            scale_region(translate_region(bound.shape, -kappa), float(tau)), kappa
        )
        if region_distance(inv_region, scale_region(member, -1.0)) <= 0.0:
            return False
    return True
