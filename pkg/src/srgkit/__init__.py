"""Scaled-graph separation certificates, reset-controller gain design, and
hybrid closed-loop simulation for SISO plants (stable or unstable)."""

from ._kernels import backend_name
from .analysis import CertificateReport, certify, tau_sweep_check
from .complex_sets import (
    Disc,
    HalfDiscUnion,
    Region,
    Sampled,
    TranslatedScaled,
    h_convex_hull,
    has_chord_property,
    is_star_shaped_about,
    mobius_invert,
    mobius_invert_point,
    region_contains,
    region_distance,
    region_from_dict,
    region_radius,
    scale_region,
    translate_region,
)
from .design import DesignReport, feasibility, find_max_abs_kr, find_min_kp
from .lti import (
    ExtendedSRG,
    NyquistContour,
    PlantSrg,
    TransferFunction,
    evaluate,
    extended_srg,
    get_plant_srg,
    inverted_extended_srg,
    nyquist_contour,
    poles,
    rhp_pole_count,
    to_state_space,
    winding_number,
    winding_numbers,
)
from .reset_system import (
    ResetSystem,
    SgBound,
    base_linear,
    controller_sg_bound,
    in_jump_set,
    make_sore,
    sore_sg_bound,
)
from .simulator import (
    HorizonTooShortError,
    LureLoop,
    Signal,
    SimulationDiverged,
    Trajectory,
    ZenoError,
    default_probe_battery,
    l2_gain_estimate,
    simulate_closed_loop,
    simulate_reset,
)

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "CertificateReport",
    "certify",
    "tau_sweep_check",
    "Disc",
    "HalfDiscUnion",
    "Region",
    "Sampled",
    "TranslatedScaled",
    "h_convex_hull",
    "has_chord_property",
    "is_star_shaped_about",
    "mobius_invert",
    "mobius_invert_point",
    "region_contains",
    "region_distance",
    "region_from_dict",
    "region_radius",
    "scale_region",
    "translate_region",
    "DesignReport",
    "feasibility",
    "find_max_abs_kr",
    "find_min_kp",
    "ExtendedSRG",
    "NyquistContour",
    "PlantSrg",
    "TransferFunction",
    "evaluate",
    "extended_srg",
    "get_plant_srg",
    "inverted_extended_srg",
    "nyquist_contour",
    "poles",
    "rhp_pole_count",
    "to_state_space",
    "winding_number",
    "winding_numbers",
    "ResetSystem",
    "SgBound",
    "base_linear",
    "controller_sg_bound",
    "in_jump_set",
    "make_sore",
    "sore_sg_bound",
    "HorizonTooShortError",
    "LureLoop",
    "Signal",
    "SimulationDiverged",
    "Trajectory",
    "ZenoError",
    "default_probe_battery",
    "l2_gain_estimate",
    "simulate_closed_loop",
    "simulate_reset",
]
