import math

import numpy as np
import pytest

from srgkit.analysis import certify, tau_sweep_check
from srgkit.complex_sets import region_from_dict
from srgkit.lti import get_plant_srg
from srgkit.reset_system import controller_sg_bound, sore_sg_bound

from conftest import STABLE_CONFIG, UNSTABLE_CONFIG


def test_stable_plant_certificate(stable_plant):
    report = certify(stable_plant, sore_sg_bound())
    assert report.certified
    assert report.gain_finite and report.chord_ok and report.star_ok
    assert report.separation == pytest.approx(STABLE_CONFIG["separation"], abs=0.003)
    assert report.gain_bound == pytest.approx(1.0 / report.separation)
    assert report.gain_bound == pytest.approx(STABLE_CONFIG["gain_bound"], rel=0.15)
    assert report.well_posedness_assumed


def test_unstable_plant_certificate(unstable_plant):
    bound = controller_sg_bound(UNSTABLE_CONFIG["kp"], UNSTABLE_CONFIG["kr"])
    report = certify(unstable_plant, bound)
    assert report.certified
    assert report.separation == pytest.approx(UNSTABLE_CONFIG["separation"], abs=0.011)
    assert report.gain_bound == pytest.approx(UNSTABLE_CONFIG["gain_bound"], rel=0.12)
    assert report.artifacts["n_p"] == 1


def test_unstable_plant_with_swapped_gains_is_not_certified(unstable_plant):
    """The transposed configuration (kp=1, kr=1.1) genuinely overlaps: the
    negated bound reaches past the inverse of the plant's DC value."""
    report = certify(unstable_plant, controller_sg_bound(1.0, 1.1))
    assert report.separation == 0.0
    assert not report.certified
    assert report.gain_bound == math.inf


def test_bare_element_cannot_certify_unstable_plant(unstable_plant):
    report = certify(unstable_plant, sore_sg_bound())
    assert report.separation == 0.0
    assert not report.certified


def test_certificate_report_serializes(stable_plant):
    report = certify(stable_plant, sore_sg_bound())
    doc = report.to_dict()
    assert doc["certified"] is True
    assert doc["separation"] == report.separation
    assert "inverted_srg" in doc["artifacts"]
    region = region_from_dict(doc["artifacts"]["negated_bound"])
    assert region.to_dict()["kind"] in ("half_disc_union", "translated_scaled", "sampled")


def test_gain_bound_times_separation_is_one(stable_plant, unstable_plant):
    for plant, bound in (
        (stable_plant, sore_sg_bound()),
        (unstable_plant, controller_sg_bound(1.1, 1.0)),
        (unstable_plant, controller_sg_bound(2.35, -1.0)),
    ):
        report = certify(plant, bound)
        assert report.certified
        assert report.gain_bound * report.separation == pytest.approx(1.0)


def test_tau_sweep_on_stable_plant(stable_plant):
    assert tau_sweep_check(stable_plant, sore_sg_bound())


def test_tau_sweep_endpoint_matches_certify(unstable_plant):
    bound = controller_sg_bound(1.1, 1.0)
    assert tau_sweep_check(unstable_plant, bound, taus=[1.0])
    # a family whose endpoint intersects fails the sweep
    bad = controller_sg_bound(1.0, 1.1)
    assert not tau_sweep_check(unstable_plant, bad, taus=np.linspace(0.1, 1.0, 10))


def test_certificate_stable_under_grid_refinement(stable_plant):
    r1 = certify(get_plant_srg(stable_plant, None, 4096), sore_sg_bound()).separation
    r2 = certify(get_plant_srg(stable_plant, None, 8192), sore_sg_bound()).separation
    assert abs(r1 - r2) / r1 < 0.05


def test_enlarging_the_bound_never_increases_separation(unstable_plant):
    srg = get_plant_srg(unstable_plant)
    seps = []
    for kr in (0.25, 0.5, 0.75, 1.0):
        seps.append(certify(srg, controller_sg_bound(1.1, kr)).separation)
    assert all(s2 <= s1 + 1e-9 for s1, s2 in zip(seps, seps[1:]))


def test_plant_argument_accepts_prebuilt_geometry(unstable_plant):
    srg = get_plant_srg(unstable_plant)
    r1 = certify(srg, controller_sg_bound(2.35, -1.0)).separation
    r2 = certify(unstable_plant, controller_sg_bound(2.35, -1.0)).separation
    assert r1 == r2
