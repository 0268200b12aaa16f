import math

import pytest

from srgkit.design import feasibility, find_max_abs_kr, find_min_kp

from conftest import DESIGN_CONFIG


def test_feasibility_at_design_point(unstable_plant):
    ok, sep = feasibility(unstable_plant, 2.35, -1.0, 1.0)
    assert ok
    assert sep >= 1.0


def test_feasibility_fails_without_parallel_gain(unstable_plant):
    ok, sep = feasibility(unstable_plant, 0.0, 1.1, 100.0)
    assert not ok
    assert sep == 0.0


def test_feasibility_reproduces_reference_certificate(unstable_plant):
    ok, sep = feasibility(unstable_plant, 1.1, 1.0, 10.42)
    assert ok
    assert sep == pytest.approx(0.096, abs=0.011)


def test_feasibility_rejects_bad_gamma(unstable_plant):
    with pytest.raises(ValueError):
        feasibility(unstable_plant, 1.0, 1.0, 0.0)


def test_find_min_kp_reference(unstable_plant):
    report = find_min_kp(
        unstable_plant,
        DESIGN_CONFIG["kr"],
        DESIGN_CONFIG["gamma_hat"],
        kp_range=(0.0, 5.0),
    )
    assert report.feasible
    assert DESIGN_CONFIG["kp_expected"] == pytest.approx(report.kp, abs=0.1)
    # tight bracketing witness
    ok_hi, _ = feasibility(unstable_plant, report.kp, -1.0, 1.0)
    ok_lo, _ = feasibility(unstable_plant, report.kp - 0.01, -1.0, 1.0)
    assert ok_hi and not ok_lo
    assert len(report.search_trace) > 3
    assert report.plot_payload  # regions recorded for rendering


def test_find_min_kp_weaker_target_needs_less_gain(unstable_plant):
    strict = find_min_kp(unstable_plant, -1.0, 1.0, kp_range=(0.0, 5.0))
    loose = find_min_kp(unstable_plant, -1.0, 1e6, kp_range=(0.0, 5.0))
    assert loose.feasible
    assert loose.kp <= strict.kp + 1e-9


def test_find_min_kp_stable_plant_needs_none(stable_plant):
    # gamma slightly looser than 1/separation so the origin qualifies
    report = find_min_kp(stable_plant, 1.0, 48.0, kp_range=(0.0, 2.0))
    assert report.feasible
    assert report.kp == pytest.approx(0.0, abs=1e-9)


def test_find_min_kp_infeasible_range(unstable_plant):
    report = find_min_kp(unstable_plant, -1.0, 1.0, kp_range=(0.0, 0.5))
    assert not report.feasible
    assert math.isnan(report.kp)
    assert report.search_trace


def test_find_max_abs_kr_negative_direction(unstable_plant):
    report = find_max_abs_kr(unstable_plant, 2.35, 1.0, kr_range=(-5.0, 0.0))
    assert report.feasible
    # the boundary sits at |kr| = 1; bisection lands within resolution
    assert report.kr == pytest.approx(-1.0, abs=5e-3)
    ok, _ = feasibility(unstable_plant, 2.35, report.kr, 1.0)
    assert ok


def test_find_max_abs_kr_degenerate_range(unstable_plant):
    report = find_max_abs_kr(unstable_plant, 2.35, 1.0, kr_range=(0.0, 0.0))
    assert report.feasible
    assert report.kr == 0.0


def test_find_max_abs_kr_infeasible_base(unstable_plant):
    report = find_max_abs_kr(unstable_plant, 0.0, 1.0, kr_range=(-2.0, 2.0))
    assert not report.feasible
    assert math.isnan(report.kr)


def test_zero_reset_gain_maximizes_separation(unstable_plant):
    _, sep0 = feasibility(unstable_plant, 2.35, 0.0, 1.0)
    for kr in (-1.0, -0.5, 0.5, 1.0):
        _, sep = feasibility(unstable_plant, 2.35, kr, 1.0)
        assert sep <= sep0 + 1e-9


def test_design_report_serializes(unstable_plant):
    report = find_min_kp(unstable_plant, -1.0, 1.0, kp_range=(0.0, 5.0))
    doc = report.to_dict()
    assert doc["feasible"] is True
    assert isinstance(doc["search_trace"], list)
    assert doc["gain_bound"] is not None
