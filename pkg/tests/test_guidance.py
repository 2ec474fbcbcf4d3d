import math
import warnings
import numpy as np
import pytest
from windpf.exceptions import SaturationWarning
from windpf.feasibility import DEFAULT_PARAMS, feas_legacy
from windpf.geom import Vec2, wrap
from windpf.guidance import GuidanceConfig, VehicleState, adaptive_gain, airmass_rotation, blend_lookahead, curvature_rotation, guidance_step, infeasible_lookahead, lookahead_angle, lookahead_vector, track_error_boundary, wind_triangle_on_track
from windpf.path import Circle, Line

def _close(v: Vec2, x: float, y: float, tol: float=1e-09):
    assert v.x == pytest.approx(x, abs=tol)
    assert v.y == pytest.approx(y, abs=tol)

def test_track_error_boundary_branches():
    assert track_error_boundary(10.0, 7.0, 1.0) == pytest.approx(70.0)
    assert track_error_boundary(0.0, 7.0, 1.0) == pytest.approx(3.5)
    assert track_error_boundary(1.0, 7.0, 1.0) == pytest.approx(7.0)
    assert track_error_boundary(1.0 - 1e-09, 7.0, 1.0) == pytest.approx(7.0, abs=1e-06)

def test_lookahead_angle():
    on = lookahead_angle(0.0, 70.0)
    assert on.theta_l == pytest.approx(math.pi / 2)
    assert on.sigma_l == pytest.approx(1.0)
    far = lookahead_angle(100.0, 70.0)
    assert far.theta_l == 0.0
    assert far.sigma_l == 0.0
    half = lookahead_angle(35.0, 70.0)
    assert half.theta_l == pytest.approx(math.pi / 8)
    assert half.sigma_l == pytest.approx(0.1464, abs=0.0001)

def test_lookahead_vector():
    l_hat, degenerate = lookahead_vector(Vec2(0, 1), Vec2(1, 0), math.pi / 2)
    _close(l_hat, 1, 0)
    assert not degenerate
    l_hat, _ = lookahead_vector(Vec2(0, 1), Vec2(1, 0), 0.0)
    _close(l_hat, 0, 1)
    l_hat, _ = lookahead_vector(Vec2(0, 1), Vec2(1, 0), math.pi / 4)
    _close(l_hat, 0.7071067811865476, 0.7071067811865476)

def test_wind_triangle_tailwind_and_headwind():
    tail = wind_triangle_on_track(Vec2(5, 0), 10.0, Vec2(1, 0))
    assert tail.lambda0 == pytest.approx(0.0)
    assert tail.x0 == pytest.approx(0.0)
    assert tail.y0 == pytest.approx(math.pi)
    assert tail.v_g0 == pytest.approx(15.0)
    head = wind_triangle_on_track(Vec2(-5, 0), 10.0, Vec2(1, 0))
    assert abs(head.lambda0) == pytest.approx(math.pi)
    assert head.x0 == pytest.approx(0.0, abs=1e-12)
    assert head.y0 == pytest.approx(0.0, abs=1e-12)
    assert head.v_g0 == pytest.approx(5.0)

def test_wind_triangle_right_triangle():
    wt = wind_triangle_on_track(Vec2(0, 6), 10.0, Vec2(1, 0))
    assert wt.lambda0 == pytest.approx(-math.pi / 2)
    assert abs(wt.x0) == pytest.approx(0.6435, abs=0.0001)
    assert wt.v_g0 == pytest.approx(8.0, abs=1e-12)

def test_wind_triangle_satisfies_law_of_cosines(rng):
    n = 100000
    v_a = rng.uniform(3.0, 30.0, n)
    beta = rng.uniform(0.0, 0.999, n)
    wind_dir = rng.uniform(-math.pi, math.pi, n)
    lam = rng.uniform(-math.pi, math.pi, n)
    worst = 0.0
    for va, b, a, l in zip(v_a, beta, wind_dir, lam):
        w = b * va
        t_hat = Vec2.from_angle(a + l)
        wt = wind_triangle_on_track(Vec2.from_angle(a, w), va, t_hat)
        g = wt.v_g0
        worst = max(worst, abs(g * g + w * w - 2.0 * g * w * math.cos(l) - va * va) / (va * va))
    assert worst < 1e-09

def test_wind_triangle_without_wind():
    wt = wind_triangle_on_track(Vec2(0, 0), 9.0, Vec2(0, 1))
    assert (wt.lambda0, wt.x0, wt.y0, wt.v_g0) == (0.0, 0.0, math.pi, 9.0)

def test_airmass_rotation():
    assert airmass_rotation(0.0, 1.3) == 0.0
    assert airmass_rotation(0.5, math.pi / 2) == pytest.approx(math.pi / 6)
    assert airmass_rotation(1.0, math.pi / 2) == pytest.approx(math.pi / 2)
    assert airmass_rotation(2.0, math.pi / 2) == pytest.approx(math.pi / 2)

def test_curvature_rotation_examples():
    wt = wind_triangle_on_track(Vec2(0, 6), 10.0, Vec2(1, 0))
    assert curvature_rotation(wt, 0.6, wt.lambda0, 0.0, 10.0, 0.11, 1.0)[:2] == (0.0, 0.0)
    cr = curvature_rotation(wt, 0.6, wt.lambda0, 0.02, 10.0, 0.11, 1.0)
    assert cr.eta_c0 == pytest.approx(0.146, abs=0.0001)
    assert cr.eta_c == pytest.approx(cr.eta_c0)
    assert not cr.saturated
    assert curvature_rotation(wt, 0.6, wt.lambda0, 0.02, 10.0, 0.11, 0.0).eta_c == 0.0

def test_curvature_rotation_zeroed_when_on_track_bearing_infeasible():
    wt = wind_triangle_on_track(Vec2(-12, 0), 10.0, Vec2(1, 0))
    cr = curvature_rotation(wt, 1.2, wt.lambda0, 0.02, 10.0, 0.11, 1.0)
    assert (cr.eta_c0, cr.eta_c, cr.saturated) == (0.0, 0.0, False)

def test_curvature_rotation_saturation_is_reported():
    wt = wind_triangle_on_track(Vec2(0, 0), 10.0, Vec2(1, 0))
    with pytest.warns(SaturationWarning):
        cr = curvature_rotation(wt, 0.0, 0.0, 1.0, 10.0, 0.11, 1.0)
    assert cr.saturated
    assert cr.eta_c0 == pytest.approx(math.pi / 2)

def test_curvature_rotation_never_saturates_far_from_track():
    t_hat = Vec2(1, 0)
    v_a = 10.0
    worst = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter('error', SaturationWarning)
        for beta in np.linspace(0.0, 3.0, 61):
            for lam0 in np.linspace(-math.pi, math.pi, 73):
                wt = wind_triangle_on_track(Vec2.from_angle(-lam0, beta * v_a), v_a, t_hat)
                for radius in np.geomspace(1.0, 500.0, 25):
                    for kappa in (1.0 / radius, -1.0 / radius):
                        k_adj = adaptive_gain(0.11, 1.1, beta, kappa, 0.0)
                        cr = curvature_rotation(wt, beta, lam0, kappa, v_a, k_adj, 0.0)
                        assert not cr.saturated
                        worst = max(worst, abs(math.sin(cr.eta_c0)))
    assert worst < 1.0

def test_adaptive_gain():
    assert adaptive_gain(0.11, 1.1, 0.5, 0.0, 0.3) == pytest.approx(0.11)
    assert adaptive_gain(0.11, 1.1, 1.5, 0.02, 0.0) == pytest.approx(0.1375)
    assert adaptive_gain(0.11, 1.1, 1.5, 0.02, 1.0) == pytest.approx(0.11)
    assert adaptive_gain(0.11, 1.1, 0.5, 0.1, 0.0) == pytest.approx(0.44)

def test_infeasible_lookahead_examples():
    l_a, _ = infeasible_lookahead(Vec2(-1, 0), Vec2(2, 0), 1.0)
    _close(l_a, -1, 0)
    l_a, _ = infeasible_lookahead(Vec2(0, 1), Vec2(2, 0), 1.0)
    _close(l_a, -0.7559, 0.6547, tol=0.0001)
    for angle in np.linspace(-math.pi, math.pi, 9):
        l_a, _ = infeasible_lookahead(Vec2.from_angle(angle), Vec2(2, 0), 2.0)
        _close(l_a, -1, 0)

def test_infeasible_lookahead_without_wind_falls_back():
    l_a, degenerate = infeasible_lookahead(Vec2(0, 1), Vec2(0, 0), 10.0)
    assert degenerate
    _close(l_a, 0, 1)

def test_blend_lookahead():
    a, b = (Vec2(1, 0), Vec2(0, 1))
    assert blend_lookahead(a, b, 1.0) == (a, False)
    assert blend_lookahead(a, b, 0.0) == (b, False)
    mid, _ = blend_lookahead(a, b, 0.5)
    _close(mid, math.sqrt(0.5), math.sqrt(0.5))
    opposite, degenerate = blend_lookahead(Vec2(1, 0), Vec2(-1, 0), 0.5)
    assert degenerate
    assert opposite == Vec2(-1, 0)

def test_equilibrium_on_line():
    out = guidance_step(VehicleState(Vec2(0, 0), Vec2(10, 0)), Vec2(0, 0), Line(Vec2(0, 0), Vec2(1, 0)), GuidanceConfig())
    assert out.roll_ref == pytest.approx(0.0, abs=1e-12)
    assert out.a_lat_ref == pytest.approx(0.0, abs=1e-12)
    assert out.telemetry.feas == 1.0
    _close(out.telemetry.l_a, 1, 0)
    assert out.v_a_ref == GuidanceConfig().airspeed.v_a_nom

def test_steady_turn_on_circle():
    out = guidance_step(VehicleState(Vec2(50, 0), Vec2(0, 10)), Vec2(0, 0), Circle(Vec2(0, 0), 50.0), GuidanceConfig())
    tel = out.telemetry
    assert tel.k_adj == pytest.approx(0.11)
    assert tel.eta_c0 == pytest.approx(math.asin(0.2 / 1.1), abs=0.001)
    assert out.a_lat_ref == pytest.approx(2.0, abs=0.01)
    assert out.roll_ref == pytest.approx(math.atan(2.0 / 9.81), abs=0.001)

def test_safety_fixed_point_faces_upwind():
    # bearing dead upwind in a 12 m/s wind at 10 m/s airspeed
    state = VehicleState(Vec2(0, 0), Vec2(-10, 0) + Vec2(12, 0))
    out = guidance_step(state, Vec2(12, 0), Line(Vec2(0, 0), Vec2(-1, 0)), GuidanceConfig())
    assert out.telemetry.feas == 0.0
    _close(out.telemetry.l_a, -1, 0)
    assert out.telemetry.eta_a == pytest.approx(0.0, abs=1e-09)
    assert out.roll_ref == pytest.approx(0.0, abs=1e-09)

def test_invalid_airspeed_holds_wings_level():
    w = Vec2(5, 0)
    cfg = GuidanceConfig()
    out = guidance_step(VehicleState(Vec2(0, 30), w + Vec2(1, 0)), w, Line(Vec2(0, 0), Vec2(1, 0)), cfg)
    assert out.roll_ref == 0.0
    assert out.v_a_ref == cfg.airspeed.v_a_nom
    assert 'invalid_airspeed' in out.telemetry.degenerate_flags

def test_circle_center_is_flagged_not_raised():
    out = guidance_step(VehicleState(Vec2(0, 0), Vec2(10, 0)), Vec2(0, 0), Circle(Vec2(0, 0), 50.0), GuidanceConfig())
    assert 'degenerate_projection' in out.telemetry.degenerate_flags
    assert math.isfinite(out.roll_ref)

def test_roll_saturates():
    cfg = GuidanceConfig()
    out = guidance_step(VehicleState(Vec2(0, 0), Vec2(0, 10)), Vec2(0, 0), Line(Vec2(0, 0), Vec2(1, 0)), cfg)
    assert abs(out.roll_ref) == pytest.approx(cfg.phi_max)

def test_fuzz_outputs_finite_and_bounded(rng, fuzz_cases, quiet_saturation):
    cfg = GuidanceConfig()
    spd = cfg.airspeed
    paths = [Line(Vec2(0, 0), Vec2(1, 0)), Line(Vec2(10, -20), Vec2(-1, 3)), Circle(Vec2(0, 0), 50.0), Circle(Vec2(30, 30), 1.0, ccw=False), Circle(Vec2(0, 0), 500.0)]
    r = rng.uniform(-600, 600, size=(fuzz_cases, 2))
    heading = rng.uniform(-math.pi, math.pi, fuzz_cases)
    v_a = rng.uniform(0.0, 25.0, fuzz_cases)
    w = rng.uniform(-25, 25, size=(fuzz_cases, 2))
    which = rng.integers(0, len(paths), fuzz_cases)
    for i in range(fuzz_cases):
        wind = Vec2(*w[i])
        state = VehicleState(Vec2(*r[i]), Vec2.from_angle(heading[i], v_a[i]) + wind)
        out = guidance_step(state, wind, paths[which[i]], cfg)
        tel = out.telemetry
        assert math.isfinite(out.roll_ref) and math.isfinite(out.a_lat_ref) and math.isfinite(out.v_a_ref)
        assert abs(out.roll_ref) <= cfg.phi_max + 1e-12
        assert spd.v_a_nom - 1e-12 <= out.v_a_ref <= spd.v_a_max + 1e-12
        assert 0.0 <= tel.feas <= 1.0
        assert tel.l_a.is_finite() and tel.l_hat.is_finite()
        if 'invalid_airspeed' not in tel.degenerate_flags:
            assert abs(tel.l_a.norm() - 1.0) < 1e-09
        if tel.sigma_l == 0.0 and tel.beta <= 3.0:
            assert not tel.asin_saturated

def _max_heading_step():
    circle = Circle(Vec2(0, 0), 50.0)
    cfg = GuidanceConfig()
    v_a_vec = Vec2.from_angle(math.radians(190.0), 10.0)
    steps = []
    prev = None
    for magnitude in np.arange(8.5, 11.5, 0.002):
        wind = Vec2.from_angle(math.radians(10.0), float(magnitude))
        out = guidance_step(VehicleState(Vec2(50.41, 0.0), v_a_vec + wind), wind, circle, cfg)
        if prev is not None:
            steps.append(abs(wrap(out.heading_ref - prev)))
        prev = out.heading_ref
    return max(steps)

def test_heading_command_continuous_through_wind_boundary(quiet_saturation):
    assert math.degrees(_max_heading_step()) < 2.0

def test_legacy_feasibility_jumps(monkeypatch, quiet_saturation):
    monkeypatch.setattr('windpf.guidance.feas', lambda beta, lam, p=DEFAULT_PARAMS: feas_legacy(beta, lam))
    assert math.degrees(_max_heading_step()) > 3.0
