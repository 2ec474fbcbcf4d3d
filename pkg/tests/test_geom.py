import math
import pytest
from windpf.geom import Vec2, normalize_or, rot, sat, signed_angle, wrap

def test_signed_angle_quarter_turn():
    assert signed_angle(Vec2(1, 0), Vec2(0, 1)) == pytest.approx(math.pi / 2)

def test_signed_angle_identity():
    assert signed_angle(Vec2(1, 0), Vec2(1, 0)) == 0.0

def test_signed_angle_branch_cut():
    eps = 0.001
    assert signed_angle(Vec2(1, 0), Vec2(-1, -eps)) == pytest.approx(-math.pi + eps, rel=1e-06)

def test_signed_angle_degenerate_is_zero():
    assert signed_angle(Vec2(0, 0), Vec2(1, 0)) == 0.0
    assert signed_angle(Vec2(1, 0), Vec2(1e-09, 0)) == 0.0

def test_signed_angle_matches_wrapped_difference(rng):
    for a, b in rng.uniform(-10.0, 10.0, size=(2000, 2)):
        expected = wrap(b - a)
        if abs(expected) > math.pi - 1e-06:
            continue
        got = signed_angle(Vec2.from_angle(a), Vec2.from_angle(b))
        assert got == pytest.approx(expected, abs=1e-09)
        assert signed_angle(Vec2.from_angle(b), Vec2.from_angle(a)) == pytest.approx(-got, abs=1e-12)

@pytest.mark.parametrize('v,a,expected', [((1, 0), math.pi / 2, (0, 1)), ((1, 0), 0.0, (1, 0)), ((0.6, 0.8), math.pi, (-0.6, -0.8))])
def test_rot_examples(v, a, expected):
    r = rot(Vec2(*v), a)
    assert r.x == pytest.approx(expected[0], abs=1e-15)
    assert r.y == pytest.approx(expected[1], abs=1e-15)

def test_rot_preserves_norm_and_inverts(rng):
    for x, y, a in zip(rng.uniform(-700, 700, 1000), rng.uniform(-700, 700, 1000), rng.uniform(-math.pi, math.pi, 1000)):
        v = Vec2(x, y)
        r = rot(v, a)
        assert abs(r.norm() - v.norm()) <= 4 * math.ulp(v.norm())
        back = rot(r, -a)
        assert back.x == pytest.approx(x, abs=1e-09)
        assert back.y == pytest.approx(y, abs=1e-09)

@pytest.mark.parametrize('v,expected', [(0.5, 0.5), (-3, 0), (7, 1)])
def test_sat(v, expected):
    assert sat(v, 0, 1) == expected
    assert sat(sat(v, 0, 1), 0, 1) == expected

def test_sat_inverted_bounds_is_a_bug():
    with pytest.raises(AssertionError):
        sat(0.0, 1.0, 0.0)

def test_wrap_range_and_periodicity(rng):
    assert wrap(math.pi) == pytest.approx(math.pi)
    assert wrap(-math.pi) == pytest.approx(math.pi)
    for a in rng.uniform(-50, 50, 500):
        w = wrap(a)
        assert -math.pi < w <= math.pi
        assert wrap(w) == pytest.approx(w, abs=1e-12)
        assert abs(wrap(wrap(a + 2 * math.pi) - w)) < 1e-09

def test_unit_and_fallbacks():
    assert Vec2(3, 4).unit() == Vec2(0.6, 0.8)
    with pytest.raises(AssertionError):
        Vec2(0, 0).unit()
    v, degenerate = normalize_or(Vec2(0, 0), Vec2(0, 1))
    assert degenerate and v == Vec2(0, 1)
    assert Vec2(0, 0).angle() == 0.0
