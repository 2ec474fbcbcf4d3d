import math
import numpy as np
import pytest
from pydantic import ValidationError
from windpf.feasibility import DEFAULT_PARAMS, FeasibilityParams, bearing_infeasible, beta_limits, feas, feas_array, feas_legacy, lambda_bar
from windpf.diagnostics import feasibility_conformance

@pytest.mark.parametrize('lam', [0.0, 0.3, -1.2, math.pi / 2, math.pi])
def test_weak_wind_is_never_infeasible(lam):
    assert not bearing_infeasible(0.5, lam)

def test_binary_examples():
    assert bearing_infeasible(2.0, math.pi)
    assert bearing_infeasible(2.0, math.pi / 6)
    assert not bearing_infeasible(1.5, 0.2)

def test_lambda_bar_folds():
    assert lambda_bar(-0.3) == pytest.approx(0.3)
    assert lambda_bar(2.5) == pytest.approx(math.pi / 2)

def test_legacy_examples():
    assert feas_legacy(0.7, 0.0) == 1.0
    assert feas_legacy(1.0, math.pi / 4) == pytest.approx(1.0, abs=1e-12)
    assert feas_legacy(1.05, 1.2) == pytest.approx(0.5676, abs=0.001)

def test_legacy_jumps_upwind():
    assert feas_legacy(1.0, math.pi) == 1.0
    assert feas_legacy(1.0 + 1e-09, math.pi) == 0.0
    # crosswind at beta = 1 already sits on the binary boundary
    assert feas_legacy(1.0, math.pi / 2) == 0.0

def test_beta_limits_examples():
    assert beta_limits(math.pi / 2) == pytest.approx((0.9, 1.0))
    assert beta_limits(math.pi / 6) == pytest.approx((1.0, 2.0))
    b_minus, b_plus = beta_limits(0.0)
    assert b_plus == pytest.approx(114.6, rel=0.001)
    assert b_minus == pytest.approx(12.26, rel=0.001)

def test_beta_limits_continuous_at_cutoff():
    lco = DEFAULT_PARAMS.lambda_co
    lo = beta_limits(lco * (1 - 1e-09))
    hi = beta_limits(lco)
    assert lo == pytest.approx(hi, rel=1e-06)

def test_feas_examples():
    assert feas(0.8, math.pi / 2) == 1.0
    assert feas(0.95, math.pi / 2) == pytest.approx(0.5)
    assert feas(1.05, math.pi / 2) == 0.0

def test_feas_bounds_and_zero_where_binary_infeasible(rng):
    for beta, lam in zip(rng.uniform(0, 3, 20000), rng.uniform(-math.pi, math.pi, 20000)):
        f = feas(beta, lam)
        assert 0.0 <= f <= 1.0
        if bearing_infeasible(beta, lam):
            assert f == 0.0

def test_feas_is_one_without_wind():
    for lam in np.linspace(-math.pi, math.pi, 101):
        assert feas(0.0, lam) == 1.0

def test_feas_non_increasing_in_beta():
    betas = np.linspace(0.0, 3.0, 601)
    for lam in np.linspace(0.0, math.pi, 37):
        values = [feas(b, lam) for b in betas]
        assert all((b <= a + 1e-15 for a, b in zip(values, values[1:])))

@pytest.mark.parametrize('beta', [1.0, 1.004, 1.02, 1.1, 1.5, 2.0, 3.0, 10.0, 50.0])
def test_feas_non_increasing_in_lambda_in_excess_wind(beta):
    lams = np.linspace(DEFAULT_PARAMS.lambda_co, math.pi / 2, 4000)
    values = [feas(beta, lam) for lam in lams]
    assert all((b <= a + 1e-12 for a, b in zip(values, values[1:])))
    np.testing.assert_array_equal(feas_array(beta, lams), feas_array(beta, -lams))

def test_feas_continuous_on_dense_grid():
    n = 2000
    betas = np.linspace(0.0, 3.0, n)
    lams = np.linspace(-math.pi, math.pi, n)
    bound = 20.0 * max(betas[1] - betas[0], lams[1] - lams[0])
    prev_row = None
    worst = 0.0
    for start in range(0, n, 250):
        block = feas_array(betas[None, :], lams[start:start + 250, None])
        worst = max(worst, float(np.max(np.abs(np.diff(block, axis=1)))))
        if block.shape[0] > 1:
            worst = max(worst, float(np.max(np.abs(np.diff(block, axis=0)))))
        if prev_row is not None:
            worst = max(worst, float(np.max(np.abs(block[0] - prev_row))))
        prev_row = block[-1]
    assert worst < bound

def test_feas_array_matches_scalar(rng):
    beta = rng.uniform(0, 3, 2000)
    lam = rng.uniform(-math.pi, math.pi, 2000)
    expected = np.array([feas(b, l) for b, l in zip(beta, lam)])
    np.testing.assert_allclose(feas_array(beta, lam), expected, atol=1e-12)

def test_feas_array_keeps_dtype():
    out = feas_array(np.linspace(0, 2, 10), 1.0, dtype=np.float32)
    assert out.dtype == np.float32

def test_float32_conformance_passes():
    report = feasibility_conformance(n_beta=300, n_lambda=300)
    assert report['status'] == 'pass', report['issues']
    assert report['max_abs_diff'] <= report['tolerance']

def test_params_validated():
    with pytest.raises(ValidationError):
        FeasibilityParams(beta_buf=1.5)
    with pytest.raises(ValidationError):
        FeasibilityParams(lambda_co_deg=0.0)
    assert FeasibilityParams(lambda_co_deg=2.0).lambda_co == pytest.approx(math.radians(2.0))
